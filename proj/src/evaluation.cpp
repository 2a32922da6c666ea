#include <linae/evaluation.hpp>

#include <algorithm>

namespace linae {

double generalization_error(const ComplexMatrix &a, const ComplexVector &x) {
	if (x.size() != a.rows())
		throw DimensionError("generalization_error: x must have length n");
	const ComplexVector residual = x - projection(a) * x;
	return residual.squaredNorm();
}

ComplexVector recycle(const ComplexMatrix &w, const ComplexVector &x, int m) {
	if (m < 1)
		throw DimensionError("recycle: m must be at least 1");
	if (w.rows() != w.cols() || w.cols() != x.size())
		throw DimensionError("recycle: W must be n x n and x of length n");
	ComplexVector out = x;
	for (int k = 0; k < m; ++k)
		out = w * out;
	return out;
}

ConverseReport projection_converse_check(const AutoencoderParams &params) {
	ConverseReport r;
	const ComplexMatrix &a = params.a();
	const ComplexMatrix &b = params.b();
	const ComplexMatrix w = a * b;
	r.idempotence_residual = (w * w - w).norm() / std::max(w.norm(), 1e-300);
	r.is_projection = r.idempotence_residual <= 1e-9;
	const Index p = params.p();
	r.ba_identity_residual = (b * a - ComplexMatrix::Identity(p, p)).norm();
	if (params.a_full_rank()) {
		const ComplexMatrix pinv = (a.adjoint() * a).llt().solve(ComplexMatrix(a.adjoint()));
		r.b_recovery_residual = (b - pinv).norm() / std::max(b.norm(), 1e-300);
	} else {
		r.b_recovery_residual = std::numeric_limits<double>::infinity();
	}
	r.converse_holds = r.is_projection && r.ba_identity_residual <= 1e-8 && r.b_recovery_residual <= 1e-8;
	return r;
}

AutoencoderParams rank_p_factorize(const ComplexMatrix &w, Index p, double tol) {
	if (w.rows() != w.cols())
		throw DimensionError("rank_p_factorize: W must be square");
	const Index n = w.rows();
	if (p < 1 || p > n)
		throw DimensionError("rank_p_factorize: p must lie in [1, n]");
	Eigen::JacobiSVD<ComplexMatrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
	const RealVector &s = svd.singularValues();
	const Index rank = numerical_rank(w, tol);
	if (rank > p)
		throw RankDeficientError("rank_p_factorize: rank(W) = " + std::to_string(rank) + " exceeds p = " +
		                         std::to_string(p));
	// Keep exactly p singular triplets; the trailing ones are (numerically) zero.
	ComplexMatrix a = svd.matrixU().leftCols(p) * s.head(p).asDiagonal();
	ComplexMatrix b = svd.matrixV().leftCols(p).adjoint();
	return AutoencoderParams(std::move(a), std::move(b));
}

ComplexMatrix null_space(const ComplexMatrix &m, double tol) {
	Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
	const RealVector &s = svd.singularValues();
	const double top = s.size() ? s(0) : 0.0;
	Index rank = 0;
	for (Index i = 0; i < s.size(); ++i)
		if (s(i) > tol * top)
			++rank;
	return svd.matrixV().rightCols(m.cols() - rank);
}

} // namespace linae
