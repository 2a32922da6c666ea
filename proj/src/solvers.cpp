#include <linae/solvers.hpp>

#include <algorithm>
#include <string>

namespace linae {

namespace {

// Solves G X = rhs for Hermitian positive definite G, refusing near-singular G.
ComplexMatrix hpd_solve(const ComplexMatrix &g, const ComplexMatrix &rhs, const char *what) {
	const double cond = hermitian_condition(g);
	if (!(cond <= kSingularCondition))
		throw SingularMatrixError(std::string(what) + " is singular", cond);
	Eigen::LLT<ComplexMatrix> llt(g);
	if (llt.info() != Eigen::Success)
		throw SingularMatrixError(std::string(what) + " is not positive definite", cond);
	return llt.solve(rhs);
}

void require_dim(const CovarianceSet &cov, Index n, const char *what) {
	if (cov.dim() != n)
		throw DimensionError(std::string(what) + ": dimension " + std::to_string(n) +
		                     " does not match covariance dimension " + std::to_string(cov.dim()));
}

// Thin QR with an upper-triangular p x p factor; (A*A)^{-1}A* = R^{-1} Q*.
struct ThinQr {
	ComplexMatrix q;
	ComplexMatrix r;
};

ThinQr thin_qr(const ComplexMatrix &a) {
	Eigen::HouseholderQR<ComplexMatrix> qr(a);
	ThinQr out;
	out.q = qr.householderQ() * ComplexMatrix::Identity(a.rows(), a.cols());
	out.r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
	return out;
}

} // namespace

AutoencoderParams::AutoencoderParams(ComplexMatrix a, ComplexMatrix b, double rank_tol)
    : a_(std::move(a)), b_(std::move(b)), rank_tol_(rank_tol) {
	if (a_.cols() == 0 || a_.rows() == 0)
		throw DimensionError("AutoencoderParams: A must be nonempty");
	if (b_.rows() != a_.cols() || b_.cols() != a_.rows())
		throw DimensionError("AutoencoderParams: A is " + std::to_string(a_.rows()) + "x" +
		                     std::to_string(a_.cols()) + " but B is " + std::to_string(b_.rows()) + "x" +
		                     std::to_string(b_.cols()));
	if (a_.cols() > a_.rows())
		throw DimensionError("AutoencoderParams: hidden width p must not exceed n");
	if (!a_.allFinite() || !b_.allFinite())
		throw NonFiniteError("AutoencoderParams: non-finite entries");
	a_full_rank_ = is_full_rank(a_, rank_tol_);
	b_full_rank_ = is_full_rank(b_, rank_tol_);
}

ComplexMatrix regression_solve(const CovarianceSet &cov) {
	if (!cov.xx_invertible && cov.ridge == 0.0)
		throw SingularMatrixError("regression_solve: Sigma_XX is singular", cov.condition_xx);
	return cov.regression_map();
}

ComplexMatrix projection(const ComplexMatrix &a, double tol) {
	if (!is_full_rank(a, tol) || a.cols() > a.rows())
		throw RankDeficientError("projection: columns are linearly dependent");
	const ThinQr qr = thin_qr(a);
	return qr.q * qr.q.adjoint();
}

ComplexMatrix solve_b_given_a(const ComplexMatrix &a, const CovarianceSet &cov, double tol) {
	require_dim(cov, a.rows(), "solve_b_given_a");
	if (a.cols() > a.rows() || !is_full_rank(a, tol))
		throw RankDeficientError("solve_b_given_a: A is rank deficient");
	const ThinQr qr = thin_qr(a);
	const auto r = qr.r.triangularView<Eigen::Upper>();
	if (cov.auto_associative)
		return r.solve(ComplexMatrix(qr.q.adjoint()));
	// A* Sigma_YX Sigma_XX^{-1} = (Sigma_XX^{-1} Sigma_XY A)*.
	const ComplexMatrix rhs = cov.solve_xx(cov.sigma_xy * a).adjoint();
	const ComplexMatrix gram = a.adjoint() * a;
	return hpd_solve(gram, rhs, "A*A");
}

ComplexMatrix solve_a_given_b(const ComplexMatrix &b, const CovarianceSet &cov, double tol) {
	require_dim(cov, b.cols(), "solve_a_given_b");
	if (b.rows() > b.cols() || !is_full_rank(b, tol))
		throw RankDeficientError("solve_a_given_b: B is rank deficient");
	const ComplexMatrix b_sxx = b * cov.sigma_xx;
	ComplexMatrix m = b_sxx * b.adjoint();
	m = 0.5 * (m + m.adjoint()).eval();
	// Sigma_YX B* M^{-1} = (M^{-1} B Sigma_XY)*.
	return hpd_solve(m, b * cov.sigma_xy, "B Sigma_XX B*").adjoint();
}

ComplexMatrix chain_product(const std::vector<ComplexMatrix> &stages, Index n) {
	if (stages.empty())
		return ComplexMatrix::Identity(n, n);
	ComplexMatrix out = stages.front();
	for (std::size_t k = 1; k < stages.size(); ++k) {
		if (out.cols() != stages[k].rows())
			throw DimensionError("chain_product: stage " + std::to_string(k) + " has incompatible shape");
		out = out * stages[k];
	}
	return out;
}

ComplexMatrix deep_solve_middle(const std::vector<ComplexMatrix> &left, const std::vector<ComplexMatrix> &right,
                                const CovarianceSet &cov, double tol) {
	const Index n = cov.dim();
	const ComplexMatrix l = chain_product(left, n);
	const ComplexMatrix r = chain_product(right, n);
	if (l.rows() != n || r.cols() != n)
		throw DimensionError("deep_solve_middle: outer stages must map to and from dimension n");
	if (l.cols() > l.rows() || !is_full_rank(l, tol))
		throw RankDeficientError("deep_solve_middle: left composite is rank deficient");
	if (r.rows() > r.cols() || !is_full_rank(r, tol))
		throw RankDeficientError("deep_solve_middle: right composite is rank deficient");

	ComplexMatrix inner = (r * cov.sigma_xx) * r.adjoint();
	inner = 0.5 * (inner + inner.adjoint()).eval();
	const ComplexMatrix gram = l.adjoint() * l;
	// L* Sigma_YX R* = L* (R Sigma_XY)*.
	const ComplexMatrix t = l.adjoint() * (r * cov.sigma_xy).adjoint();
	const ComplexMatrix right_solved = hpd_solve(inner, t.adjoint(), "R Sigma_XX R*").adjoint();
	return hpd_solve(gram, right_solved, "L*L");
}

namespace {

// Pseudo-inverse of a Hermitian positive semidefinite matrix applied to rhs.
ComplexMatrix hpsd_pinv_solve(const ComplexMatrix &g, const ComplexMatrix &rhs, double tol) {
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
	const RealVector &ev = es.eigenvalues();
	const double top = ev.cwiseAbs().maxCoeff();
	RealVector inv = RealVector::Zero(ev.size());
	for (Index i = 0; i < ev.size(); ++i)
		if (ev(i) > tol * top)
			inv(i) = 1.0 / ev(i);
	const ComplexMatrix &v = es.eigenvectors();
	return v * (inv.asDiagonal() * (v.adjoint() * rhs));
}

} // namespace

ComplexMatrix deep_solve_middle_min_norm(const std::vector<ComplexMatrix> &left,
                                         const std::vector<ComplexMatrix> &right, const CovarianceSet &cov,
                                         double tol) {
	const Index n = cov.dim();
	const ComplexMatrix l = chain_product(left, n);
	const ComplexMatrix r = chain_product(right, n);
	if (l.rows() != n || r.cols() != n)
		throw DimensionError("deep_solve_middle_min_norm: outer stages must map to and from dimension n");
	ComplexMatrix inner = (r * cov.sigma_xx) * r.adjoint();
	inner = 0.5 * (inner + inner.adjoint()).eval();
	ComplexMatrix gram = l.adjoint() * l;
	gram = 0.5 * (gram + gram.adjoint()).eval();
	const ComplexMatrix t = l.adjoint() * (r * cov.sigma_xy).adjoint();
	// Gram eigenvalues are squared singular values; below ~1e-12 relative they are rounding noise.
	const double gram_tol = std::max(tol * tol, 1e-12);
	const ComplexMatrix right_solved = hpsd_pinv_solve(inner, t.adjoint(), gram_tol).adjoint();
	return hpsd_pinv_solve(gram, right_solved, gram_tol);
}

double reconstruction_error(const ComplexMatrix &w, const CovarianceSet &cov) {
	require_dim(cov, w.rows(), "reconstruction_error");
	if (w.cols() != cov.dim())
		throw DimensionError("reconstruction_error: W must be n x n");
	const double tr_yy = cov.sigma_yy.trace().real();
	const double cross = w.cwiseProduct(cov.sigma_xy.transpose()).sum().real();
	const double quad = (w * cov.sigma_xx).cwiseProduct(w.conjugate()).sum().real();
	return std::max(0.0, tr_yy - 2.0 * cross + quad);
}

double reconstruction_error(const AutoencoderParams &params, const CovarianceSet &cov) {
	require_dim(cov, params.n(), "reconstruction_error");
	const ComplexMatrix &a = params.a();
	const ComplexMatrix &b = params.b();
	const double tr_yy = cov.sigma_yy.trace().real();
	const double cross = (b * cov.sigma_xy).cwiseProduct(a.transpose()).sum().real();
	const ComplexMatrix gram = a.adjoint() * a;
	const ComplexMatrix inner = (b * cov.sigma_xx) * b.adjoint();
	const double quad = gram.cwiseProduct(inner.transpose()).sum().real();
	return std::max(0.0, tr_yy - 2.0 * cross + quad);
}

double reconstruction_error_samples(const ComplexMatrix &w, const Dataset &d) {
	if (w.rows() != d.dim() || w.cols() != d.dim())
		throw DimensionError("reconstruction_error_samples: W must be n x n");
	double total = 0.0;
	for (Index t = 0; t < d.samples(); ++t) {
		const ComplexVector r = d.targets().col(t) - w * d.inputs().col(t);
		total += r.squaredNorm();
	}
	return total;
}

} // namespace linae
