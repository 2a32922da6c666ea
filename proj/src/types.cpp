#include <linae/types.hpp>

#include <algorithm>
#include <limits>

namespace linae {

double relative_residual(const ComplexMatrix &lhs, const ComplexMatrix &rhs) {
	const double scale = std::max(lhs.norm(), rhs.norm());
	if (scale == 0.0)
		return 0.0;
	return (lhs - rhs).norm() / scale;
}

double condition_number(const ComplexMatrix &m) {
	if (m.size() == 0)
		return 1.0;
	Eigen::JacobiSVD<ComplexMatrix> svd(m);
	const auto &s = svd.singularValues();
	const double smin = s(s.size() - 1);
	if (smin <= 0.0)
		return std::numeric_limits<double>::infinity();
	return s(0) / smin;
}

Index numerical_rank(const ComplexMatrix &m, double tol) {
	if (m.size() == 0)
		return 0;
	Eigen::JacobiSVD<ComplexMatrix> svd(m);
	const auto &s = svd.singularValues();
	if (s(0) == 0.0)
		return 0;
	Index r = 0;
	for (Index i = 0; i < s.size(); ++i)
		if (s(i) > tol * s(0))
			++r;
	return r;
}

bool is_full_rank(const ComplexMatrix &m, double tol) {
	return m.size() > 0 && numerical_rank(m, tol) == std::min(m.rows(), m.cols());
}

bool all_finite(const ComplexMatrix &m) {
	return m.allFinite();
}

double hermitian_defect(const ComplexMatrix &m) {
	const double nrm = m.norm();
	if (nrm == 0.0)
		return 0.0;
	return (m - m.adjoint()).norm() / nrm;
}

} // namespace linae
