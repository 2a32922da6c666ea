#include <linae/covariance.hpp>
#include <linae/kernels.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace linae {

namespace {

constexpr double kHermitianTolerance = 1e-10;

void require_hermitian(const ComplexMatrix &m, const char *name) {
	if (m.rows() != m.cols())
		throw DimensionError(std::string(name) + " must be square");
	if (hermitian_defect(m) > kHermitianTolerance)
		throw NotHermitianError(std::string(name) + " is not Hermitian (defect " +
		                        std::to_string(hermitian_defect(m)) + ")");
}

} // namespace

Dataset::Dataset(ComplexMatrix inputs, std::optional<ComplexMatrix> targets, bool centered)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), centered_(centered) {
	if (inputs_.rows() == 0 || inputs_.cols() == 0)
		throw DimensionError("dataset must contain at least one nonempty sample");
	if (!inputs_.allFinite())
		throw NonFiniteError("dataset inputs contain NaN or Inf");
	if (targets_) {
		if (targets_->rows() != inputs_.rows() || targets_->cols() != inputs_.cols())
			throw DimensionError("targets must match inputs in count and length");
		if (!targets_->allFinite())
			throw NonFiniteError("dataset targets contain NaN or Inf");
		if (*targets_ == inputs_)
			targets_.reset();
	}
}

Dataset build_dataset(const std::vector<ComplexVector> &inputs,
                      const std::optional<std::vector<ComplexVector>> &targets) {
	if (inputs.empty())
		throw DimensionError("build_dataset: no input vectors");
	const Index n = inputs.front().size();
	auto pack = [n](const std::vector<ComplexVector> &vs, const char *what) {
		ComplexMatrix m(n, static_cast<Index>(vs.size()));
		for (std::size_t t = 0; t < vs.size(); ++t) {
			if (vs[t].size() != n)
				throw DimensionError(std::string("build_dataset: ") + what + " vector " + std::to_string(t) +
				                     " has length " + std::to_string(vs[t].size()) + ", expected " +
				                     std::to_string(n));
			m.col(static_cast<Index>(t)) = vs[t];
		}
		return m;
	};
	ComplexMatrix x = pack(inputs, "input");
	if (!targets)
		return Dataset(std::move(x));
	if (targets->size() != inputs.size())
		throw DimensionError("build_dataset: target count differs from input count");
	return Dataset(std::move(x), pack(*targets, "target"));
}

Dataset center(const Dataset &d) {
	auto centered = [](const ComplexMatrix &m) {
		const ComplexVector mean = m.rowwise().mean();
		ComplexMatrix out = m.colwise() - mean;
		return out;
	};
	if (d.auto_associative())
		return Dataset(centered(d.inputs()), std::nullopt, true);
	return Dataset(centered(d.inputs()), centered(d.targets()), true);
}

double hermitian_condition(const ComplexMatrix &h) {
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
	const RealVector ev = es.eigenvalues().cwiseAbs();
	const double lo = ev.minCoeff();
	const double hi = ev.maxCoeff();
	if (hi == 0.0)
		return std::numeric_limits<double>::infinity();
	if (lo == 0.0)
		return std::numeric_limits<double>::infinity();
	return hi / lo;
}

ComplexMatrix CovarianceSet::solve_xx(const ComplexMatrix &rhs) const {
	if (!xx_factor)
		throw SingularMatrixError("Sigma_XX has no factorization", condition_xx);
	return xx_factor->solve(rhs);
}

ComplexMatrix CovarianceSet::regression_map() const {
	if (auto_associative)
		return ComplexMatrix::Identity(dim(), dim());
	// B Sigma_XX = Sigma_YX  <=>  Sigma_XX B* = Sigma_XY.
	return solve_xx(sigma_xy).adjoint();
}

CovarianceSet CovarianceSet::normalized() const {
	CovarianceSet out = *this;
	if (samples <= 0)
		return out;
	const double s = 1.0 / static_cast<double>(samples);
	out.sigma_xx *= s;
	out.sigma_xy *= s;
	out.sigma_yx *= s;
	out.sigma_yy *= s;
	out.sigma *= s;
	out.xx_factor.reset();
	return out;
}

CovarianceSet covariances_from_matrices(ComplexMatrix sigma_xx, ComplexMatrix sigma_xy, ComplexMatrix sigma_yy,
                                        bool auto_associative, double ridge) {
	if (ridge < 0.0 || !std::isfinite(ridge))
		throw ConfigError("ridge must be a finite nonnegative number");
	const Index n = sigma_xx.rows();
	if (sigma_xy.rows() != n || sigma_xy.cols() != n || sigma_yy.rows() != n || sigma_yy.cols() != n)
		throw DimensionError("covariance matrices must all be n x n");
	if (!sigma_xx.allFinite() || !sigma_xy.allFinite() || !sigma_yy.allFinite())
		throw NonFiniteError("covariance matrices contain NaN or Inf");
	require_hermitian(sigma_xx, "Sigma_XX");
	require_hermitian(sigma_yy, "Sigma_YY");

	CovarianceSet cov;
	cov.ridge = ridge;
	cov.auto_associative = auto_associative;
	cov.condition_xx = hermitian_condition(sigma_xx);
	cov.xx_invertible = cov.condition_xx <= kSingularCondition;
	if (!cov.xx_invertible && ridge == 0.0)
		throw SingularMatrixError("Sigma_XX is not invertible; supply a ridge term", cov.condition_xx);

	ComplexMatrix regularized = sigma_xx;
	if (ridge > 0.0)
		regularized.diagonal().array() += ridge;
	cov.xx_factor = std::make_shared<const Eigen::LDLT<ComplexMatrix>>(regularized);

	cov.sigma_xx = std::move(sigma_xx);
	cov.sigma_yx = sigma_xy.adjoint();
	cov.sigma_xy = std::move(sigma_xy);
	cov.sigma_yy = std::move(sigma_yy);
	if (auto_associative) {
		cov.sigma = cov.sigma_xx;
	} else {
		const ComplexMatrix s = cov.sigma_yx * cov.solve_xx(cov.sigma_xy);
		cov.sigma = 0.5 * (s + s.adjoint());
	}
	return cov;
}

CovarianceSet compute_covariances(const Dataset &d, double ridge) {
	const kernels::SplitMatrix x(d.inputs());
	ComplexMatrix sxx = kernels::cross_gram(x.view(), x.view(), true);
	CovarianceSet cov;
	if (d.auto_associative()) {
		ComplexMatrix sxy = sxx;
		ComplexMatrix syy = sxx;
		cov = covariances_from_matrices(std::move(sxx), std::move(sxy), std::move(syy), true, ridge);
	} else {
		const kernels::SplitMatrix y(d.targets());
		ComplexMatrix sxy = kernels::cross_gram(x.view(), y.view(), false);
		ComplexMatrix syy = kernels::cross_gram(y.view(), y.view(), true);
		cov = covariances_from_matrices(std::move(sxx), std::move(sxy), std::move(syy), false, ridge);
	}
	cov.samples = d.samples();
	return cov;
}

CovarianceSet denoising_covariances(const ComplexMatrix &sigma_xx, const ComplexMatrix &sigma_nn,
                                    const ComplexMatrix &sigma_nx, const ComplexMatrix &sigma_xn) {
	const Index n = sigma_xx.rows();
	for (const ComplexMatrix *m : {&sigma_xx, &sigma_nn, &sigma_nx, &sigma_xn})
		if (m->rows() != n || m->cols() != n)
			throw DimensionError("denoising_covariances: all inputs must be n x n");
	require_hermitian(sigma_xx, "Sigma_XX");
	require_hermitian(sigma_nn, "Sigma_NN");
	const double scale = std::max({sigma_nx.norm(), sigma_xn.norm(), 1e-300});
	if ((sigma_nx - sigma_xn.adjoint()).norm() > kHermitianTolerance * scale)
		throw NotHermitianError("denoising_covariances: Sigma_NX must equal Sigma_XN*");

	const bool noiseless = sigma_nn.isZero(0.0) && sigma_nx.isZero(0.0) && sigma_xn.isZero(0.0);
	ComplexMatrix eff_xx = sigma_xx + sigma_nn + sigma_nx + sigma_xn;
	eff_xx = 0.5 * (eff_xx + eff_xx.adjoint()).eval();
	// Inputs are noisy copies x + n, targets are the clean x.
	ComplexMatrix eff_xy = sigma_xx + sigma_nx;
	return covariances_from_matrices(std::move(eff_xx), std::move(eff_xy), sigma_xx, noiseless);
}

} // namespace linae
