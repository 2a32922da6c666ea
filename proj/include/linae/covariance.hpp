#pragma once

#include <linae/types.hpp>

#include <memory>
#include <optional>
#include <vector>

namespace linae {

/// Training data: m input vectors x_t and m target vectors y_t in C^n.
///
/// Samples are stored one per column. In the auto-associative case the
/// target matrix is not stored; `targets()` returns the inputs.
class Dataset {
public:
	/// Validates and builds. Empty `targets` means auto-associative. Targets that are
	/// entrywise identical to the inputs are also folded into the auto-associative case.
	Dataset(ComplexMatrix inputs, std::optional<ComplexMatrix> targets = std::nullopt, bool centered = false);

	Index dim() const noexcept { return inputs_.rows(); }
	Index samples() const noexcept { return inputs_.cols(); }
	bool auto_associative() const noexcept { return !targets_.has_value(); }
	bool centered() const noexcept { return centered_; }

	const ComplexMatrix &inputs() const noexcept { return inputs_; }
	const ComplexMatrix &targets() const noexcept { return targets_ ? *targets_ : inputs_; }

private:
	ComplexMatrix inputs_;
	std::optional<ComplexMatrix> targets_;
	bool centered_ = false;
};

Dataset build_dataset(const std::vector<ComplexVector> &inputs,
                      const std::optional<std::vector<ComplexVector>> &targets = std::nullopt);

/// Subtracts the input (and target) sample means. Returns a new dataset.
Dataset center(const Dataset &d);

/// Summed (not averaged) second moments of a dataset, plus the composite
/// sigma = Sigma_YX (Sigma_XX + ridge I)^{-1} Sigma_XY.
struct CovarianceSet {
	ComplexMatrix sigma_xx;
	ComplexMatrix sigma_xy;
	ComplexMatrix sigma_yx;
	ComplexMatrix sigma_yy;
	ComplexMatrix sigma;

	bool xx_invertible = false;
	double condition_xx = 0.0;
	double ridge = 0.0;
	bool auto_associative = false;
	/// Sample count the sums were taken over (0 when built from matrices).
	Index samples = 0;

	Index dim() const noexcept { return sigma_xx.rows(); }

	/// Solves (Sigma_XX + ridge I) X = rhs using the cached Cholesky factor.
	ComplexMatrix solve_xx(const ComplexMatrix &rhs) const;

	/// Sigma_YX (Sigma_XX + ridge I)^{-1}: the unconstrained regression map.
	ComplexMatrix regression_map() const;

	/// Per-sample view (every matrix divided by `samples`). Never used by solvers.
	CovarianceSet normalized() const;

	std::shared_ptr<const Eigen::LDLT<ComplexMatrix>> xx_factor;
};

/// Eigenvalue-based condition number of a Hermitian positive semidefinite matrix.
double hermitian_condition(const ComplexMatrix &h);

/// Throws SingularMatrixError when Sigma_XX is singular and ridge is zero.
CovarianceSet compute_covariances(const Dataset &d, double ridge = 0.0);

/// Covariances of an autoencoder trained to map noisy inputs x + n to clean targets x.
CovarianceSet denoising_covariances(const ComplexMatrix &sigma_xx, const ComplexMatrix &sigma_nn,
                                    const ComplexMatrix &sigma_nx, const ComplexMatrix &sigma_xn);

/// Assembles a covariance set from explicit matrices (used by denoising and tests).
/// `auto_associative` selects the data-free solver paths; sigma is then sigma_xx.
CovarianceSet covariances_from_matrices(ComplexMatrix sigma_xx, ComplexMatrix sigma_xy, ComplexMatrix sigma_yy,
                                        bool auto_associative, double ridge = 0.0);

} // namespace linae
