#pragma once

#include <linae/covariance.hpp>
#include <linae/types.hpp>

#include <vector>

namespace linae {

/// Encoder/decoder pair of a linear autoencoder: W = A B with A n x p (decoder)
/// and B p x n (encoder). Rank flags are computed once, with the tolerance kept
/// alongside them.
class AutoencoderParams {
public:
	AutoencoderParams(ComplexMatrix a, ComplexMatrix b, double rank_tol = kRankTolerance);

	const ComplexMatrix &a() const noexcept { return a_; }
	const ComplexMatrix &b() const noexcept { return b_; }
	Index n() const noexcept { return a_.rows(); }
	Index p() const noexcept { return a_.cols(); }

	ComplexMatrix w() const { return a_ * b_; }

	bool a_full_rank() const noexcept { return a_full_rank_; }
	bool b_full_rank() const noexcept { return b_full_rank_; }
	double rank_tolerance() const noexcept { return rank_tol_; }

private:
	ComplexMatrix a_;
	ComplexMatrix b_;
	double rank_tol_;
	bool a_full_rank_;
	bool b_full_rank_;
};

/// Unconstrained least-squares map B = Sigma_YX Sigma_XX^{-1} (n x n).
ComplexMatrix regression_solve(const CovarianceSet &cov);

/// Orthogonal projector A (A*A)^{-1} A* onto the column span of `a`.
ComplexMatrix projection(const ComplexMatrix &a, double tol = kRankTolerance);

/// Optimal B for fixed full-rank A: (A*A)^{-1} A* Sigma_YX Sigma_XX^{-1}.
/// In the auto-associative case this is (A*A)^{-1} A* and does not touch the data.
ComplexMatrix solve_b_given_a(const ComplexMatrix &a, const CovarianceSet &cov, double tol = kRankTolerance);

/// Optimal A for fixed full-rank B: Sigma_YX B* (B Sigma_XX B*)^{-1}.
ComplexMatrix solve_a_given_b(const ComplexMatrix &b, const CovarianceSet &cov, double tol = kRankTolerance);

/// Optimal middle factor C of W = L C R for fixed outer stages.
///
/// `left` lists the stages between the output and C (output side first) and
/// `right` lists the stages between C and the input (again output side first),
/// so W = left[0] ... left[k-1] * C * right[0] ... right[l-1]. Empty lists act
/// as identity.
ComplexMatrix deep_solve_middle(const std::vector<ComplexMatrix> &left, const std::vector<ComplexMatrix> &right,
                                const CovarianceSet &cov, double tol = kRankTolerance);

/// Minimum-norm minimizer of the same convex problem,
/// (L*L)^+ L* Sigma_YX R* (R Sigma_XX R*)^+, valid when L or R lose rank
/// (e.g. an outer stage of a stack whose bottleneck is narrower than its neighbours).
ComplexMatrix deep_solve_middle_min_norm(const std::vector<ComplexMatrix> &left,
                                         const std::vector<ComplexMatrix> &right, const CovarianceSet &cov,
                                         double tol = kRankTolerance);

/// Product of a stage list (identity of size `n` when empty).
ComplexMatrix chain_product(const std::vector<ComplexMatrix> &stages, Index n);

/// E = Tr Sigma_YY - 2 Re Tr(W Sigma_XY) + Tr(W Sigma_XX W*), summed over samples.
double reconstruction_error(const ComplexMatrix &w, const CovarianceSet &cov);

/// Same quantity evaluated in O(n^2 p) from the factors without forming W.
double reconstruction_error(const AutoencoderParams &params, const CovarianceSet &cov);

/// Reference path: sum over samples of ||y_t - W x_t||^2.
double reconstruction_error_samples(const ComplexMatrix &w, const Dataset &d);

} // namespace linae
