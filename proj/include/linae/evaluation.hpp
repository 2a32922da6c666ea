#pragma once

#include <linae/solvers.hpp>

namespace linae {

/// ||x - P_A x||^2: the reconstruction error of a single vector once B is optimal for A.
double generalization_error(const ComplexMatrix &a, const ComplexVector &x);

/// W^m x by repeated application (m >= 1).
ComplexVector recycle(const ComplexMatrix &w, const ComplexVector &x, int m);

struct ConverseReport {
	double idempotence_residual = 0.0; ///< ||W^2 - W|| / ||W||
	bool is_projection = false;        ///< idempotence_residual <= 1e-9
	double ba_identity_residual = 0.0; ///< ||BA - I_p||
	double b_recovery_residual = 0.0;  ///< ||B - (A*A)^{-1}A*|| / ||B||
	/// Only meaningful when is_projection: both residuals within 1e-8.
	bool converse_holds = false;
};

/// For full-rank A, B with W idempotent, BA = I_p and B = (A*A)^{-1}A* must follow.
ConverseReport projection_converse_check(const AutoencoderParams &params);

/// A = (U_1)_p Lambda_1, B = (U_2)^p from a singular value decomposition of W.
/// Throws RankDeficientError when rank(W) > p.
AutoencoderParams rank_p_factorize(const ComplexMatrix &w, Index p, double tol = kRankTolerance);

/// Orthonormal basis (columns) of the null space of `m`, using singular vectors
/// whose singular values are at most tol * largest.
ComplexMatrix null_space(const ComplexMatrix &m, double tol = kRankTolerance);

} // namespace linae
