#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace linae {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative singular-value threshold used for every full-rank test.
inline constexpr double kRankTolerance = 1e-10;

/// Condition number above which a Gram or covariance matrix is treated as singular.
inline constexpr double kSingularCondition = 1e12;

class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
	using Error::Error;
};

class NonFiniteError : public Error {
public:
	using Error::Error;
};

class NotHermitianError : public Error {
public:
	using Error::Error;
};

class RankDeficientError : public Error {
public:
	using Error::Error;
};

/// Carries the offending condition number.
class SingularMatrixError : public Error {
public:
	SingularMatrixError(const std::string &what, double condition)
	    : Error(what + " (condition number " + std::to_string(condition) + ")"), condition_(condition) {}
	double condition() const noexcept { return condition_; }

private:
	double condition_;
};

class FormatError : public Error {
public:
	using Error::Error;
};

class ConfigError : public Error {
public:
	using Error::Error;
};

/// An enumeration would exceed its configured size cap.
class CapExceededError : public Error {
public:
	using Error::Error;
};

/// No escape direction exists (the point is already the global minimum).
class NoEscapeError : public Error {
public:
	using Error::Error;
};

// Frobenius (Hilbert-Schmidt) norm helpers and residuals shared across modules.

/// ||lhs - rhs|| / max(||lhs||, ||rhs||); zero when both sides vanish.
double relative_residual(const ComplexMatrix &lhs, const ComplexMatrix &rhs);

/// Largest-to-smallest singular value ratio; +inf for rank-deficient input.
double condition_number(const ComplexMatrix &m);

/// Number of singular values above tol * largest.
Index numerical_rank(const ComplexMatrix &m, double tol = kRankTolerance);

/// True when min(rows, cols) singular values exceed tol * largest.
bool is_full_rank(const ComplexMatrix &m, double tol = kRankTolerance);

bool all_finite(const ComplexMatrix &m);

/// ||m - m*|| / ||m|| (zero for the zero matrix).
double hermitian_defect(const ComplexMatrix &m);

} // namespace linae
