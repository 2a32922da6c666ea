#pragma once

#include <linae/covariance.hpp>
#include <linae/solvers.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace linae {

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
struct Spectrum {
	RealVector eigenvalues;
	/// Orthonormal eigenvectors as columns, in the same order. Each column is
	/// normalized so its first nonzero coordinate is real and positive.
	ComplexMatrix eigenvectors;
	/// Set when two eigenvalues are closer than 1e-8 relative to the largest magnitude.
	bool gap_warning = false;
	double min_relative_gap = 0.0;

	Index dim() const noexcept { return eigenvalues.size(); }
};

/// Throws NotHermitianError when ||sigma - sigma*|| > 1e-10 ||sigma||.
Spectrum spectrum(const ComplexMatrix &sigma);

/// Strictly increasing, 1-based subset of {1, ..., n}.
class IndexSet {
public:
	IndexSet(std::vector<int> indices, Index n);

	static IndexSet top(Index p, Index n);

	const std::vector<int> &indices() const noexcept { return indices_; }
	Index size() const noexcept { return static_cast<Index>(indices_.size()); }
	Index universe() const noexcept { return n_; }
	std::vector<int> complement() const;

	/// Columns of `u` selected by this set (1-based indices).
	ComplexMatrix select_columns(const ComplexMatrix &u) const;

	std::string to_string() const;

	friend bool operator==(const IndexSet &l, const IndexSet &r) { return l.indices_ == r.indices_ && l.n_ == r.n_; }

private:
	std::vector<int> indices_;
	Index n_;
};

/// A = U_I C, B = C^{-1} U_I* Sigma_YX Sigma_XX^{-1} (B = C^{-1} U_I* when auto-associative).
AutoencoderParams build_critical_point(const Spectrum &spec, const IndexSet &idx, const ComplexMatrix &c,
                                       const CovarianceSet &cov);

/// E at any critical point of index set `idx`: Tr Sigma_YY - sum_{i in I} lambda_i.
double critical_error(const Spectrum &spec, const IndexSet &idx, const CovarianceSet &cov);

struct StationarityResiduals {
	/// ||A*A B Sigma_XX - A* Sigma_YX|| relative.
	double b_eq = 0.0;
	/// ||A B Sigma_XX B* - Sigma_YX B*|| relative.
	double a_eq = 0.0;
};

StationarityResiduals stationarity_residuals(const AutoencoderParams &params, const CovarianceSet &cov);

struct CriticalPointReport {
	bool is_critical = false;
	double residual_b_eq = 0.0;
	double residual_a_eq = 0.0;
	/// ||W - P_A Sigma_YX Sigma_XX^{-1}|| / ||W||; NaN when A is rank deficient.
	double w_projection_residual = 0.0;
	std::optional<IndexSet> classified_index_set;
	double error_value = 0.0;
};

/// Never throws for consistent shapes. When `spec` is not supplied and the point is
/// critical, the spectrum of cov.sigma is computed for classification.
CriticalPointReport is_critical(const AutoencoderParams &params, const CovarianceSet &cov, double tol,
                                const Spectrum *spec = nullptr);

/// The p eigenvectors spanning the same subspace as the columns of `a`, when
/// every principal angle is below `angle_tol`.
std::optional<IndexSet> classify_subspace(const ComplexMatrix &a, const Spectrum &spec, double angle_tol = 1e-6);

struct CriticalValue {
	IndexSet index_set;
	double error;
};

/// All C(n, p) index sets with their critical error, ascending (ties by index order).
std::vector<CriticalValue> enumerate_critical_values(const Spectrum &spec, Index p, const CovarianceSet &cov,
                                                     double cap = 1e6);

/// C(n, k) as a double (saturates to +inf).
double binomial(Index n, Index k);

struct EscapeResult {
	AutoencoderParams params;
	double delta_e;
	/// 1-based eigenvector index rotated out of the span and the one rotated in.
	int rotated_out;
	int rotated_in;
};

/// Rotates the used eigenvector with the smallest eigenvalue toward the unused one
/// with the largest eigenvalue by angle `step`, re-solves B, and reports E_new - E_old.
EscapeResult saddle_escape(const AutoencoderParams &params, const Spectrum &spec, const CovarianceSet &cov,
                           double step);

struct ConjugacyReport {
	double hermitian_residual = 0.0;         ///< ||W - W*|| / ||W||
	double transpose_error_residual = 0.0;   ///< |E(A,B) - E(B*,A*)| / E
	double swap_resolve_residual = 0.0;      ///< ||A'B' - W|| / ||W|| with A' = B*, B' re-solved
	double error = 0.0;
	double transposed_error = 0.0;
};

ConjugacyReport conjugate_transpose_identity(const AutoencoderParams &params, const CovarianceSet &cov);

/// Change of input coordinates x -> C x and unitary output coordinates y -> D y.
/// The induced bijection on parameters is (A, B) -> (D A, B C^{-1}).
struct ProblemTransform {
	Dataset dataset;
	ComplexMatrix c_in;
	ComplexMatrix c_in_inverse;
	ComplexMatrix d_out;

	AutoencoderParams map(const AutoencoderParams &params) const;
};

ProblemTransform transform_problem(const Dataset &d, const ComplexMatrix &c_in, const ComplexMatrix &d_out);

/// Complex dimension of span{A B1 + A1 B} at (A, B): numerical rank of the
/// differential of (A, B) -> AB.
Index tangent_space_dimension(const AutoencoderParams &params, double tol = 1e-8);

} // namespace linae
