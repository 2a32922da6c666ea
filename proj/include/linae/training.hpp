#pragma once

#include <linae/covariance.hpp>
#include <linae/landscape.hpp>
#include <linae/solvers.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace linae {

enum class StepKind {
	OptimizeAFromB, ///< A <- argmin E(., B)
	OptimizeBFromA, ///< B <- argmin E(A, .)
	TransposeAFromB, ///< A <- B*
	TransposeBFromA, ///< B <- A*
	SwapBoth,        ///< (A, B) <- (B*, A*)
};

std::string_view step_name(StepKind k) noexcept;
bool is_optimization(StepKind k) noexcept;

/// A repeating pattern of steps applied from a random start.
struct Schedule {
	std::string name;
	std::vector<StepKind> pattern;
	/// False for schedules that in general do not approach a critical point.
	bool convergence_expected = true;

	/// The seven interleavings of optimization and conjugate transposition, k in [1, 7].
	static Schedule algorithm(int k);
};

struct StoppingRule {
	double rel_delta_e = 1e-12;
	/// Threshold on the relative change of W between ends of consecutive pattern cycles.
	double param_change = 1e-10;
	int max_iterations = 10000;
	/// Window and relative amplitude for the oscillation detector used on
	/// schedules without a convergence guarantee.
	int oscillation_window = 50;
	double oscillation_threshold = 1e-9;
};

enum class TerminalStatus { Converged, MaxIterations, Diverged };

std::string_view status_name(TerminalStatus s) noexcept;

struct StepRecord {
	StepKind kind;
	int iteration;
	double error_before;
	double error;
};

/// One iteration is a consecutive update of both A and B.
struct IterationRecord {
	int iteration;
	double error;
	std::vector<StepKind> steps;
	double residual_b;
	double residual_a;
	/// ||A - B*|| / ||A||
	double conjugacy_gap;
	/// ||W_k - W_{k-1}|| / ||W_{k-1}||
	double param_change;
};

struct TrainingTrace {
	std::string schedule;
	std::vector<StepRecord> steps;
	std::vector<IterationRecord> iterations;
	TerminalStatus status = TerminalStatus::MaxIterations;
	std::optional<AutoencoderParams> final_params;
	bool oscillation_detected = false;
	/// Outcome of the distinct partial-sum check; empty when skipped for large n.
	std::optional<bool> distinct_partial_sums;
	std::vector<std::string> warnings;
	double wall_seconds = 0.0;

	double final_error() const;
	/// First step (1-based count of steps) after which E <= threshold; -1 if never.
	int steps_to_error(double threshold) const;
};

/// Raised when A or B loses rank during a run.
class RankCollapseError : public Error {
public:
	RankCollapseError(const std::string &what, int iteration)
	    : Error(what + " at iteration " + std::to_string(iteration)), iteration_(iteration) {}
	int iteration() const noexcept { return iteration_; }

private:
	int iteration_;
};

/// Complex standard normal entries (real and imaginary parts each N(0, 1)).
ComplexMatrix random_complex_normal(Index rows, Index cols, std::uint64_t seed);

/// A (n x p) and B (p x n) with independent complex normal entries.
AutoencoderParams init_random(Index n, Index p, std::uint64_t seed);

/// Runs `sched` from `init` until the stopping rule fires. Throws
/// RankCollapseError if A or B becomes numerically rank deficient.
TrainingTrace run_schedule(const AutoencoderParams &init, const Schedule &sched, const CovarianceSet &cov,
                           const StoppingRule &stop = {});

/// True iff every optimization step left E non-increasing (slack 1e-12 E).
bool em_descent_check(const TrainingTrace &trace);

/// One alternating double step on B in closed form:
/// (B Sigma B*)(B Sigma^2 B*)^{-1} B Sigma, which equals B P_V with V the row space of B Sigma.
ComplexMatrix power_step_b(const ComplexMatrix &b, const ComplexMatrix &sigma);

/// ||solve_b_given_a(solve_a_given_b(B)) - power_step_b(B, Sigma)|| / ||B||.
double composed_update_check(const AutoencoderParams &params, const CovarianceSet &cov);

/// Whether all C(n, p) eigenvalue partial sums are pairwise separated by more than `sep`.
bool distinct_partial_sums(const RealVector &eigenvalues, Index p, double sep = 1e-10);

// Deep stacks ---------------------------------------------------------------

/// Stages ordered from the output side: W = stages[0] * stages[1] * ... * stages.back().
struct DeepParams {
	std::vector<ComplexMatrix> stages;

	ComplexMatrix w() const;
	/// Layer widths from input to output, e.g. {10, 5, 3, 5, 10}.
	std::vector<Index> layer_sizes() const;
};

DeepParams init_random_deep(const std::vector<Index> &layer_sizes, std::uint64_t seed);

struct DeepTrace {
	std::vector<double> errors; ///< E after each full sweep over the stages
	TerminalStatus status = TerminalStatus::MaxIterations;
	std::optional<DeepParams> final_params;

	double final_error() const { return errors.empty() ? 0.0 : errors.back(); }
};

/// Cyclic coordinate descent: each sweep re-solves every stage (input side first)
/// with the others held fixed. Non-increasing per stage solve.
DeepTrace run_stage_descent(const DeepParams &init, const CovarianceSet &cov, const StoppingRule &stop = {});

} // namespace linae
