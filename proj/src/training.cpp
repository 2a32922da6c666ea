#include <linae/training.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace linae {

namespace {

constexpr double kDivergenceBound = 1e150;
constexpr double kPartialSumCap = 1e5;

double relative_change(double now, double before) {
	const double scale = std::max(std::abs(before), 1e-300);
	return std::abs(now - before) / scale;
}

bool oscillating(const std::vector<IterationRecord> &its, const StoppingRule &stop) {
	const auto window = static_cast<std::size_t>(stop.oscillation_window);
	if (window < 3 || its.size() < window)
		return false;
	const auto first = its.end() - static_cast<std::ptrdiff_t>(window);
	double lo = std::numeric_limits<double>::infinity();
	double hi = -lo;
	int rises = 0;
	for (auto it = first; it != its.end(); ++it) {
		lo = std::min(lo, it->error);
		hi = std::max(hi, it->error);
		if (it != first && it->error > std::prev(it)->error * (1.0 + stop.oscillation_threshold))
			++rises;
	}
	const double scale = std::max(std::abs(hi), 1e-300);
	return (hi - lo) > stop.oscillation_threshold * scale && rises >= static_cast<int>(window / 4);
}

} // namespace

std::string_view step_name(StepKind k) noexcept {
	switch (k) {
	case StepKind::OptimizeAFromB:
		return "B->A";
	case StepKind::OptimizeBFromA:
		return "A->B";
	case StepKind::TransposeAFromB:
		return "B=>A";
	case StepKind::TransposeBFromA:
		return "A=>B";
	case StepKind::SwapBoth:
		return "A<=>B";
	}
	return "?";
}

bool is_optimization(StepKind k) noexcept {
	return k == StepKind::OptimizeAFromB || k == StepKind::OptimizeBFromA;
}

std::string_view status_name(TerminalStatus s) noexcept {
	switch (s) {
	case TerminalStatus::Converged:
		return "Converged";
	case TerminalStatus::MaxIterations:
		return "MaxIterations";
	case TerminalStatus::Diverged:
		return "Diverged";
	}
	return "?";
}

Schedule Schedule::algorithm(int k) {
	using S = StepKind;
	Schedule s;
	s.name = "Algorithm " + std::to_string(k);
	switch (k) {
	case 1: // B -> A -> B -> A ...
		s.pattern = {S::OptimizeAFromB, S::OptimizeBFromA};
		break;
	case 2: // A -> B -> A -> B ...
		s.pattern = {S::OptimizeBFromA, S::OptimizeAFromB};
		break;
	case 3: // B -> A -> B => A -> B -> A -> B => A ...
		s.pattern = {S::OptimizeAFromB, S::OptimizeBFromA, S::TransposeAFromB, S::OptimizeBFromA};
		break;
	case 4: // A -> B -> A => B -> A -> B -> A => B ...
		s.pattern = {S::OptimizeBFromA, S::OptimizeAFromB, S::TransposeBFromA, S::OptimizeAFromB};
		break;
	case 5: // B -> A -> B <=> B -> A -> B ...
		s.pattern = {S::OptimizeAFromB, S::OptimizeBFromA, S::SwapBoth};
		break;
	case 6: // A -> B -> A <=> A -> B -> A <=> ...
		s.pattern = {S::OptimizeBFromA, S::OptimizeAFromB, S::SwapBoth};
		s.convergence_expected = false;
		break;
	case 7: // only B is ever optimized, interleaved with swaps
		s.pattern = {S::OptimizeBFromA, S::SwapBoth};
		s.convergence_expected = false;
		break;
	default:
		throw ConfigError("unknown algorithm " + std::to_string(k) + " (expected 1..7)");
	}
	return s;
}

double TrainingTrace::final_error() const {
	if (!steps.empty())
		return steps.back().error;
	return iterations.empty() ? std::numeric_limits<double>::quiet_NaN() : iterations.back().error;
}

int TrainingTrace::steps_to_error(double threshold) const {
	for (std::size_t i = 0; i < steps.size(); ++i)
		if (steps[i].error <= threshold)
			return static_cast<int>(i + 1);
	return -1;
}

ComplexMatrix random_complex_normal(Index rows, Index cols, std::uint64_t seed) {
	std::mt19937_64 gen(seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	ComplexMatrix m(rows, cols);
	for (Index j = 0; j < cols; ++j)
		for (Index i = 0; i < rows; ++i) {
			const double re = normal(gen);
			const double im = normal(gen);
			m(i, j) = Complex(re, im);
		}
	return m;
}

AutoencoderParams init_random(Index n, Index p, std::uint64_t seed) {
	if (p <= 0 || p >= n)
		throw ConfigError("init_random: need 0 < p < n");
	std::mt19937_64 gen(seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	auto fill = [&](Index rows, Index cols) {
		ComplexMatrix m(rows, cols);
		for (Index j = 0; j < cols; ++j)
			for (Index i = 0; i < rows; ++i) {
				const double re = normal(gen);
				const double im = normal(gen);
				m(i, j) = Complex(re, im);
			}
		return m;
	};
	ComplexMatrix a = fill(n, p);
	ComplexMatrix b = fill(p, n);
	AutoencoderParams params(std::move(a), std::move(b));
	if (!params.a_full_rank() || !params.b_full_rank())
		throw RankDeficientError("init_random: random draw is rank deficient");
	return params;
}

bool distinct_partial_sums(const RealVector &eigenvalues, Index p, double sep) {
	const Index n = eigenvalues.size();
	std::vector<double> sums;
	std::vector<int> idx(static_cast<std::size_t>(p));
	for (Index k = 0; k < p; ++k)
		idx[static_cast<std::size_t>(k)] = static_cast<int>(k);
	while (true) {
		double s = 0.0;
		for (int i : idx)
			s += eigenvalues(i);
		sums.push_back(s);
		Index k = p - 1;
		while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - p + k)
			--k;
		if (k < 0)
			break;
		++idx[static_cast<std::size_t>(k)];
		for (Index j = k + 1; j < p; ++j)
			idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
	}
	std::sort(sums.begin(), sums.end());
	const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
	for (std::size_t i = 1; i < sums.size(); ++i)
		if (sums[i] - sums[i - 1] <= sep * scale)
			return false;
	return true;
}

TrainingTrace run_schedule(const AutoencoderParams &init, const Schedule &sched, const CovarianceSet &cov,
                           const StoppingRule &stop) {
	if (sched.pattern.empty())
		throw ConfigError("run_schedule: empty step pattern");
	if (init.n() != cov.dim())
		throw DimensionError("run_schedule: parameters and covariances disagree on n");
	if (!init.a_full_rank() || !init.b_full_rank())
		throw RankDeficientError("run_schedule: initial parameters must be full rank");
	if (stop.max_iterations <= 0 || !(stop.rel_delta_e > 0.0) || !(stop.param_change > 0.0))
		throw ConfigError("run_schedule: stopping thresholds must be positive");

	const auto started = std::chrono::steady_clock::now();
	TrainingTrace trace;
	trace.schedule = sched.name;

	const Index n = init.n();
	const Index p = init.p();
	if (binomial(n, p) <= kPartialSumCap) {
		const Spectrum spec = spectrum(cov.sigma);
		trace.distinct_partial_sums = distinct_partial_sums(spec.eigenvalues, p);
		if (!*trace.distinct_partial_sums)
			trace.warnings.push_back("eigenvalue partial sums are not pairwise distinct; the limit may not be unique");
	} else {
		trace.warnings.push_back("distinct partial-sum check waived: C(n, p) too large");
	}

	ComplexMatrix a = init.a();
	ComplexMatrix b = init.b();
	double error = reconstruction_error(init, cov);
	ComplexMatrix w_prev = a * b;
	double error_prev_iteration = error;
	ComplexMatrix w_prev_cycle = w_prev;
	double error_prev_cycle = error;
	int cycles = 0;
	bool updated_a = false;
	bool updated_b = false;
	int iteration = 0;
	std::vector<StepKind> pending;

	for (std::size_t s = 0;; ++s) {
		const StepKind kind = sched.pattern[s % sched.pattern.size()];
		try {
			switch (kind) {
			case StepKind::OptimizeAFromB:
				a = solve_a_given_b(b, cov);
				updated_a = true;
				break;
			case StepKind::OptimizeBFromA:
				b = solve_b_given_a(a, cov);
				updated_b = true;
				break;
			case StepKind::TransposeAFromB:
				a = b.adjoint();
				updated_a = true;
				break;
			case StepKind::TransposeBFromA:
				b = a.adjoint();
				updated_b = true;
				break;
			case StepKind::SwapBoth: {
				ComplexMatrix new_a = b.adjoint();
				b = a.adjoint();
				a = std::move(new_a);
				updated_a = updated_b = true;
				break;
			}
			}
		} catch (const RankDeficientError &e) {
			throw RankCollapseError(std::string("rank collapse: ") + e.what(), iteration + 1);
		} catch (const SingularMatrixError &e) {
			throw RankCollapseError(std::string("rank collapse: ") + e.what(), iteration + 1);
		}

		const AutoencoderParams current(a, b);
		const double error_new = reconstruction_error(current, cov);
		trace.steps.push_back({kind, iteration + 1, error, error_new});
		pending.push_back(kind);
		error = error_new;
		if (!std::isfinite(error) || error > kDivergenceBound || !a.allFinite() || !b.allFinite()) {
			trace.status = TerminalStatus::Diverged;
			trace.final_params = current;
			break;
		}
		if (!(updated_a && updated_b))
			continue;

		++iteration;
		updated_a = updated_b = false;
		if (condition_number(a) > kSingularCondition || condition_number(b) > kSingularCondition)
			throw RankCollapseError("rank collapse: A or B condition number exceeds 1e12", iteration);

		const StationarityResiduals res = stationarity_residuals(current, cov);
		const ComplexMatrix w = a * b;
		IterationRecord rec;
		rec.iteration = iteration;
		rec.error = error;
		rec.steps = std::move(pending);
		pending.clear();
		rec.residual_b = res.b_eq;
		rec.residual_a = res.a_eq;
		rec.conjugacy_gap = (a - b.adjoint()).norm() / std::max(a.norm(), 1e-300);
		rec.param_change = (w - w_prev).norm() / std::max(w_prev.norm(), 1e-300);
		trace.iterations.push_back(rec);

		w_prev = w;
		const bool iteration_plateau = relative_change(error, error_prev_iteration) <= stop.rel_delta_e;
		error_prev_iteration = error;

		// Half-cycles such as (A <- B*, re-solve B) can leave W fixed, so convergence is
		// judged between consecutive ends of the full step pattern.
		const bool cycle_end = (s + 1) % sched.pattern.size() == 0;
		bool converged = false;
		if (cycle_end) {
			++cycles;
			const double cycle_change = (w - w_prev_cycle).norm() / std::max(w_prev_cycle.norm(), 1e-300);
			converged = cycles >= 2 && iteration_plateau && relative_change(error, error_prev_cycle) <= stop.rel_delta_e &&
			            cycle_change <= stop.param_change;
			w_prev_cycle = w;
			error_prev_cycle = error;
		}

		if (converged) {
			trace.status = TerminalStatus::Converged;
			trace.final_params = current;
			break;
		}
		if (!sched.convergence_expected && oscillating(trace.iterations, stop)) {
			trace.oscillation_detected = true;
			trace.status = TerminalStatus::MaxIterations;
			trace.final_params = current;
			break;
		}
		if (iteration >= stop.max_iterations) {
			trace.status = TerminalStatus::MaxIterations;
			trace.final_params = current;
			break;
		}
	}
	trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
	return trace;
}

bool em_descent_check(const TrainingTrace &trace) {
	for (const StepRecord &s : trace.steps) {
		if (!is_optimization(s.kind))
			continue;
		if (s.error > s.error_before + 1e-12 * std::abs(s.error_before))
			return false;
	}
	return true;
}

ComplexMatrix power_step_b(const ComplexMatrix &b, const ComplexMatrix &sigma) {
	if (b.cols() != sigma.rows() || sigma.rows() != sigma.cols())
		throw DimensionError("power_step_b: B must be p x n and Sigma n x n");
	const ComplexMatrix b_sigma = b * sigma;
	const ComplexMatrix first = b_sigma * b.adjoint();
	ComplexMatrix second = b_sigma * b_sigma.adjoint();
	second = 0.5 * (second + second.adjoint()).eval();
	const double cond = hermitian_condition(second);
	if (!(cond <= kSingularCondition))
		throw SingularMatrixError("power_step_b: B Sigma^2 B* is singular", cond);
	return first * second.llt().solve(b_sigma);
}

double composed_update_check(const AutoencoderParams &params, const CovarianceSet &cov) {
	if (!cov.auto_associative)
		throw Error("composed_update_check: requires auto-associative covariances");
	const ComplexMatrix &b = params.b();
	const ComplexMatrix a_next = solve_a_given_b(b, cov);
	const ComplexMatrix b_next = solve_b_given_a(a_next, cov);
	const ComplexMatrix direct = power_step_b(b, cov.sigma_xx);
	return (b_next - direct).norm() / std::max(b.norm(), 1e-300);
}

} // namespace linae
