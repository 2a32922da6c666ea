#include <linae/training.hpp>

#include <cmath>
#include <random>

namespace linae {

ComplexMatrix DeepParams::w() const {
	if (stages.empty())
		throw DimensionError("DeepParams: no stages");
	return chain_product(stages, stages.front().rows());
}

std::vector<Index> DeepParams::layer_sizes() const {
	std::vector<Index> out;
	if (stages.empty())
		return out;
	out.push_back(stages.back().cols());
	for (auto it = stages.rbegin(); it != stages.rend(); ++it)
		out.push_back(it->rows());
	return out;
}

DeepParams init_random_deep(const std::vector<Index> &layer_sizes, std::uint64_t seed) {
	if (layer_sizes.size() < 2)
		throw ConfigError("init_random_deep: need at least input and output layers");
	for (Index s : layer_sizes)
		if (s <= 0)
			throw ConfigError("init_random_deep: layer sizes must be positive");
	std::mt19937_64 gen(seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	DeepParams params;
	// Input-side stage first in generation order; stored output side first.
	for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
		ComplexMatrix m(layer_sizes[k + 1], layer_sizes[k]);
		for (Index j = 0; j < m.cols(); ++j)
			for (Index i = 0; i < m.rows(); ++i) {
				const double re = normal(gen);
				const double im = normal(gen);
				m(i, j) = Complex(re, im);
			}
		params.stages.insert(params.stages.begin(), std::move(m));
	}
	return params;
}

DeepTrace run_stage_descent(const DeepParams &init, const CovarianceSet &cov, const StoppingRule &stop) {
	if (init.stages.empty())
		throw ConfigError("run_stage_descent: no stages");
	if (init.stages.front().rows() != cov.dim() || init.stages.back().cols() != cov.dim())
		throw DimensionError("run_stage_descent: outer layers must match the data dimension");

	DeepTrace trace;
	DeepParams params = init;
	ComplexMatrix w_prev = params.w();
	double error_prev = reconstruction_error(w_prev, cov);
	const std::size_t k = params.stages.size();

	for (int sweep = 1; sweep <= stop.max_iterations; ++sweep) {
		for (std::size_t s = k; s-- > 0;) {
			const std::vector<ComplexMatrix> left(params.stages.begin(), params.stages.begin() + static_cast<std::ptrdiff_t>(s));
			const std::vector<ComplexMatrix> right(params.stages.begin() + static_cast<std::ptrdiff_t>(s) + 1,
			                                       params.stages.end());
			params.stages[s] = deep_solve_middle_min_norm(left, right, cov);
		}
		const ComplexMatrix w = params.w();
		const double error = reconstruction_error(w, cov);
		trace.errors.push_back(error);
		if (!std::isfinite(error)) {
			trace.status = TerminalStatus::Diverged;
			break;
		}
		const double de = std::abs(error - error_prev) / std::max(std::abs(error_prev), 1e-300);
		const double dw = (w - w_prev).norm() / std::max(w_prev.norm(), 1e-300);
		w_prev = w;
		error_prev = error;
		if (sweep >= 2 && de <= stop.rel_delta_e && dw <= stop.param_change) {
			trace.status = TerminalStatus::Converged;
			break;
		}
	}
	trace.final_params = std::move(params);
	return trace;
}

} // namespace linae
