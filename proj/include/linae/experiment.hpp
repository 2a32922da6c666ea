#pragma once

#include <linae/covariance.hpp>
#include <linae/io.hpp>
#include <linae/landscape.hpp>
#include <linae/training.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace linae {

struct ExperimentConfig {
	enum class Source { Csv, Idx, Synthetic };
	Source source = Source::Synthetic;

	std::filesystem::path csv_path;
	std::filesystem::path idx_images;
	std::filesystem::path idx_labels;
	std::optional<int> digit;
	std::optional<Index> cap;
	SyntheticSpec synthetic;

	/// Expected input dimension; checked against the data when set.
	std::optional<Index> n;
	Index p = 0;
	/// Deep stack widths from input to output; empty for a single hidden layer.
	std::vector<Index> layers;
	int algorithm = 1;
	std::uint64_t seed = 0;
	/// Seed sweep: one independent run per seed, each in out/seed-<s>.
	std::vector<std::uint64_t> sweep_seeds;
	StoppingRule stop;
	bool center = false;
	double ridge = 0.0;
	std::filesystem::path out = "out";

	double landscape_cap = 1e5;
	double escape_step = 1e-3;
	/// Verify only: perturbs Sigma_XX off the Hermitian manifold.
	bool inject_non_hermitian = false;
};

/// Command-line values that replace config entries when present.
struct ConfigOverrides {
	std::optional<int> algorithm;
	std::optional<Index> p;
	std::optional<std::uint64_t> seed;
	std::optional<int> max_iter;
	std::optional<bool> center;
	std::optional<double> ridge;
	std::optional<int> digit;
	std::optional<Index> cap;
	std::optional<std::filesystem::path> out;
};

/// Parses the JSON config format documented in the README. Throws ConfigError.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);

void apply_overrides(ExperimentConfig &cfg, const ConfigOverrides &o);

/// Checks data-independent invariants (dataset source, layer sizes, ranges).
void validate_config(const ExperimentConfig &cfg);

/// Data, covariances and the spectrum of the composite sigma.
struct Problem {
	Dataset dataset;
	CovarianceSet cov;
	Spectrum spec;

	Index n() const noexcept { return dataset.dim(); }
	/// Tr Sigma_YY minus the top-p eigenvalues of sigma.
	double floor(Index p) const;
};

/// Loads the configured dataset, applies centering and checks p < n.
Problem load_problem(const ExperimentConfig &cfg);

/// Each returns the process exit code and writes reports under cfg.out.
int cli_train(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cli_landscape(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);
int cli_verify(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err, bool color);
int cli_factorize(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err);

/// curves.csv contents for a trace: iteration,error,conjugacy_gap,residual_b,residual_a.
std::string curves_csv(const TrainingTrace &trace);

} // namespace linae
