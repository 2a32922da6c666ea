#include <linae/evaluation.hpp>
#include <linae/experiment.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace linae {

using json = nlohmann::ordered_json;

namespace {

template <class T> T get_or(const json &j, const char *key, T fallback) {
	if (!j.contains(key) || j.at(key).is_null())
		return fallback;
	try {
		return j.at(key).get<T>();
	} catch (const json::exception &e) {
		throw ConfigError(fmt::format("config: bad value for '{}': {}", key, e.what()));
	}
}

void reject_unknown(const json &j, std::initializer_list<const char *> known, const char *where) {
	for (auto it = j.begin(); it != j.end(); ++it) {
		if (std::none_of(known.begin(), known.end(), [&](const char *k) { return it.key() == k; }))
			throw ConfigError(fmt::format("config: unknown key '{}' in {}", it.key(), where));
	}
}

SyntheticSpec parse_synthetic(const json &j) {
	reject_unknown(j,
	               {"kind", "eigenvalues", "per_eigenvalue", "allow_duplicates", "n", "m", "seed", "scale_decay",
	                "scale_floor"},
	               "dataset.synthetic");
	SyntheticSpec s;
	s.kind = parse_synthetic_kind(get_or<std::string>(j, "kind", "diagonal-sigma"));
	s.eigenvalues = get_or<std::vector<double>>(j, "eigenvalues", {});
	s.per_eigenvalue = get_or<Index>(j, "per_eigenvalue", 8);
	s.allow_duplicates = get_or<bool>(j, "allow_duplicates", false);
	s.n = get_or<Index>(j, "n", 0);
	s.m = get_or<Index>(j, "m", 0);
	s.seed = get_or<std::uint64_t>(j, "seed", 0);
	s.scale_decay = get_or<double>(j, "scale_decay", 1.0);
	s.scale_floor = get_or<double>(j, "scale_floor", 0.0);
	return s;
}

// E comparisons are relative to the floor but never tighter than rounding on Tr Sigma_YY.
double error_scale(const Problem &pb, double floor) {
	return std::max(floor, 1e-9 * pb.cov.sigma_yy.trace().real());
}

std::string fmt_num(double v) {
	if (std::isnan(v))
		return "nan";
	return format_double(v);
}

json index_set_json(const std::optional<IndexSet> &s) {
	if (!s)
		return nullptr;
	return s->indices();
}

std::filesystem::path ensure_dir(const std::filesystem::path &p) {
	std::filesystem::create_directories(p);
	return p;
}

ComplexMatrix random_unitary(Index n, std::uint64_t seed) {
	Eigen::HouseholderQR<ComplexMatrix> qr(random_complex_normal(n, n, seed));
	return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Identity plus a scaled Gaussian: invertible with a modest condition number.
ComplexMatrix random_invertible(Index n, std::uint64_t seed) {
	return ComplexMatrix::Identity(n, n) + 0.3 / std::sqrt(static_cast<double>(n)) * random_complex_normal(n, n, seed);
}

int exit_code_for(TerminalStatus s) {
	switch (s) {
	case TerminalStatus::Converged:
		return 0;
	case TerminalStatus::MaxIterations:
		return 2;
	case TerminalStatus::Diverged:
		return 1;
	}
	return 1;
}

Index bottleneck(const std::vector<Index> &layers) {
	return *std::min_element(layers.begin() + 1, layers.end() - 1);
}

std::string deep_curves_csv(const DeepTrace &trace) {
	std::string s = "iteration,error,conjugacy_gap,residual_b,residual_a\n";
	for (std::size_t k = 0; k < trace.errors.size(); ++k)
		s += fmt::format("{},{},nan,nan,nan\n", k + 1, format_double(trace.errors[k]));
	return s;
}

int train_single(const ExperimentConfig &cfg, const Problem &pb, const std::filesystem::path &dir, std::ostream &out) {
	const Index n = pb.n();
	const Schedule sched = Schedule::algorithm(cfg.algorithm);
	const AutoencoderParams init = init_random(n, cfg.p, cfg.seed);
	const TrainingTrace trace = run_schedule(init, sched, pb.cov, cfg.stop);
	const double floor = pb.floor(cfg.p);

	std::optional<IndexSet> classified;
	double final_gap = std::numeric_limits<double>::quiet_NaN();
	if (!trace.iterations.empty())
		final_gap = trace.iterations.back().conjugacy_gap;
	if (trace.final_params)
		classified = is_critical(*trace.final_params, pb.cov, 1e-6, &pb.spec).classified_index_set;

	ensure_dir(dir);
	write_file_atomic(dir / "curves.csv", curves_csv(trace));

	json summary;
	summary["schedule"] = trace.schedule;
	summary["algorithm"] = cfg.algorithm;
	summary["seed"] = cfg.seed;
	summary["n"] = n;
	summary["p"] = cfg.p;
	summary["samples"] = pb.dataset.samples();
	summary["status"] = std::string(status_name(trace.status));
	summary["iterations"] = trace.iterations.size();
	summary["final_error"] = trace.final_error();
	summary["floor"] = floor;
	summary["excess"] = trace.final_error() - floor;
	summary["classified_index_set"] = index_set_json(classified);
	summary["final_conjugacy_gap"] = std::isnan(final_gap) ? json(nullptr) : json(final_gap);
	summary["em_descent"] = em_descent_check(trace);
	summary["oscillation_detected"] = trace.oscillation_detected;
	summary["warnings"] = trace.warnings;
	summary["wall_seconds"] = trace.wall_seconds;
	write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");

	out << fmt::format("{} (seed {}, n={}, p={}, m={})\n", trace.schedule, cfg.seed, n, cfg.p,
	                   pb.dataset.samples());
	out << fmt::format("  status       {}\n", status_name(trace.status));
	out << fmt::format("  iterations   {}\n", trace.iterations.size());
	out << fmt::format("  final E      {}\n", fmt_num(trace.final_error()));
	out << fmt::format("  floor        {}\n", fmt_num(floor));
	out << fmt::format("  index set    {}\n", classified ? classified->to_string() : "unclassified");
	for (const auto &w : trace.warnings)
		out << "  warning: " << w << '\n';
	out << fmt::format("  wrote {}\n", (dir / "curves.csv").string());
	return exit_code_for(trace.status);
}

int train_deep(const ExperimentConfig &cfg, const Problem &pb, const std::filesystem::path &dir, std::ostream &out) {
	const DeepParams init = init_random_deep(cfg.layers, cfg.seed);
	const DeepTrace trace = run_stage_descent(init, pb.cov, cfg.stop);
	const Index b = bottleneck(cfg.layers);
	const double floor = pb.floor(b);

	ensure_dir(dir);
	write_file_atomic(dir / "curves.csv", deep_curves_csv(trace));
	json summary;
	summary["layers"] = cfg.layers;
	summary["seed"] = cfg.seed;
	summary["samples"] = pb.dataset.samples();
	summary["status"] = std::string(status_name(trace.status));
	summary["sweeps"] = trace.errors.size();
	summary["final_error"] = trace.final_error();
	summary["floor"] = floor;
	summary["excess"] = trace.final_error() - floor;
	write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");

	std::string shape;
	for (std::size_t k = 0; k < cfg.layers.size(); ++k)
		shape += (k ? "/" : "") + std::to_string(cfg.layers[k]);
	out << fmt::format("stage descent {} (seed {})\n", shape, cfg.seed);
	out << fmt::format("  status       {}\n", status_name(trace.status));
	out << fmt::format("  sweeps       {}\n", trace.errors.size());
	out << fmt::format("  final E      {}\n", fmt_num(trace.final_error()));
	out << fmt::format("  floor        {}\n", fmt_num(floor));
	return exit_code_for(trace.status);
}

} // namespace

double Problem::floor(Index p) const {
	if (p < 0 || p > spec.dim())
		throw DimensionError("floor: p out of range");
	const double top = spec.eigenvalues.head(p).sum();
	return std::max(0.0, cov.sigma_yy.trace().real() - top);
}

ExperimentConfig parse_config(const std::string &text) {
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error &e) {
		throw ConfigError(std::string("config: ") + e.what());
	}
	if (!j.is_object())
		throw ConfigError("config: top level must be an object");
	reject_unknown(j,
	               {"dataset", "n", "p", "layers", "algorithm", "seed", "sweep_seeds", "stopping", "center", "ridge",
	                "out", "landscape_cap", "escape_step", "inject_non_hermitian"},
	               "config");

	ExperimentConfig cfg;
	if (!j.contains("dataset") || !j.at("dataset").is_object())
		throw ConfigError("config: 'dataset' object is required");
	const json &ds = j.at("dataset");
	if (ds.size() != 1)
		throw ConfigError("config: dataset must name exactly one source (csv, idx or synthetic)");
	if (ds.contains("csv")) {
		cfg.source = ExperimentConfig::Source::Csv;
		cfg.csv_path = ds.at("csv").get<std::string>();
	} else if (ds.contains("idx")) {
		const json &idx = ds.at("idx");
		reject_unknown(idx, {"images", "labels", "digit", "cap"}, "dataset.idx");
		cfg.source = ExperimentConfig::Source::Idx;
		cfg.idx_images = get_or<std::string>(idx, "images", "");
		cfg.idx_labels = get_or<std::string>(idx, "labels", "");
		if (idx.contains("digit"))
			cfg.digit = idx.at("digit").get<int>();
		if (idx.contains("cap"))
			cfg.cap = idx.at("cap").get<Index>();
	} else if (ds.contains("synthetic")) {
		cfg.source = ExperimentConfig::Source::Synthetic;
		cfg.synthetic = parse_synthetic(ds.at("synthetic"));
	} else {
		throw ConfigError("config: unknown dataset source '" + ds.begin().key() + "'");
	}

	if (j.contains("n"))
		cfg.n = get_or<Index>(j, "n", 0);
	cfg.p = get_or<Index>(j, "p", 0);
	cfg.layers = get_or<std::vector<Index>>(j, "layers", {});
	cfg.algorithm = get_or<int>(j, "algorithm", 1);
	cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
	cfg.sweep_seeds = get_or<std::vector<std::uint64_t>>(j, "sweep_seeds", {});
	cfg.center = get_or<bool>(j, "center", false);
	cfg.ridge = get_or<double>(j, "ridge", 0.0);
	cfg.out = get_or<std::string>(j, "out", "out");
	cfg.landscape_cap = get_or<double>(j, "landscape_cap", 1e5);
	cfg.escape_step = get_or<double>(j, "escape_step", 1e-3);
	cfg.inject_non_hermitian = get_or<bool>(j, "inject_non_hermitian", false);
	if (j.contains("stopping")) {
		const json &s = j.at("stopping");
		reject_unknown(s,
		               {"rel_delta_e", "param_change", "max_iterations", "oscillation_window",
		                "oscillation_threshold"},
		               "stopping");
		cfg.stop.rel_delta_e = get_or<double>(s, "rel_delta_e", cfg.stop.rel_delta_e);
		cfg.stop.param_change = get_or<double>(s, "param_change", cfg.stop.param_change);
		cfg.stop.max_iterations = get_or<int>(s, "max_iterations", cfg.stop.max_iterations);
		cfg.stop.oscillation_window = get_or<int>(s, "oscillation_window", cfg.stop.oscillation_window);
		cfg.stop.oscillation_threshold = get_or<double>(s, "oscillation_threshold", cfg.stop.oscillation_threshold);
	}
	if (cfg.p == 0 && cfg.layers.size() >= 3)
		cfg.p = bottleneck(cfg.layers);
	return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in)
		throw ConfigError("config: cannot open " + path.string());
	std::ostringstream ss;
	ss << in.rdbuf();
	ExperimentConfig cfg = parse_config(ss.str());
	// Relative data paths are taken relative to the config file.
	const auto base = path.parent_path();
	auto rebase = [&](std::filesystem::path &p) {
		if (!p.empty() && p.is_relative())
			p = base / p;
	};
	rebase(cfg.csv_path);
	rebase(cfg.idx_images);
	rebase(cfg.idx_labels);
	return cfg;
}

void apply_overrides(ExperimentConfig &cfg, const ConfigOverrides &o) {
	if (o.algorithm)
		cfg.algorithm = *o.algorithm;
	if (o.p)
		cfg.p = *o.p;
	if (o.seed)
		cfg.seed = *o.seed;
	if (o.max_iter)
		cfg.stop.max_iterations = *o.max_iter;
	if (o.center)
		cfg.center = *o.center;
	if (o.ridge)
		cfg.ridge = *o.ridge;
	if (o.digit)
		cfg.digit = *o.digit;
	if (o.cap)
		cfg.cap = *o.cap;
	if (o.out)
		cfg.out = *o.out;
}

void validate_config(const ExperimentConfig &cfg) {
	if (cfg.algorithm < 1 || cfg.algorithm > 7)
		throw ConfigError(fmt::format("config: algorithm must be in 1..7, got {}", cfg.algorithm));
	if (cfg.p <= 0)
		throw ConfigError("config: p must be positive");
	if (cfg.n && cfg.p >= *cfg.n)
		throw ConfigError(fmt::format("config: p = {} must be smaller than n = {}", cfg.p, *cfg.n));
	if (!cfg.layers.empty()) {
		if (cfg.layers.size() < 3)
			throw ConfigError("config: layers needs at least input, one hidden and output width");
		for (Index w : cfg.layers)
			if (w <= 0)
				throw ConfigError("config: layer sizes must be strictly positive");
		if (cfg.layers.front() != cfg.layers.back())
			throw ConfigError("config: input and output widths must agree");
		if (bottleneck(cfg.layers) >= cfg.layers.front())
			throw ConfigError("config: the narrowest hidden layer must be smaller than n");
	}
	if (cfg.ridge < 0.0 || !std::isfinite(cfg.ridge))
		throw ConfigError("config: ridge must be a non-negative number");
	if (cfg.stop.max_iterations <= 0)
		throw ConfigError("config: max iterations must be positive");
	if (cfg.cap && *cfg.cap <= 0)
		throw ConfigError("config: cap must be positive");
	if (cfg.digit && (*cfg.digit < 0 || *cfg.digit > 255))
		throw ConfigError("config: digit must be a label byte");
	if ((cfg.digit || cfg.cap) && cfg.source != ExperimentConfig::Source::Idx)
		throw ConfigError("config: digit and cap apply only to idx datasets");
	if (cfg.source == ExperimentConfig::Source::Idx && (cfg.idx_images.empty() || cfg.idx_labels.empty()))
		throw ConfigError("config: idx dataset needs both images and labels paths");
	if (!(cfg.escape_step > 0.0))
		throw ConfigError("config: escape_step must be positive");
}

Problem load_problem(const ExperimentConfig &cfg) {
	validate_config(cfg);
	Dataset d = [&] {
		switch (cfg.source) {
		case ExperimentConfig::Source::Csv:
			return load_csv(cfg.csv_path);
		case ExperimentConfig::Source::Idx:
			return load_idx_images(cfg.idx_images, cfg.idx_labels, cfg.digit, cfg.cap);
		case ExperimentConfig::Source::Synthetic:
			break;
		}
		return generate_synthetic(cfg.synthetic);
	}();
	if (cfg.center && !d.centered())
		d = center(d);
	const Index n = d.dim();
	if (cfg.n && *cfg.n != n)
		throw ConfigError(fmt::format("config: n = {} but the data has dimension {}", *cfg.n, n));
	if (cfg.p >= n)
		throw ConfigError(fmt::format("config: p = {} must be smaller than n = {}", cfg.p, n));
	if (!cfg.layers.empty() && cfg.layers.front() != n)
		throw ConfigError(fmt::format("config: layer widths start at {} but the data has dimension {}",
		                              cfg.layers.front(), n));
	CovarianceSet cov = compute_covariances(d, cfg.ridge);
	Spectrum spec = spectrum(cov.sigma);
	return Problem{std::move(d), std::move(cov), std::move(spec)};
}

std::string curves_csv(const TrainingTrace &trace) {
	std::string s = "iteration,error,conjugacy_gap,residual_b,residual_a\n";
	for (const auto &it : trace.iterations)
		s += fmt::format("{},{},{},{},{}\n", it.iteration, format_double(it.error), fmt_num(it.conjugacy_gap),
		                 fmt_num(it.residual_b), fmt_num(it.residual_a));
	return s;
}

int cli_train(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
	try {
		const Problem pb = load_problem(cfg);
		auto run = [&](const ExperimentConfig &c, const std::filesystem::path &dir, std::ostream &o) {
			return c.layers.empty() ? train_single(c, pb, dir, o) : train_deep(c, pb, dir, o);
		};
		if (cfg.sweep_seeds.empty())
			return run(cfg, cfg.out, out);

		// Independent runs, each with its own output directory and buffered log.
		std::vector<std::future<std::pair<int, std::string>>> jobs;
		for (std::uint64_t s : cfg.sweep_seeds) {
			jobs.push_back(std::async(std::launch::async, [&, s] {
				ExperimentConfig c = cfg;
				c.seed = s;
				std::ostringstream log;
				int code = 1;
				try {
					code = run(c, cfg.out / fmt::format("seed-{}", s), log);
				} catch (const std::exception &e) {
					log << "error: " << e.what() << '\n';
				}
				return std::make_pair(code, log.str());
			}));
		}
		int worst = 0;
		for (auto &j : jobs) {
			auto [code, log] = j.get();
			out << log;
			worst = std::max(worst, code);
		}
		return worst;
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
}

int cli_landscape(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
	try {
		const Problem pb = load_problem(cfg);
		const auto values = enumerate_critical_values(pb.spec, cfg.p, pb.cov, cfg.landscape_cap);
		const double e_min = values.front().error;
		const double tie = 1e-12 * std::max(1.0, std::abs(e_min));
		const ComplexMatrix c = ComplexMatrix::Identity(cfg.p, cfg.p);

		std::string lines;
		int saddles = 0;
		int escaped = 0;
		for (std::size_t k = 0; k < values.size(); ++k) {
			const auto &v = values[k];
			const bool is_min = v.error - e_min <= tie;
			json rec;
			rec["rank"] = k + 1;
			rec["index_set"] = v.index_set.indices();
			rec["error"] = v.error;
			rec["global_minimum"] = is_min;
			if (is_min) {
				rec["escape_delta_e"] = nullptr;
				rec["rotated_out"] = nullptr;
				rec["rotated_in"] = nullptr;
			} else {
				const AutoencoderParams point = build_critical_point(pb.spec, v.index_set, c, pb.cov);
				const EscapeResult esc = saddle_escape(point, pb.spec, pb.cov, cfg.escape_step);
				rec["escape_delta_e"] = esc.delta_e;
				rec["rotated_out"] = esc.rotated_out;
				rec["rotated_in"] = esc.rotated_in;
				++saddles;
				if (esc.delta_e < 0.0)
					++escaped;
			}
			lines += rec.dump() + '\n';
		}
		ensure_dir(cfg.out);
		write_file_atomic(cfg.out / "landscape.jsonl", lines);

		out << fmt::format("{} critical values for n={}, p={}\n", values.size(), pb.n(), cfg.p);
		out << fmt::format("  global minimum {} with E = {}\n", values.front().index_set.to_string(),
		                   fmt_num(e_min));
		out << fmt::format("  saddles with a descent direction: {}/{}\n", escaped, saddles);
		out << fmt::format("  wrote {}\n", (cfg.out / "landscape.jsonl").string());
		return escaped == saddles ? 0 : 3;
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
}

namespace {

struct CheckRow {
	std::string name;
	enum class State { Pass, Fail, NotApplicable, Skipped } state;
	std::string detail;
};

const char *state_label(CheckRow::State s) {
	switch (s) {
	case CheckRow::State::Pass:
		return "pass";
	case CheckRow::State::Fail:
		return "FAIL";
	case CheckRow::State::NotApplicable:
		return "n/a";
	case CheckRow::State::Skipped:
		return "skip";
	}
	return "?";
}

CheckRow make_row(std::string name, bool ok, std::string detail) {
	return {std::move(name), ok ? CheckRow::State::Pass : CheckRow::State::Fail, std::move(detail)};
}

} // namespace

int cli_verify(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err, bool color) {
	std::optional<Problem> loaded;
	try {
		loaded.emplace(load_problem(cfg));
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
	Problem &pb = *loaded;
	const Index n = pb.n();
	const Index p = cfg.p;
	const bool auto_assoc = pb.cov.auto_associative;

	if (cfg.inject_non_hermitian)
		pb.cov.sigma_xx(0, n - 1) += 1e-3 * pb.cov.sigma_xx.norm();

	std::vector<CheckRow> rows;
	auto guarded = [&](const std::string &name, const std::function<CheckRow()> &fn) {
		try {
			rows.push_back(fn());
		} catch (const std::exception &e) {
			rows.push_back({name, CheckRow::State::Fail, e.what()});
		}
	};

	guarded("hermitian", [&] {
		const double d = std::max({hermitian_defect(pb.cov.sigma_xx), hermitian_defect(pb.cov.sigma_yy),
		                           hermitian_defect(pb.cov.sigma)});
		return make_row("hermitian", d <= 1e-10, fmt::format("defect {:.3g}", d));
	});
	const bool hermitian_ok = rows.back().state == CheckRow::State::Pass;

	auto skip_rest = [&](std::initializer_list<const char *> names) {
		for (const char *nm : names)
			rows.push_back({nm, CheckRow::State::Skipped, "covariances are not Hermitian"});
	};

	if (!hermitian_ok) {
		skip_rest({"group-invariance", "input-output-transform", "conjugate-transposition", "em-descent",
		           "pca-floor", "recycling", "converse"});
		if (!cfg.layers.empty())
			skip_rest({"deep-equivalence"});
	} else {
		const AutoencoderParams probe = init_random(n, p, cfg.seed + 1);

		guarded("group-invariance", [&] {
			const ComplexMatrix c = random_invertible(p, cfg.seed + 2);
			const ComplexMatrix c_inv = c.partialPivLu().inverse();
			const double e0 = reconstruction_error(probe, pb.cov);
			const double e1 = reconstruction_error(AutoencoderParams(probe.a() * c, c_inv * probe.b()), pb.cov);
			const double rel = std::abs(e1 - e0) / std::max(e0, 1e-300);
			return make_row("group-invariance", rel <= 1e-10, fmt::format("rel diff {:.3g}", rel));
		});

		guarded("input-output-transform", [&] {
			if (cfg.ridge != 0.0)
				return CheckRow{"input-output-transform", CheckRow::State::NotApplicable, "ridge breaks invariance"};
			const ComplexMatrix cin = random_invertible(n, cfg.seed + 3);
			const ComplexMatrix d = random_unitary(n, cfg.seed + 4);
			const ProblemTransform tr = transform_problem(pb.dataset, cin, d);
			const CovarianceSet cov2 = compute_covariances(tr.dataset);
			const double e0 = reconstruction_error(probe, pb.cov);
			const double e1 = reconstruction_error(tr.map(probe), cov2);
			const double rel = std::abs(e1 - e0) / std::max(e0, 1e-300);
			return make_row("input-output-transform", rel <= 1e-10, fmt::format("rel diff {:.3g}", rel));
		});

		guarded("conjugate-transposition", [&] {
			if (!auto_assoc)
				return CheckRow{"conjugate-transposition", CheckRow::State::NotApplicable, "hetero-associative"};
			const AutoencoderParams opt(probe.a(), solve_b_given_a(probe.a(), pb.cov));
			const ConjugacyReport r = conjugate_transpose_identity(opt, pb.cov);
			return make_row("conjugate-transposition", r.hermitian_residual <= 1e-9 && r.transpose_error_residual <= 1e-9,
			                fmt::format("||W-W*|| {:.3g}, E gap {:.3g}", r.hermitian_residual,
			                            r.transpose_error_residual));
		});

		// Convergence-based checks use a schedule that is expected to converge.
		const int alg = Schedule::algorithm(cfg.algorithm).convergence_expected ? cfg.algorithm : 1;
		std::optional<TrainingTrace> trace;
		guarded("em-descent", [&] {
			trace = run_schedule(init_random(n, p, cfg.seed), Schedule::algorithm(alg), pb.cov, cfg.stop);
			return make_row("em-descent", em_descent_check(*trace),
			                fmt::format("{} over {} steps", Schedule::algorithm(alg).name, trace->steps.size()));
		});

		const bool have_point = trace && trace->final_params;
		guarded("pca-floor", [&] {
			if (!have_point)
				return CheckRow{"pca-floor", CheckRow::State::Fail, "no trained point"};
			const double floor = pb.floor(p);
			const double gap = std::abs(trace->final_error() - floor);
			const bool ok = trace->status == TerminalStatus::Converged && gap <= 1e-6 * error_scale(pb, floor);
			return make_row("pca-floor", ok,
			                fmt::format("{} E {} floor {}", status_name(trace->status), fmt_num(trace->final_error()),
			                            fmt_num(floor)));
		});

		guarded("recycling", [&] {
			if (!auto_assoc)
				return CheckRow{"recycling", CheckRow::State::NotApplicable, "hetero-associative"};
			if (!have_point)
				return CheckRow{"recycling", CheckRow::State::Fail, "no trained point"};
			const ComplexMatrix w = trace->final_params->w();
			const double idem = (w * w - w).norm() / w.norm();
			const ComplexVector x = random_complex_normal(n, 1, cfg.seed + 5).col(0);
			const ComplexVector wx = w * x;
			double worst = 0.0;
			for (int m : {2, 3, 5, 10})
				worst = std::max(worst, (recycle(w, x, m) - wx).norm() / x.norm());
			return make_row("recycling", idem <= 1e-8 && worst <= 1e-8,
			                fmt::format("||W^2-W|| {:.3g}, recycle {:.3g}", idem, worst));
		});

		guarded("converse", [&] {
			if (!auto_assoc)
				return CheckRow{"converse", CheckRow::State::NotApplicable, "hetero-associative"};
			if (!have_point)
				return CheckRow{"converse", CheckRow::State::Fail, "no trained point"};
			const ConverseReport r = projection_converse_check(*trace->final_params);
			return make_row("converse", r.converse_holds,
			                fmt::format("BA-I {:.3g}, B recovery {:.3g}", r.ba_identity_residual,
			                            r.b_recovery_residual));
		});

		if (!cfg.layers.empty()) {
			guarded("deep-equivalence", [&] {
				const Index b = bottleneck(cfg.layers);
				const DeepTrace deep = run_stage_descent(init_random_deep(cfg.layers, cfg.seed), pb.cov, cfg.stop);
				const DeepTrace shallow = run_stage_descent(init_random_deep({n, b, n}, cfg.seed), pb.cov, cfg.stop);
				const double floor = pb.floor(b);
				const double tol = 1e-6 * std::max(1.0, floor);
				const double e_deep = deep.final_error();
				const double e_shallow = shallow.final_error();
				const bool ok = std::abs(e_deep - e_shallow) <= tol && std::abs(e_deep - floor) <= tol &&
				                std::abs(e_shallow - floor) <= tol;
				return make_row("deep-equivalence", ok,
				                fmt::format("deep {} shallow {} floor {}", fmt_num(e_deep), fmt_num(e_shallow),
				                            fmt_num(floor)));
			});
		}
	}

	std::size_t width = 0;
	for (const auto &r : rows)
		width = std::max(width, r.name.size());
	std::vector<std::string> failed;
	for (const auto &r : rows) {
		std::string label = state_label(r.state);
		if (color) {
			const char *code = r.state == CheckRow::State::Pass   ? "\x1b[32m"
			                   : r.state == CheckRow::State::Fail ? "\x1b[31m"
			                                                      : "\x1b[33m";
			label = std::string(code) + label + "\x1b[0m";
		}
		out << fmt::format("{:<{}}  {}  {}\n", r.name, width, label, r.detail);
		if (r.state == CheckRow::State::Fail)
			failed.push_back(r.name);
	}
	if (failed.empty())
		return 0;
	std::string names;
	for (std::size_t k = 0; k < failed.size(); ++k)
		names += (k ? ", " : "") + failed[k];
	err << "verify failed: " << names << '\n';
	return 3;
}

int cli_factorize(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
	try {
		if (!cfg.layers.empty())
			throw ConfigError("factorize works on single hidden layer configs");
		const Problem pb = load_problem(cfg);
		const Schedule sched = Schedule::algorithm(cfg.algorithm);
		const TrainingTrace trace = run_schedule(init_random(pb.n(), cfg.p, cfg.seed), sched, pb.cov, cfg.stop);
		if (!trace.final_params)
			throw Error("training produced no parameters");
		const ComplexMatrix w = trace.final_params->w();
		const AutoencoderParams f = rank_p_factorize(w, cfg.p);
		const double residual = (f.w() - w).norm() / w.norm();
		const double e_trained = reconstruction_error(*trace.final_params, pb.cov);
		const double e_factored = reconstruction_error(f, pb.cov);
		const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(w).singularValues();

		json rep;
		rep["n"] = pb.n();
		rep["p"] = cfg.p;
		rep["status"] = std::string(status_name(trace.status));
		rep["singular_values"] = std::vector<double>(sv.data(), sv.data() + sv.size());
		rep["factorization_residual"] = residual;
		rep["error_trained"] = e_trained;
		rep["error_factored"] = e_factored;
		ensure_dir(cfg.out);
		write_file_atomic(cfg.out / "factorization.json", rep.dump(2) + "\n");

		out << fmt::format("rank-{} factorization of the trained W (n={})\n", cfg.p, pb.n());
		out << fmt::format("  ||AB - W|| / ||W||  {:.3g}\n", residual);
		out << fmt::format("  E trained {}  E factored {}\n", fmt_num(e_trained), fmt_num(e_factored));
		return residual <= 1e-9 ? 0 : 3;
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
}

} // namespace linae
