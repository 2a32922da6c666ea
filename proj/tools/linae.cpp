#include <linae/experiment.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <unistd.h>

namespace {

struct Options {
	std::string config;
	linae::ConfigOverrides overrides;
	// CLI11 fills these; they are copied into `overrides` when given.
	int algorithm = 0;
	long p = 0;
	std::uint64_t seed = 0;
	int max_iter = 0;
	double ridge = 0.0;
	int digit = 0;
	long cap = 0;
	std::string out;
	bool center = false;
};

void add_common(CLI::App *cmd, Options &o) {
	cmd->add_option("--config", o.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
	cmd->add_option("--algorithm", o.algorithm, "schedule 1..7")->check(CLI::Range(1, 7));
	cmd->add_option("--p", o.p, "hidden width")->check(CLI::PositiveNumber);
	cmd->add_option("--seed", o.seed, "initialization seed");
	cmd->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
	cmd->add_flag("--center", o.center, "subtract sample means");
	cmd->add_option("--ridge", o.ridge, "ridge added to Sigma_XX")->check(CLI::NonNegativeNumber);
	cmd->add_option("--digit", o.digit, "IDX label filter")->check(CLI::Range(0, 9));
	cmd->add_option("--cap", o.cap, "IDX sample cap")->check(CLI::PositiveNumber);
	cmd->add_option("--out", o.out, "output directory");
}

linae::ConfigOverrides collect(CLI::App *cmd, const Options &o) {
	linae::ConfigOverrides ov;
	if (cmd->count("--algorithm"))
		ov.algorithm = o.algorithm;
	if (cmd->count("--p"))
		ov.p = o.p;
	if (cmd->count("--seed"))
		ov.seed = o.seed;
	if (cmd->count("--max-iter"))
		ov.max_iter = o.max_iter;
	if (cmd->count("--center"))
		ov.center = true;
	if (cmd->count("--ridge"))
		ov.ridge = o.ridge;
	if (cmd->count("--digit"))
		ov.digit = o.digit;
	if (cmd->count("--cap"))
		ov.cap = o.cap;
	if (cmd->count("--out"))
		ov.out = o.out;
	return ov;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Linear autoencoder training and landscape analysis"};
	app.require_subcommand(1);
	Options o;
	auto *train = app.add_subcommand("train", "train with one of the seven schedules and write curves.csv");
	auto *landscape = app.add_subcommand("landscape", "enumerate critical points and probe saddle escapes");
	auto *verify = app.add_subcommand("verify", "run the invariant suite on the configured instance");
	auto *factorize = app.add_subcommand("factorize", "rank-p factorization of the trained map");
	for (auto *cmd : {train, landscape, verify, factorize})
		add_common(cmd, o);

	CLI11_PARSE(app, argc, argv);

	CLI::App *cmd = app.get_subcommands().front();
	linae::ExperimentConfig cfg;
	try {
		cfg = linae::load_config(o.config);
		linae::apply_overrides(cfg, collect(cmd, o));
		linae::validate_config(cfg);
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}

	if (cmd == train)
		return linae::cli_train(cfg, std::cout, std::cerr);
	if (cmd == landscape)
		return linae::cli_landscape(cfg, std::cout, std::cerr);
	if (cmd == verify) {
		const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
		return linae::cli_verify(cfg, std::cout, std::cerr, color);
	}
	return linae::cli_factorize(cfg, std::cout, std::cerr);
}
