#include <linae/io.hpp>
#include <linae/training.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace linae {

SyntheticSpec::Kind parse_synthetic_kind(const std::string &name) {
	if (name == "diagonal-sigma")
		return SyntheticSpec::Kind::DiagonalSigma;
	if (name == "random-complex")
		return SyntheticSpec::Kind::RandomComplex;
	if (name == "random-real")
		return SyntheticSpec::Kind::RandomReal;
	throw ConfigError("unknown synthetic kind '" + name + "'");
}

std::string synthetic_kind_name(SyntheticSpec::Kind k) {
	switch (k) {
	case SyntheticSpec::Kind::DiagonalSigma:
		return "diagonal-sigma";
	case SyntheticSpec::Kind::RandomComplex:
		return "random-complex";
	case SyntheticSpec::Kind::RandomReal:
		return "random-real";
	}
	return "unknown";
}

namespace {

Dataset diagonal_sigma(const SyntheticSpec &spec) {
	const auto &ev = spec.eigenvalues;
	if (ev.empty())
		throw ConfigError("synthetic: eigenvalue list is empty");
	for (double l : ev)
		if (!(l > 0.0) || !std::isfinite(l))
			throw ConfigError(fmt::format("synthetic: eigenvalue {} is not positive", l));
	const Index k = spec.per_eigenvalue;
	if (k < 2 || k % 2 != 0)
		throw ConfigError("synthetic: samples per eigenvalue must be even and at least 2");
	if (!spec.allow_duplicates) {
		const double top = *std::max_element(ev.begin(), ev.end());
		for (std::size_t i = 0; i < ev.size(); ++i)
			for (std::size_t j = i + 1; j < ev.size(); ++j)
				if (std::abs(ev[i] - ev[j]) < 1e-8 * top)
					throw ConfigError(fmt::format("synthetic: duplicate eigenvalues {} and {}", ev[i], ev[j]));
	}
	const Index n = static_cast<Index>(ev.size());
	ComplexMatrix x = ComplexMatrix::Zero(n, n * k);
	// +-sqrt(l/K) e_i in alternating signs: zero mean and sum of outer products l e_i e_i*.
	for (Index i = 0; i < n; ++i) {
		const double a = std::sqrt(ev[static_cast<std::size_t>(i)] / static_cast<double>(k));
		for (Index s = 0; s < k; ++s)
			x(i, i * k + s) = (s % 2 == 0) ? a : -a;
	}
	return Dataset(std::move(x), std::nullopt, true);
}

Dataset random_real(const SyntheticSpec &spec) {
	std::mt19937_64 gen(spec.seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	ComplexMatrix x(spec.n, spec.m);
	for (Index j = 0; j < spec.m; ++j)
		for (Index i = 0; i < spec.n; ++i)
			x(i, j) = Complex(normal(gen), 0.0);
	return Dataset(std::move(x));
}

} // namespace

Dataset generate_synthetic(const SyntheticSpec &spec) {
	if (spec.kind == SyntheticSpec::Kind::DiagonalSigma)
		return diagonal_sigma(spec);
	if (spec.n <= 0 || spec.m <= 0)
		throw ConfigError("synthetic: n and m must be positive");
	if (!(spec.scale_decay > 0.0) || spec.scale_floor < 0.0)
		throw ConfigError("synthetic: scale_decay must be positive and scale_floor non-negative");
	Dataset base = spec.kind == SyntheticSpec::Kind::RandomComplex
	                   ? Dataset(random_complex_normal(spec.n, spec.m, spec.seed))
	                   : random_real(spec);
	if (spec.scale_decay == 1.0)
		return base;
	ComplexMatrix x = base.inputs();
	double s = 1.0;
	for (Index i = 0; i < spec.n; ++i) {
		x.row(i) *= std::max(s, spec.scale_floor);
		s *= spec.scale_decay;
	}
	return Dataset(std::move(x));
}

} // namespace linae
