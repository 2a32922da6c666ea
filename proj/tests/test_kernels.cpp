#include "oracles.hpp"

#include <linae/kernels.hpp>

#include <doctest.h>

using namespace linae;
using namespace linae::kernels;

namespace {

struct IsaGuard {
	Isa saved = active_isa();
	~IsaGuard() { set_active_isa(saved); }
};

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar cross gram matches the per-sample loop") {
	std::mt19937_64 gen(3);
	for (auto [n, ny, m] : {std::tuple{1, 1, 1}, {3, 5, 7}, {4, 4, 16}, {7, 2, 33}}) {
		const ComplexMatrix x = oracle::gaussian(n, m, gen);
		const ComplexMatrix y = oracle::gaussian(ny, m, gen);
		const SplitMatrix sx(x), sy(y);
		ComplexMatrix out(n, ny);
		Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> buf(n, ny);
		cross_gram_scalar(sx.view(), sy.view(), false, buf.data());
		out = buf;
		CHECK((out - oracle::outer_sum(x, y)).norm() <= 1e-12 * out.norm());
	}
}

TEST_CASE("hermitian mode mirrors and zeroes the diagonal imaginary part") {
	std::mt19937_64 gen(5);
	const ComplexMatrix x = oracle::gaussian(6, 11, gen);
	const SplitMatrix sx(x);
	Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> buf(6, 6);
	cross_gram_scalar(sx.view(), sx.view(), true, buf.data());
	const ComplexMatrix g = buf;
	CHECK((g - g.adjoint()).norm() == 0.0);
	for (Index i = 0; i < 6; ++i)
		CHECK(g(i, i).imag() == 0.0);
	CHECK((g - oracle::outer_sum(x, x)).norm() <= 1e-12 * g.norm());
}

TEST_CASE("AVX2 variant agrees with the scalar reference") {
	if (detected_isa() != Isa::Avx2) {
		MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
		return;
	}
	std::mt19937_64 gen(11);
	// Odd sizes exercise the 2x2 block remainders and the vector tail.
	for (auto [n, ny, m] : {std::tuple{1, 1, 1}, {2, 3, 3}, {5, 5, 4}, {9, 7, 37}, {16, 16, 128}, {3, 10, 1001}}) {
		for (bool herm : {false, true}) {
			if (herm && n != ny)
				continue;
			const ComplexMatrix x = oracle::gaussian(n, m, gen);
			const ComplexMatrix y = herm ? x : oracle::gaussian(ny, m, gen);
			const SplitMatrix sx(x), sy(y);
			std::vector<Complex> a(static_cast<std::size_t>(n * ny)), b(a.size());
			cross_gram_scalar(sx.view(), sy.view(), herm, a.data());
			cross_gram_avx2(sx.view(), sy.view(), herm, b.data());
			double scale = 0.0, diff = 0.0;
			for (std::size_t k = 0; k < a.size(); ++k) {
				scale = std::max(scale, std::abs(a[k]));
				diff = std::max(diff, std::abs(a[k] - b[k]));
			}
			CAPTURE(n);
			CAPTURE(m);
			CAPTURE(herm);
			CHECK(diff <= 1e-13 * std::max(scale, 1.0) * std::sqrt(static_cast<double>(m)));
		}
	}
}

TEST_CASE("dispatch can be pinned to scalar and restored") {
	IsaGuard guard;
	set_active_isa(Isa::Scalar);
	CHECK(active_isa() == Isa::Scalar);
	std::mt19937_64 gen(2);
	const ComplexMatrix x = oracle::gaussian(4, 9, gen);
	const SplitMatrix sx(x);
	const ComplexMatrix g = cross_gram(sx.view(), sx.view(), true);
	CHECK((g - oracle::outer_sum(x, x)).norm() <= 1e-12 * g.norm());
	if (detected_isa() == Isa::Scalar)
		CHECK_THROWS(set_active_isa(Isa::Avx2));
	CHECK(isa_name(Isa::Scalar) == "scalar");
}

}
