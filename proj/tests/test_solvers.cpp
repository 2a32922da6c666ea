#include "oracles.hpp"

#include <linae/solvers.hpp>
#include <linae/training.hpp>

#include <doctest.h>

using namespace linae;

namespace {

const Complex I1(0.0, 1.0);

CovarianceSet diag_cov(std::initializer_list<double> ev) {
	const Index n = static_cast<Index>(ev.size());
	ComplexMatrix s = ComplexMatrix::Zero(n, n);
	Index k = 0;
	for (double v : ev) {
		s(k, k) = v;
		++k;
	}
	return covariances_from_matrices(s, s, s, true);
}

} // namespace

TEST_SUITE("solvers") {

TEST_CASE("regression_solve examples") {
	std::mt19937_64 gen(1);
	const ComplexMatrix x = oracle::gaussian(3, 8, gen);
	CHECK((regression_solve(compute_covariances(Dataset(x))) - ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);
	CHECK((regression_solve(compute_covariances(Dataset(x, ComplexMatrix(2.0 * x)))) -
	       2.0 * ComplexMatrix::Identity(3, 3))
	          .norm() <= 1e-12);

	ComplexMatrix sxx = ComplexMatrix::Zero(2, 2);
	sxx(0, 0) = 2.0;
	sxx(1, 1) = 1.0;
	ComplexMatrix syx = ComplexMatrix::Zero(2, 2);
	syx(0, 1) = 1.0;
	const CovarianceSet c = covariances_from_matrices(sxx, syx.adjoint(), ComplexMatrix::Identity(2, 2), false);
	CHECK((regression_solve(c) - syx).norm() <= 1e-15);
}

TEST_CASE("projection examples") {
	const ComplexMatrix a = ComplexMatrix::Identity(4, 2);
	ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
	expect(0, 0) = expect(1, 1) = 1.0;
	CHECK((projection(a) - expect).norm() <= 1e-15);

	ComplexMatrix v(2, 1);
	v << 1.0, I1;
	ComplexMatrix half(2, 2);
	half << 1.0, -I1, I1, 1.0;
	CHECK((projection(v) - 0.5 * half).norm() <= 1e-15);

	ComplexMatrix dep(3, 2);
	dep.col(0) << 1.0, 2.0, 3.0;
	dep.col(1) = 2.0 * dep.col(0);
	CHECK_THROWS_AS(projection(dep), RankDeficientError);
}

TEST_CASE("solve_b_given_a examples") {
	const CovarianceSet c = diag_cov({5, 4, 3, 2});
	const ComplexMatrix a = ComplexMatrix::Identity(4, 2);
	CHECK((solve_b_given_a(a, c) - ComplexMatrix(a.adjoint())).norm() <= 1e-15);

	std::mt19937_64 gen(4);
	const ComplexMatrix cc = oracle::gaussian(2, 2, gen);
	const ComplexMatrix b = solve_b_given_a(a * cc, c);
	CHECK((b - cc.inverse() * a.adjoint()).norm() <= 1e-12 * b.norm());

	const ComplexMatrix x = oracle::gaussian(4, 9, gen);
	const CovarianceSet h = compute_covariances(Dataset(x, ComplexMatrix(2.0 * x)));
	CHECK((solve_b_given_a(a, h) - 2.0 * ComplexMatrix(a.adjoint())).norm() <= 1e-12);
}

TEST_CASE("solve_b_given_a matches the normal equations on hetero data") {
	std::mt19937_64 gen(8);
	const ComplexMatrix x = oracle::gaussian(5, 14, gen);
	const ComplexMatrix y = oracle::gaussian(5, 14, gen);
	const CovarianceSet c = compute_covariances(Dataset(x, y));
	const ComplexMatrix a = oracle::gaussian(5, 2, gen);
	const ComplexMatrix sxx = oracle::outer_sum(x, x);
	const ComplexMatrix syx = oracle::outer_sum(y, x);
	const ComplexMatrix expect = (a.adjoint() * a).inverse() * a.adjoint() * syx * sxx.inverse();
	CHECK((solve_b_given_a(a, c) - expect).norm() <= 1e-10 * expect.norm());

	const ComplexMatrix b = oracle::gaussian(2, 5, gen);
	const ComplexMatrix expect_a = syx * b.adjoint() * (b * sxx * b.adjoint()).inverse();
	CHECK((solve_a_given_b(b, c) - expect_a).norm() <= 1e-10 * expect_a.norm());
}

TEST_CASE("solve_a_given_b examples") {
	const CovarianceSet id = diag_cov({1, 1, 1, 1});
	const ComplexMatrix b = ComplexMatrix::Identity(2, 4);
	CHECK((solve_a_given_b(b, id) - ComplexMatrix::Identity(4, 2)).norm() <= 1e-15);

	const CovarianceSet c = diag_cov({3, 2, 1});
	const ComplexMatrix row = ComplexMatrix::Ones(1, 3);
	ComplexMatrix expect(3, 1);
	expect << 3.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0;
	CHECK((solve_a_given_b(row, c) - expect).norm() <= 1e-15);

	ComplexMatrix dep = ComplexMatrix::Zero(2, 3);
	dep.row(0) << 1.0, 1.0, 0.0;
	dep.row(1) = dep.row(0);
	CHECK_THROWS_AS(solve_a_given_b(dep, c), RankDeficientError);
}

TEST_CASE("deep_solve_middle reduces to the single-layer solves") {
	std::mt19937_64 gen(21);
	const ComplexMatrix x = oracle::gaussian(4, 10, gen);
	const ComplexMatrix y = oracle::gaussian(4, 10, gen);
	const CovarianceSet c = compute_covariances(Dataset(x, y));
	CHECK((deep_solve_middle({}, {}, c) - regression_solve(c)).norm() <= 1e-10 * regression_solve(c).norm());

	const ComplexMatrix a = oracle::gaussian(4, 2, gen);
	const ComplexMatrix b = oracle::gaussian(2, 4, gen);
	const ComplexMatrix b_opt = solve_b_given_a(a, c);
	CHECK((deep_solve_middle({a}, {}, c) - b_opt).norm() <= 1e-10 * b_opt.norm());
	const ComplexMatrix a_opt = solve_a_given_b(b, c);
	CHECK((deep_solve_middle({}, {b}, c) - a_opt).norm() <= 1e-10 * a_opt.norm());
	CHECK((deep_solve_middle_min_norm({a}, {}, c) - b_opt).norm() <= 1e-9 * b_opt.norm());
}

TEST_CASE("deep stage solve does not increase E on a 10/5/3/5/10 stack") {
	ComplexMatrix s = ComplexMatrix::Zero(10, 10);
	for (int i = 0; i < 10; ++i)
		s(i, i) = 10.0 - i;
	const CovarianceSet c = covariances_from_matrices(s, s, s, true);
	const DeepParams deep = init_random_deep({10, 5, 3, 5, 10}, 3);
	const double before = reconstruction_error(deep.w(), c);
	// Re-solve stage 1 (the 5x3 stage); outer stages are rank 3 through the bottleneck.
	const ComplexMatrix mid = deep_solve_middle_min_norm({deep.stages[0]}, {deep.stages[2], deep.stages[3]}, c);
	DeepParams after = deep;
	after.stages[1] = mid;
	CHECK(reconstruction_error(after.w(), c) <= before * (1.0 + 1e-12));
	CHECK_THROWS_AS(deep_solve_middle({deep.stages[0], deep.stages[1], deep.stages[2]}, {}, c), RankDeficientError);
}

TEST_CASE("reconstruction error paths agree") {
	std::mt19937_64 gen(31);
	const ComplexMatrix x = oracle::gaussian(5, 13, gen);
	const ComplexMatrix y = oracle::gaussian(5, 13, gen);
	const Dataset d(x, y);
	const CovarianceSet c = compute_covariances(d);
	const ComplexMatrix a = oracle::gaussian(5, 2, gen);
	const ComplexMatrix b = oracle::gaussian(2, 5, gen);
	const AutoencoderParams params(a, b);
	const double brute = reconstruction_error_samples(a * b, d);
	CHECK(oracle::rel(reconstruction_error(params.w(), c), brute) <= 1e-12);
	CHECK(oracle::rel(reconstruction_error(params, c), brute) <= 1e-12);

	CHECK(reconstruction_error(ComplexMatrix::Zero(5, 5), c) == doctest::Approx(c.sigma_yy.trace().real()));
	const CovarianceSet auto_c = compute_covariances(Dataset(x));
	const AutoencoderParams full(ComplexMatrix::Identity(5, 5), ComplexMatrix::Identity(5, 5));
	CHECK(reconstruction_error(full, auto_c) <= 1e-12 * auto_c.sigma_yy.trace().real());
}

TEST_CASE("parameter validation") {
	CHECK_THROWS_AS(AutoencoderParams(ComplexMatrix::Zero(4, 2), ComplexMatrix::Zero(3, 4)), DimensionError);
	CHECK_THROWS_AS(AutoencoderParams(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(3, 2)), DimensionError);
	const AutoencoderParams z(ComplexMatrix::Zero(4, 2), ComplexMatrix::Zero(2, 4));
	CHECK_FALSE(z.a_full_rank());
	CHECK_THROWS_AS(solve_b_given_a(z.a(), diag_cov({4, 3, 2, 1})), RankDeficientError);
}

}
