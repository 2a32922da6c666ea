#include "oracles.hpp"

#include <linae/evaluation.hpp>
#include <linae/io.hpp>
#include <linae/landscape.hpp>
#include <linae/training.hpp>

#include <doctest.h>

using namespace linae;

TEST_SUITE("evaluation") {

TEST_CASE("generalization error") {
	std::mt19937_64 gen(1);
	const ComplexMatrix a = oracle::gaussian(5, 2, gen);
	CHECK(generalization_error(a, a * oracle::gaussian(2, 1, gen).col(0)) <= 1e-12);
	CHECK(generalization_error(ComplexMatrix::Identity(5, 2), ComplexVector::Unit(5, 4)) == doctest::Approx(1.0));

	const ComplexVector x = oracle::gaussian(5, 1, gen).col(0);
	// Projection by least squares through the normal equations.
	const ComplexVector coef = (a.adjoint() * a).inverse() * (a.adjoint() * x);
	const double expect = (x - a * coef).squaredNorm();
	CHECK(oracle::rel(generalization_error(a, x), expect) <= 1e-12);

	ComplexMatrix dep(3, 2);
	dep.col(0) << 1.0, 0.0, 0.0;
	dep.col(1) = dep.col(0);
	CHECK_THROWS_AS(generalization_error(dep, ComplexVector::Zero(3)), RankDeficientError);
}

TEST_CASE("generalization errors sum to the training error") {
	std::mt19937_64 gen(2);
	const ComplexMatrix x = oracle::gaussian(6, 20, gen);
	const CovarianceSet c = compute_covariances(Dataset(x));
	const ComplexMatrix a = oracle::gaussian(6, 3, gen);
	double sum = 0.0;
	for (Index t = 0; t < x.cols(); ++t)
		sum += generalization_error(a, x.col(t));
	const AutoencoderParams p(a, solve_b_given_a(a, c));
	CHECK(oracle::rel(sum, reconstruction_error(p, c)) <= 1e-9);
}

TEST_CASE("recycling") {
	SyntheticSpec s;
	s.eigenvalues = {5, 4, 3, 2, 1};
	const CovarianceSet c = compute_covariances(generate_synthetic(s));
	const Spectrum sp = spectrum(c.sigma);
	std::mt19937_64 gen(3);
	const AutoencoderParams cp = build_critical_point(sp, IndexSet({1, 3}, 5), oracle::gaussian(2, 2, gen), c);
	const ComplexMatrix w = cp.w();
	const ComplexVector x = oracle::gaussian(5, 1, gen).col(0);
	CHECK((recycle(w, x, 10) - w * x).norm() <= 1e-8 * x.norm());
	const ComplexVector in_span = cp.a() * oracle::gaussian(2, 1, gen).col(0);
	for (int m : {1, 2, 7})
		CHECK((recycle(w, in_span, m) - in_span).norm() <= 1e-9 * in_span.norm());

	const ComplexMatrix rnd = oracle::gaussian(5, 5, gen);
	CHECK((recycle(rnd, x, 2) - rnd * x).norm() > 1e-3);
	CHECK_THROWS(recycle(w, x, 0));
}

TEST_CASE("projection converse") {
	std::mt19937_64 gen(4);
	const ComplexMatrix a = oracle::gaussian(6, 2, gen);
	const ComplexMatrix b = (a.adjoint() * a).inverse() * a.adjoint();
	const ConverseReport fwd = projection_converse_check(AutoencoderParams(a, b));
	CHECK(fwd.is_projection);
	CHECK(fwd.converse_holds);
	CHECK(fwd.b_recovery_residual <= 1e-9);

	// Any left inverse gives BA = I and W^2 = W; the converse then pins B down
	// only when W is an orthogonal projection. Oblique left inverses break it.
	const ComplexMatrix extra = oracle::gaussian(2, 6, gen) * (ComplexMatrix::Identity(6, 6) - a * b);
	const ConverseReport oblique = projection_converse_check(AutoencoderParams(a, b + extra));
	CHECK(oblique.is_projection);
	CHECK(oblique.ba_identity_residual <= 1e-9);
	CHECK_FALSE(oblique.converse_holds);

	const ConverseReport rnd = projection_converse_check(init_random(6, 2, 9));
	CHECK_FALSE(rnd.is_projection);
	CHECK_FALSE(rnd.converse_holds);
}

TEST_CASE("rank-p factorization") {
	ComplexMatrix w = ComplexMatrix::Zero(3, 3);
	w(0, 0) = 2.0;
	const AutoencoderParams f = rank_p_factorize(w, 1);
	CHECK((f.w() - w).norm() <= 1e-15);
	CHECK(std::abs(f.a()(0, 0)) == doctest::Approx(2.0));
	CHECK(std::abs(f.b()(0, 0)) == doctest::Approx(1.0));

	const AutoencoderParams z = rank_p_factorize(ComplexMatrix::Zero(4, 4), 2);
	CHECK(z.w().norm() == 0.0);

	std::mt19937_64 gen(5);
	const ComplexMatrix w3 = oracle::gaussian(7, 3, gen) * oracle::gaussian(3, 7, gen);
	CHECK((rank_p_factorize(w3, 3).w() - w3).norm() <= 1e-9 * w3.norm());
	CHECK_THROWS_AS(rank_p_factorize(w3, 2), RankDeficientError);
}

TEST_CASE("kernel directions are collapsed by W") {
	SyntheticSpec s;
	s.eigenvalues = {5, 4, 3, 2, 1};
	const CovarianceSet c = compute_covariances(generate_synthetic(s));
	const Spectrum sp = spectrum(c.sigma);
	std::mt19937_64 gen(6);
	const AutoencoderParams cp = build_critical_point(sp, IndexSet({1, 2}, 5), oracle::gaussian(2, 2, gen), c);
	const ComplexMatrix ker = null_space(cp.b());
	CHECK(ker.cols() == 3);
	const ComplexVector x = oracle::gaussian(5, 1, gen).col(0);
	const ComplexVector k = ker * oracle::gaussian(3, 1, gen).col(0);
	const ComplexMatrix w = cp.w();
	CHECK((w * (x + k) - w * x).norm() <= 1e-9 * (w * x).norm());
}

TEST_CASE("hetero-associative critical map is P_A times the regression map") {
	std::mt19937_64 gen(7);
	const ComplexMatrix x = oracle::gaussian(5, 15, gen);
	const ComplexMatrix y = oracle::gaussian(5, 15, gen);
	const CovarianceSet c = compute_covariances(Dataset(x, y));
	const Spectrum sp = spectrum(c.sigma);
	const AutoencoderParams cp = build_critical_point(sp, IndexSet({1, 4}, 5), oracle::gaussian(2, 2, gen), c);
	const ComplexMatrix reg = oracle::outer_sum(y, x) * oracle::outer_sum(x, x).inverse();
	const ComplexMatrix pa = cp.a() * (cp.a().adjoint() * cp.a()).inverse() * cp.a().adjoint();
	const ComplexVector v = oracle::gaussian(5, 1, gen).col(0);
	CHECK((cp.w() * v - pa * reg * v).norm() <= 1e-9 * (cp.w() * v).norm());
}

}
