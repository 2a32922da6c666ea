#include "oracles.hpp"

#include <linae/io.hpp>
#include <linae/landscape.hpp>
#include <linae/training.hpp>

#include <doctest.h>

using namespace linae;

namespace {

const Complex I1(0.0, 1.0);

struct Instance {
	Dataset data;
	CovarianceSet cov;
	Spectrum spec;
};

Instance diagonal(std::vector<double> ev) {
	SyntheticSpec s;
	s.eigenvalues = std::move(ev);
	Dataset d = generate_synthetic(s);
	CovarianceSet c = compute_covariances(d);
	Spectrum sp = spectrum(c.sigma);
	return {std::move(d), std::move(c), std::move(sp)};
}

} // namespace

TEST_SUITE("landscape") {

TEST_CASE("spectrum of simple inputs") {
	const Instance inst = diagonal({3, 2, 1});
	CHECK((inst.spec.eigenvalues - RealVector::LinSpaced(3, 3.0, 1.0)).norm() <= 1e-12);
	CHECK((inst.spec.eigenvectors - ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);
	CHECK_FALSE(inst.spec.gap_warning);

	ComplexMatrix h(2, 2);
	h << 1.0, -I1, I1, 1.0;
	const Spectrum s = spectrum(h);
	CHECK(s.eigenvalues(0) == doctest::Approx(2.0));
	CHECK(std::abs(s.eigenvalues(1)) <= 1e-15);

	ComplexMatrix rep = ComplexMatrix::Identity(3, 3);
	rep(2, 2) = 0.5;
	CHECK(spectrum(rep).gap_warning);

	ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
	bad(0, 1) = 0.3;
	CHECK_THROWS_AS(spectrum(bad), NotHermitianError);
}

TEST_CASE("index set validation") {
	CHECK_THROWS(IndexSet({2, 1}, 3));
	CHECK_THROWS(IndexSet({0, 1}, 3));
	CHECK_THROWS(IndexSet({1, 4}, 3));
	CHECK_THROWS(IndexSet({1, 1}, 3));
	const IndexSet s({1, 3}, 4);
	CHECK(s.complement() == std::vector<int>{2, 4});
	CHECK(s.to_string() == "{1,3}");
	CHECK(IndexSet::top(2, 4) == IndexSet({1, 2}, 4));
}

TEST_CASE("critical points of diag(3,2,1)") {
	const Instance inst = diagonal({3, 2, 1});
	const ComplexMatrix c = ComplexMatrix::Identity(2, 2);
	const AutoencoderParams top = build_critical_point(inst.spec, IndexSet({1, 2}, 3), c, inst.cov);
	CHECK((top.a() - ComplexMatrix::Identity(3, 2)).norm() <= 1e-12);
	CHECK((top.b() - ComplexMatrix(top.a().transpose())).norm() <= 1e-12);
	CHECK(reconstruction_error_samples(top.w(), inst.data) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(critical_error(inst.spec, IndexSet({1, 2}, 3), inst.cov) == doctest::Approx(1.0).epsilon(1e-12));

	const AutoencoderParams low = build_critical_point(inst.spec, IndexSet({2, 3}, 3), c, inst.cov);
	CHECK(reconstruction_error_samples(low.w(), inst.data) == doctest::Approx(3.0).epsilon(1e-12));

	const AutoencoderParams scaled = build_critical_point(inst.spec, IndexSet({1, 2}, 3), 2.0 * c, inst.cov);
	CHECK((scaled.w() - top.w()).norm() <= 1e-12);

	CHECK(critical_error(inst.spec, IndexSet({1}, 3), inst.cov) == doctest::Approx(3.0).epsilon(1e-12));
	CHECK(critical_error(inst.spec, IndexSet({3}, 3), inst.cov) == doctest::Approx(5.0).epsilon(1e-12));
	CHECK(std::abs(critical_error(inst.spec, IndexSet({1, 2, 3}, 3), inst.cov)) <= 1e-12);

	CHECK_THROWS_AS(build_critical_point(inst.spec, IndexSet({1, 2}, 3), ComplexMatrix::Zero(2, 2), inst.cov),
	                SingularMatrixError);
}

TEST_CASE("is_critical classifies and rejects") {
	const Instance inst = diagonal({5, 4, 3, 2, 1});
	std::mt19937_64 gen(9);
	const ComplexMatrix c = oracle::gaussian(2, 2, gen);
	const IndexSet idx({2, 4}, 5);
	const AutoencoderParams p = build_critical_point(inst.spec, idx, c, inst.cov);
	const CriticalPointReport r = is_critical(p, inst.cov, 1e-8, &inst.spec);
	CHECK(r.is_critical);
	REQUIRE(r.classified_index_set);
	CHECK(*r.classified_index_set == idx);

	int rejected = 0;
	for (std::uint64_t seed = 0; seed < 10; ++seed) {
		const AutoencoderParams rnd = init_random(5, 2, seed);
		const CriticalPointReport rr = is_critical(rnd, inst.cov, 1e-8);
		if (!rr.is_critical && std::max(rr.residual_a_eq, rr.residual_b_eq) > 1e-3)
			++rejected;
	}
	CHECK(rejected == 10);

	const ComplexMatrix a = oracle::gaussian(5, 2, gen);
	const AutoencoderParams half(a, solve_b_given_a(a, inst.cov));
	const CriticalPointReport hr = is_critical(half, inst.cov, 1e-8);
	CHECK(hr.residual_b_eq <= 1e-8);
	CHECK(hr.residual_a_eq > 1e-8);
	CHECK_FALSE(hr.is_critical);
}

TEST_CASE("enumeration matches complement sums") {
	const Instance inst = diagonal({3, 2, 1});
	const auto vals = enumerate_critical_values(inst.spec, 2, inst.cov);
	REQUIRE(vals.size() == 3);
	const std::vector<std::vector<int>> sets{{1, 2}, {1, 3}, {2, 3}};
	for (std::size_t k = 0; k < 3; ++k) {
		CHECK(vals[k].index_set.indices() == sets[k]);
		CHECK(vals[k].error == doctest::Approx(oracle::complement_sum({3, 2, 1}, sets[k])).epsilon(1e-12));
	}
	const Instance four = diagonal({4, 3, 2, 1});
	CHECK(enumerate_critical_values(four.spec, 2, four.cov).size() == 6);
	CHECK(binomial(4, 2) == 6.0);
	CHECK_THROWS_AS(enumerate_critical_values(four.spec, 2, four.cov, 5.0), CapExceededError);

	const Instance five = diagonal({16, 8, 4, 2, 1});
	const auto all = enumerate_critical_values(five.spec, 3, five.cov);
	for (std::size_t k = 1; k < all.size(); ++k)
		CHECK(all[k].error > all[k - 1].error);
}

TEST_CASE("saddle escape") {
	const Instance inst = diagonal({3, 2, 1});
	const ComplexMatrix c1 = ComplexMatrix::Identity(1, 1);
	const AutoencoderParams s2 = build_critical_point(inst.spec, IndexSet({2}, 3), c1, inst.cov);
	const EscapeResult e = saddle_escape(s2, inst.spec, inst.cov, 1e-2);
	CHECK(e.delta_e < 0.0);
	CHECK(e.rotated_out == 2);
	CHECK(e.rotated_in == 1);
	// Along the rotation E changes by -(l_in - l_out) sin^2(step).
	CHECK(e.delta_e == doctest::Approx(-(3.0 - 2.0) * std::pow(std::sin(1e-2), 2)).epsilon(1e-8));

	const ComplexMatrix c2 = ComplexMatrix::Identity(2, 2);
	const AutoencoderParams s13 = build_critical_point(inst.spec, IndexSet({1, 3}, 3), c2, inst.cov);
	const EscapeResult e13 = saddle_escape(s13, inst.spec, inst.cov, 1e-3);
	CHECK(e13.delta_e < 0.0);
	CHECK(e13.rotated_out == 3);
	CHECK(e13.rotated_in == 2);

	const AutoencoderParams top = build_critical_point(inst.spec, IndexSet({1, 2}, 3), c2, inst.cov);
	CHECK_THROWS_AS(saddle_escape(top, inst.spec, inst.cov, 1e-3), NoEscapeError);
}

TEST_CASE("conjugate transposition identity") {
	const Instance inst = diagonal({5, 4, 3, 2, 1});
	std::mt19937_64 gen(12);
	const ComplexMatrix a = oracle::gaussian(5, 2, gen);
	const ConjugacyReport r = conjugate_transpose_identity(AutoencoderParams(a, solve_b_given_a(a, inst.cov)), inst.cov);
	CHECK(r.hermitian_residual <= 1e-9);
	CHECK(r.transpose_error_residual <= 1e-9);

	const ConjugacyReport raw = conjugate_transpose_identity(init_random(5, 2, 3), inst.cov);
	CHECK(raw.hermitian_residual > 1e-2);

	const AutoencoderParams cp =
	    build_critical_point(inst.spec, IndexSet({1, 3}, 5), ComplexMatrix::Identity(2, 2), inst.cov);
	CHECK((cp.a() - cp.b().adjoint()).norm() <= 1e-10);
}

TEST_CASE("problem transforms") {
	std::mt19937_64 gen(14);
	const Dataset d(oracle::gaussian(4, 12, gen));
	const CovarianceSet c = compute_covariances(d);
	const AutoencoderParams p = init_random(4, 2, 5);

	const ProblemTransform id = transform_problem(d, ComplexMatrix::Identity(4, 4), ComplexMatrix::Identity(4, 4));
	CHECK(reconstruction_error(id.map(p), compute_covariances(id.dataset)) == reconstruction_error(p, c));

	const Spectrum sp = spectrum(c.sigma_xx);
	const ComplexMatrix u = sp.eigenvectors.adjoint();
	const ProblemTransform rot = transform_problem(d, u, u);
	const ComplexMatrix sxx = compute_covariances(rot.dataset).sigma_xx;
	ComplexMatrix off = sxx;
	off.diagonal().setZero();
	CHECK(off.norm() <= 1e-10 * sxx.norm());

	Eigen::HouseholderQR<ComplexMatrix> qr(oracle::gaussian(4, 4, gen));
	const ComplexMatrix dq = qr.householderQ() * ComplexMatrix::Identity(4, 4);
	const ComplexMatrix cin = oracle::gaussian(4, 4, gen);
	const ProblemTransform tr = transform_problem(d, cin, dq);
	const double e0 = reconstruction_error(p, c);
	const double e1 = reconstruction_error(tr.map(p), compute_covariances(tr.dataset));
	CHECK(oracle::rel(e0, e1) <= 1e-10);

	CHECK_THROWS(transform_problem(d, cin, cin));
	CHECK_THROWS_AS(transform_problem(d, ComplexMatrix::Zero(4, 4), dq), SingularMatrixError);
}

TEST_CASE("tangent space dimension") {
	for (auto [n, p] : {std::pair{4, 2}, {6, 3}, {8, 2}, {5, 1}})
		CHECK(tangent_space_dimension(init_random(n, p, 100 + n)) == 2 * n * p - p * p);
}

}
