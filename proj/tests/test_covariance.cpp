#include "oracles.hpp"

#include <linae/covariance.hpp>

#include <doctest.h>

using namespace linae;

namespace {
const Complex I1(0.0, 1.0);
}

TEST_SUITE("covariance") {

TEST_CASE("build_dataset echoes shape and association") {
	const Dataset d = build_dataset({ComplexVector::Unit(2, 0), ComplexVector::Unit(2, 1)});
	CHECK(d.dim() == 2);
	CHECK(d.samples() == 2);
	CHECK(d.auto_associative());

	ComplexVector x(2), y(2);
	x << 1.0, I1;
	y << 0.0, 0.0;
	const Dataset h = build_dataset({x}, std::vector<ComplexVector>{y});
	CHECK_FALSE(h.auto_associative());

	// Targets identical to inputs fold into the auto-associative case.
	CHECK(build_dataset({x}, std::vector<ComplexVector>{x}).auto_associative());
}

TEST_CASE("build_dataset validation") {
	CHECK_THROWS_AS(build_dataset({ComplexVector::Zero(2), ComplexVector::Zero(3)}), DimensionError);
	CHECK_THROWS_AS(build_dataset({}), DimensionError);
	ComplexVector bad = ComplexVector::Zero(2);
	bad(1) = std::numeric_limits<double>::quiet_NaN();
	CHECK_THROWS_AS(build_dataset({bad}), NonFiniteError);
	CHECK_THROWS_AS(build_dataset({ComplexVector::Zero(2)}, std::vector<ComplexVector>{ComplexVector::Zero(3)}),
	                DimensionError);
}

TEST_CASE("center subtracts the complex mean") {
	ComplexMatrix x(2, 2);
	x << 2.0, 0.0, 0.0, 0.0;
	const Dataset c = center(Dataset(x));
	CHECK(c.centered());
	CHECK(c.inputs()(0, 0) == Complex(1.0));
	CHECK(c.inputs()(0, 1) == Complex(-1.0));

	// Columns (1+i, 0) and (1-i, 2): mean (1, 1).
	ComplexMatrix z(2, 2);
	z << Complex(1, 1), Complex(1, -1), 0.0, 2.0;
	const Dataset cz = center(Dataset(z));
	ComplexMatrix expect(2, 2);
	expect << I1, -I1, -1.0, 1.0;
	CHECK((cz.inputs() - expect).norm() <= 1e-15);

	const Dataset twice = center(cz);
	CHECK((twice.inputs() - cz.inputs()).norm() <= 1e-15);
}

TEST_CASE("single-sample outer product") {
	ComplexVector x(2);
	x << 1.0, I1;
	const CovarianceSet c = compute_covariances(build_dataset({x}), 1.0);
	ComplexMatrix expect(2, 2);
	expect << 1.0, -I1, I1, 1.0;
	CHECK((c.sigma_xx - expect).norm() <= 1e-15);
	CHECK(c.samples == 1);
}

TEST_CASE("singular Sigma_XX without ridge names the condition number") {
	ComplexVector x(2);
	x << 1.0, I1;
	try {
		compute_covariances(build_dataset({x}));
		FAIL("expected SingularMatrixError");
	} catch (const SingularMatrixError &e) {
		CHECK(std::string(e.what()).find("condition") != std::string::npos);
		CHECK(e.condition() > 1e12);
	}
}

TEST_CASE("covariances match the per-sample sums") {
	std::mt19937_64 gen(17);
	const ComplexMatrix x = oracle::gaussian(4, 12, gen);
	const ComplexMatrix y = oracle::gaussian(4, 12, gen);
	const CovarianceSet c = compute_covariances(Dataset(x, y));
	CHECK_FALSE(c.auto_associative);
	CHECK(c.xx_invertible);
	const ComplexMatrix sxx = oracle::outer_sum(x, x);
	const ComplexMatrix sxy = oracle::outer_sum(x, y);
	const ComplexMatrix syy = oracle::outer_sum(y, y);
	CHECK((c.sigma_xx - sxx).norm() <= 1e-12 * sxx.norm());
	CHECK((c.sigma_xy - sxy).norm() <= 1e-12 * sxy.norm());
	CHECK((c.sigma_yx - sxy.adjoint()).norm() <= 1e-12 * sxy.norm());
	CHECK((c.sigma_yy - syy).norm() <= 1e-12 * syy.norm());
	const ComplexMatrix sigma = sxy.adjoint() * sxx.inverse() * sxy;
	CHECK((c.sigma - sigma).norm() <= 1e-10 * sigma.norm());
	CHECK((c.regression_map() - sxy.adjoint() * sxx.inverse()).norm() <= 1e-10 * sxy.norm());

	const CovarianceSet per = c.normalized();
	CHECK((per.sigma_xx * 12.0 - c.sigma_xx).norm() <= 1e-12 * c.sigma_xx.norm());
}

TEST_CASE("identity basis gives Sigma = Sigma_XX = I") {
	const CovarianceSet c = compute_covariances(build_dataset({ComplexVector::Unit(2, 0), ComplexVector::Unit(2, 1)}));
	CHECK(c.auto_associative);
	CHECK((c.sigma - ComplexMatrix::Identity(2, 2)).norm() <= 1e-15);
	CHECK((c.sigma_xx - ComplexMatrix::Identity(2, 2)).norm() <= 1e-15);
}

TEST_CASE("ridge regularizes a singular Sigma_XX") {
	ComplexVector x(2);
	x << 1.0, 0.0;
	const CovarianceSet c = compute_covariances(build_dataset({x}), 0.5);
	CHECK(c.ridge == 0.5);
	const ComplexMatrix sol = c.solve_xx(ComplexMatrix::Identity(2, 2));
	ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
	expect(0, 0) = 1.0 / 1.5;
	expect(1, 1) = 1.0 / 0.5;
	CHECK((sol - expect).norm() <= 1e-14);
}

TEST_CASE("denoising covariances") {
	const ComplexMatrix eye = ComplexMatrix::Identity(3, 3);
	const ComplexMatrix zero = ComplexMatrix::Zero(3, 3);
	SUBCASE("zero noise is auto-associative") {
		const CovarianceSet c = denoising_covariances(eye, zero, zero, zero);
		CHECK(c.auto_associative);
		CHECK((c.sigma - eye).norm() <= 1e-15);
	}
	SUBCASE("isotropic noise shrinks Sigma") {
		const double s2 = 0.25;
		const CovarianceSet c = denoising_covariances(eye, s2 * eye, zero, zero);
		CHECK_FALSE(c.auto_associative);
		CHECK((c.sigma - eye / (1.0 + s2)).norm() <= 1e-14);
	}
	SUBCASE("cross terms must be adjoint") {
		ComplexMatrix nx = zero;
		nx(0, 1) = 0.1;
		CHECK_THROWS_AS(denoising_covariances(eye, 0.1 * eye, nx, zero), NotHermitianError);
	}
}

TEST_CASE("explicit matrices must be Hermitian") {
	ComplexMatrix s = ComplexMatrix::Identity(2, 2);
	s(0, 1) = 0.5;
	CHECK_THROWS_AS(covariances_from_matrices(s, s, s, true), NotHermitianError);
}

}
