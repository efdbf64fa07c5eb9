#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "risbo/errors.hpp"
#include "risbo/linalg.hpp"

using namespace risbo;
using namespace std::complex_literals;

namespace {

ComplexMatrix random_complex(std::uint64_t seed, const char* tag, Eigen::Index rows,
                             Eigen::Index cols) {
    RngStream rng(seed, StreamId().child(tag));
    return sample_complex_gaussian(rng, rows, cols, 1.0);
}

}  // namespace

TEST_CASE("sample_complex_gaussian with variance 0 is the zero matrix") {
    RngStream rng(1, StreamId().child("g"));
    const ComplexMatrix m = sample_complex_gaussian(rng, 4, 3, 0.0);
    CHECK(m.rows() == 4);
    CHECK(m.cols() == 3);
    CHECK(m.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_complex_gaussian matches E|entry|^2 = variance over 1e6 draws") {
    RngStream rng(2, StreamId().child("g"));
    const ComplexMatrix m = sample_complex_gaussian(rng, 1000, 1000, 1.0);
    CHECK(m.squaredNorm() / 1e6 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("sample_complex_gaussian is bitwise reproducible for one (seed, stream)") {
    RngStream a(3, StreamId().child("g"));
    RngStream b(3, StreamId().child("g"));
    const ComplexMatrix ma = sample_complex_gaussian(a, 5, 7, 2.5);
    const ComplexMatrix mb = sample_complex_gaussian(b, 5, 7, 2.5);
    CHECK(ma == mb);
}

TEST_CASE("sample_complex_gaussian rejects invalid arguments") {
    RngStream rng(4, StreamId().child("g"));
    CHECK_THROWS_AS(sample_complex_gaussian(rng, 0, 3, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(sample_complex_gaussian(rng, 3, 3, -1.0), InvalidParameterError);
    CHECK_THROWS_AS(
        sample_complex_gaussian(rng, 3, 3, std::numeric_limits<double>::quiet_NaN()),
        InvalidParameterError);
}

TEST_CASE("real_equivalent of [[j]] is the 2x2 rotation [[0,-1],[1,0]]") {
    ComplexMatrix m(1, 1);
    m(0, 0) = 1.0i;
    const RealMatrix r = real_equivalent(m);
    REQUIRE(r.rows() == 2);
    REQUIRE(r.cols() == 2);
    CHECK(r(0, 0) == 0.0);
    CHECK(r(0, 1) == -1.0);
    CHECK(r(1, 0) == 1.0);
    CHECK(r(1, 1) == 0.0);
}

TEST_CASE("real_equivalent of the complex identity is the real identity") {
    const ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    CHECK((real_equivalent(m) - RealMatrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("real_equivalent commutes with matrix-vector products") {
    const ComplexMatrix m = random_complex(5, "m", 5, 5);
    RngStream rng(5, StreamId().child("x"));
    const ComplexVector x = sample_complex_gaussian(rng, 5, 1, 1.0).col(0);
    const RealVector lhs = real_equivalent(m) * stack_real(x);
    const RealVector rhs = stack_real(m * x);
    CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("real_equivalent is a ring homomorphism on products") {
    const ComplexMatrix a = random_complex(6, "a", 4, 6);
    const ComplexMatrix b = random_complex(6, "b", 6, 3);
    const RealMatrix lhs = real_equivalent(ComplexMatrix(a * b));
    const RealMatrix rhs = real_equivalent(a) * real_equivalent(b);
    CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("stack_real and unstack_real are mutually inverse") {
    RngStream rng(7, StreamId().child("x"));
    const ComplexVector x = sample_complex_gaussian(rng, 9, 1, 1.0).col(0);
    CHECK((unstack_real(stack_real(x)) - x).norm() == 0.0);
    CHECK_THROWS_AS(unstack_real(RealVector::Zero(3)), ShapeError);
}

TEST_CASE("cholesky_solve handles identity and scaled identity exactly") {
    RngStream rng(8, StreamId().child("v"));
    RealVector v(6);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = rng.normal();
    }
    const RealMatrix eye = RealMatrix::Identity(6, 6);
    CHECK((cholesky_solve(eye, v) - v).norm() == 0.0);
    CHECK((cholesky_solve(RealMatrix(2.0 * eye), v) - 0.5 * v).norm() < 1e-15);
}

TEST_CASE("cholesky_solve residual is tiny on random SPD systems") {
    RngStream rng(9, StreamId().child("a"));
    RealMatrix a(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) {
            a(i, j) = rng.normal();
        }
    }
    const RealMatrix spd = a.transpose() * a + RealMatrix::Identity(6, 6);
    RealMatrix rhs(6, 2);
    for (Eigen::Index i = 0; i < rhs.size(); ++i) {
        rhs(i % 6, i / 6) = rng.normal();
    }
    const RealMatrix x = cholesky_solve(spd, rhs);
    CHECK((spd * x - rhs).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("cholesky failure names the failing pivot") {
    RealMatrix bad = RealMatrix::Identity(3, 3);
    bad(2, 2) = -1.0;  // not positive-definite at pivot 2
    try {
        CholeskyFactor chol(bad);
        FAIL("expected DecompositionError");
    } catch (const DecompositionError& e) {
        CHECK(e.pivot() == 2);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("CholeskyFactor::forward solves the lower-triangular system") {
    RngStream rng(10, StreamId().child("a"));
    RealMatrix a(5, 5);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a(i % 5, i / 5) = rng.normal();
    }
    const RealMatrix spd = a.transpose() * a + RealMatrix::Identity(5, 5);
    const CholeskyFactor chol(spd);
    RealVector rhs(5);
    for (Eigen::Index i = 0; i < 5; ++i) {
        rhs[i] = rng.normal();
    }
    const RealVector y = chol.forward(rhs);
    CHECK((chol.lower() * y - rhs).norm() < 1e-12);
}
