#include <doctest.h>

#include <random>

#include "phasebench/linalg.hpp"

using namespace phasebench;

namespace {

Mat4c random_hermitian(std::mt19937& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat4c m;
    for (std::size_t i = 0; i < 4; ++i) {
        m(i, i) = dist(gen);
        for (std::size_t j = i + 1; j < 4; ++j) {
            m(i, j) = cdouble{dist(gen), dist(gen)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("2x2 products and adjoints") {
    Mat2c a = Mat2c::diag(cdouble{0.0, 1.0}, 2.0);
    CHECK(max_abs_diff(a * Mat2c::identity(), a) == 0.0);
    CHECK(a.adjoint()(0, 0) == cdouble{0.0, -1.0});
    CHECK(a.det() == cdouble{0.0, 2.0});
}

TEST_CASE("2x2 Hermitian eigenvalues, closed form") {
    Mat2c m;
    m(0, 0) = 2.0;
    m(1, 1) = 1.0;
    m(0, 1) = cdouble{0.0, 1.0};
    m(1, 0) = cdouble{0.0, -1.0};
    const auto eig = hermitian_eigenvalues(m);  // 3/2 +- sqrt(5)/2
    CHECK(eig[0] == doctest::Approx(1.5 - std::sqrt(5.0) / 2.0).epsilon(1e-14));
    CHECK(eig[1] == doctest::Approx(1.5 + std::sqrt(5.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("4x4 Jacobi reconstructs random Hermitian matrices") {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat4c m = random_hermitian(gen);
        const auto es = hermitian_eigensystem(m);
        // A V = V diag(lambda)
        Mat4c lambda;
        for (std::size_t k = 0; k < 4; ++k) lambda(k, k) = es.values[k];
        CHECK(max_abs_diff(m * es.vectors, es.vectors * lambda) < 1e-11);
        CHECK(max_abs_diff(es.vectors.adjoint() * es.vectors, Mat4c::identity()) < 1e-11);
        CHECK(es.values[0] <= es.values[1]);
        CHECK(es.values[2] <= es.values[3]);
    }
}

TEST_CASE("3x3 symmetric eigenvalues") {
    const std::array<std::array<double, 3>, 3> m{{{2.0, 1.0, 0.0}, {1.0, 2.0, 0.0}, {0.0, 0.0, 5.0}}};
    const auto vals = symmetric_eigenvalues(m);
    CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(vals[2] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("kron index convention") {
    const Mat2c z = Mat2c::diag(1.0, -1.0);
    const Mat4c zz = kron(z, z);
    CHECK(zz(0, 0) == cdouble{1.0, 0.0});
    CHECK(zz(1, 1) == cdouble{-1.0, 0.0});
    CHECK(zz(2, 2) == cdouble{-1.0, 0.0});
    CHECK(zz(3, 3) == cdouble{1.0, 0.0});
}

TEST_CASE("dense solve") {
    // 2x + y = 5, x + 3y = 10
    const auto x = solve_dense({2.0, 1.0, 1.0, 3.0}, {5.0, 10.0}, 2);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));

    CHECK_THROWS_AS(solve_dense({1.0, 2.0, 2.0, 4.0}, {1.0, 2.0}, 2), std::runtime_error);
}
