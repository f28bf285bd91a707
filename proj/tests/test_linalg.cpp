#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "linalg.hpp"
#include "test_support.hpp"

using namespace minerr;

TEST_CASE("is_metzler") {
    const Matrix a_g1 = testing::paper_A() + testing::paper_G1() * testing::paper_C();
    CHECK(a_g1 == Matrix{{-2, 0.5, 0}, {1, -2, 0.8}, {0, 0.7, -4}});
    CHECK(is_metzler(a_g1));
    CHECK(is_metzler(Matrix{{-1, 0}, {0, -1}}));
    CHECK_FALSE(is_metzler(Matrix{{0, -0.1}, {1, 0}}));
    CHECK_THROWS_AS(is_metzler(Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("positive_split basics") {
    const auto [plus, minus] = positive_split(Matrix{{1, -2}, {0, 3}});
    CHECK(plus == Matrix{{1, 0}, {0, 3}});
    CHECK(minus == Matrix{{0, 2}, {0, 0}});

    const auto id = positive_split(Matrix::identity(3));
    CHECK(id.plus == Matrix::identity(3));
    CHECK(id.minus == Matrix::zero(3, 3));

    const auto neg = positive_split(Matrix{{-5}});
    CHECK(neg.plus == Matrix{{0}});
    CHECK(neg.minus == Matrix{{5}});
}

TEST_CASE("positive_split property: exact reconstruction, nonnegative parts") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
        const auto [plus, minus] = positive_split(m);
        CHECK(plus - minus == m);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                CHECK(plus(i, j) >= 0.0);
                CHECK(minus(i, j) >= 0.0);
            }
        }
    }
}

TEST_CASE("elementwise_leq") {
    CHECK(elementwise_leq(Vector{0, 1, 1}, Vector{2, 3, 3}));
    CHECK(elementwise_leq(Vector{1}, Vector{1}));
    CHECK_FALSE(elementwise_leq(Vector{2}, Vector{1}));
    CHECK_THROWS_AS(elementwise_leq(Vector{1}, Vector{1, 2}), std::invalid_argument);
}

TEST_CASE("lu_solve on the example matrices") {
    const Matrix m = {{-1, 0, 0}, {1, -1, 0.8}, {0.8, 0, -4}};
    const auto x = lu_solve(m, Vector{-1, -1, -1});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((*x)[1] == doctest::Approx(2.36).epsilon(1e-12));
    CHECK((*x)[2] == doctest::Approx(0.45).epsilon(1e-12));

    CHECK_FALSE(lu_solve(Matrix{{1, 2}, {2, 4}}, Vector{1, 1}).has_value());
}

TEST_CASE("hurwitz_metzler_certificate golden cases") {
    SUBCASE("scalar") {
        const auto cert = hurwitz_metzler_certificate(Matrix{{-1}});
        REQUIRE(cert.has_value());
        CHECK(cert->v[0] == doctest::Approx(1.0));
        CHECK(cert->epsilon == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("A + G3 C") {
        const Matrix m = testing::paper_A() + testing::paper_G3() * testing::paper_C();
        CHECK(m == Matrix{{-1, 0, 0}, {1, -1, 0.8}, {0.8, 0, -4}});
        const auto cert = hurwitz_metzler_certificate(m);
        REQUIRE(cert.has_value());
        CHECK(cert->v[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cert->v[1] == doctest::Approx(2.36).epsilon(1e-10));
        CHECK(cert->v[2] == doctest::Approx(0.45).epsilon(1e-10));
        CHECK(cert->epsilon == doctest::Approx(1.0 / 2.36).epsilon(1e-9));
        // the witness inequality must hold row by row, no slack allowed
        const Vector mv = matvec(m, cert->v);
        for (std::size_t i = 0; i < 3; ++i) CHECK(mv[i] <= -cert->epsilon * cert->v[i]);
    }
    SUBCASE("not Hurwitz") {
        CHECK_FALSE(hurwitz_metzler_certificate(Matrix{{0, 1}, {1, 0}}).has_value());
    }
}

namespace {

// Dominant-eigenvalue oracle via power iteration on M + shift*I, which is
// nonnegative for Metzler M with a large enough shift; independent of the
// LU route used by the certificate.
double dominant_eigenvalue(const Matrix& m) {
    double shift = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) shift = std::max(shift, std::abs(m(i, i)));
    shift += 1.0;
    Matrix shifted = m + Matrix::identity(m.rows()).scaled(shift);
    Vector v(m.rows());
    for (std::size_t i = 0; i < v.dim(); ++i) v[i] = 1.0;
    double lambda = 0.0;
    for (int iter = 0; iter < 20000; ++iter) {
        const Vector next = matvec(shifted, v);
        lambda = next.inf_norm();
        if (lambda == 0.0) return -shift;
        v = next.scaled(1.0 / lambda);
    }
    return lambda - shift;
}

}  // namespace

TEST_CASE("certificate agrees with a Perron-Frobenius eigenvalue oracle") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> offdiag(0.0, 1.0);
    std::uniform_real_distribution<double> diag(-3.0, 1.0);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m(i, j) = i == j ? diag(rng) : offdiag(rng);
        }
        const double lambda = dominant_eigenvalue(m);
        if (std::abs(lambda) < 1e-6) continue;  // too close to the boundary to classify
        const auto cert = hurwitz_metzler_certificate(m);
        if (lambda < 0.0) {
            REQUIRE_MESSAGE(cert.has_value(), "Hurwitz Metzler matrix must yield a certificate");
            const Vector mv = matvec(m, cert->v);
            for (std::size_t i = 0; i < n; ++i) CHECK(mv[i] <= -cert->epsilon * cert->v[i]);
            ++feasible;
        } else {
            CHECK_FALSE(cert.has_value());
            ++infeasible;
        }
    }
    CHECK(feasible > 20);
    CHECK(infeasible > 20);
}

TEST_CASE("all three example gains give Metzler and certified matrices") {
    for (const Matrix& g : {testing::paper_G1(), testing::paper_G2(), testing::paper_G3()}) {
        const Matrix m = testing::paper_A() + g * testing::paper_C();
        CHECK(is_metzler(m));
        CHECK(hurwitz_metzler_certificate(m).has_value());
    }
}

TEST_CASE("construction rejects non-finite entries") {
    CHECK_THROWS_AS((Vector{1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(1, 1, {INFINITY}), std::invalid_argument);
}
