#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddopt/errors.hpp"
#include "ddopt/numerics.hpp"
#include "ddopt/rng.hpp"

using namespace ddopt;

namespace {

Matrix random_matrix(std::mt19937_64& gen, std::size_t r, std::size_t c, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(r, c);
    for (auto& v : m.data) v = u(gen);
    return m;
}

// power iteration on Gᵀ G as an independent oracle for the top singular value
double power_iteration_norm(const Matrix& g) {
    std::size_t n = g.cols;
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double prev = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Vector w = mat_tvec(g, matvec(g, v));
        double nw = norm(w);
        if (nw == 0.0) return 0.0;
        for (auto& x : w) x /= nw;
        v = w;
        if (std::abs(nw - prev) <= 1e-14 * (1.0 + nw)) return std::sqrt(nw);
        prev = nw;
    }
    return std::sqrt(prev);
}

}  // namespace

TEST_CASE("vector helpers") {
    Vector a{1.0, 2.0, 3.0}, b{-1.0, 0.5, 2.0};
    CHECK(dot(a, b) == doctest::Approx(6.0));
    CHECK(norm(Vector{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(norm_inf(b) == doctest::Approx(2.0));
    CHECK(sub(a, b) == Vector{2.0, 1.5, 1.0});
    Vector y = a;
    axpy(2.0, b, y);
    CHECK(y == Vector{-1.0, 3.0, 7.0});
    CHECK(project_nonneg(Vector{-1.0, 0.0, 2.0}) == Vector{0.0, 0.0, 2.0});
    CHECK(all_finite(a));
    CHECK_FALSE(all_finite(Vector{1.0, std::nan("")}));
}

TEST_CASE("matvec and transpose-vec") {
    Matrix a(2, 3);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
    a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
    CHECK(matvec(a, {1.0, 1.0, 1.0}) == Vector{6.0, 15.0});
    CHECK(mat_tvec(a, {1.0, 1.0}) == Vector{5.0, 7.0, 9.0});
    Matrix gg = gram(a);
    CHECK(gg.rows == 2);
    CHECK(gg(0, 0) == doctest::Approx(14.0));
    CHECK(gg(0, 1) == doctest::Approx(32.0));
    CHECK(gg(1, 1) == doctest::Approx(77.0));
}

TEST_CASE("solve_linear solves and round-trips") {
    Matrix a(2, 2);
    a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 3;
    Vector x = solve_linear(a, {5.0, 10.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(3.0));

    auto gen = make_rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        Matrix m = random_matrix(gen, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) += 4.0;  // keep well conditioned
        Matrix mc = m;
        Vector b = random_matrix(gen, 1, n).data;
        Vector sol = solve_linear(m, b);
        Vector back = matvec(mc, sol);
        CHECK(norm(sub(back, b)) <= 1e-10 * (1.0 + norm(b)));
    }
}

TEST_CASE("solve_linear rejects singular systems") {
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 2; a(1, 1) = 4;
    CHECK_THROWS_AS(solve_linear(a, {1.0, 2.0}), AssumptionViolation);
}

TEST_CASE("sym_eigenvalues on known matrices") {
    Matrix d(3, 3);
    d(0, 0) = 3; d(1, 1) = -1; d(2, 2) = 2;
    Vector ev = sym_eigenvalues(d);
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(3.0));

    Matrix t(2, 2);
    t(0, 0) = 2; t(0, 1) = 1; t(1, 0) = 1; t(1, 1) = 2;
    ev = sym_eigenvalues(t);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
}

TEST_CASE("sym_eigenvalues matches characteristic values on random gram matrices") {
    auto gen = make_rng(12, 0);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        Matrix g = random_matrix(gen, n, n + 2);
        Matrix gg = gram(g);
        Vector ev = sym_eigenvalues(gg);
        REQUIRE(ev.size() == n);
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += gg(i, i);
        for (double e : ev) {
            CHECK(e >= -1e-9);
            sum += e;
        }
        CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(ev[i] <= ev[i + 1] + 1e-12);
    }
}

TEST_CASE("spectral_norm agrees with a power-iteration oracle") {
    auto gen = make_rng(13, 0);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = 1 + static_cast<std::size_t>(trial % 3);
        std::size_t c = r + static_cast<std::size_t>(trial % 4);
        Matrix g = random_matrix(gen, r, c);
        double oracle = power_iteration_norm(g);
        CHECK(spectral_norm(g) == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("min_eig_gram on full-rank and rank-deficient inputs") {
    Matrix g(1, 2);
    g(0, 0) = -0.6; g(0, 1) = -1.0;
    CHECK(min_eig_gram(g) == doctest::Approx(1.36));

    Matrix r(2, 2);
    r(0, 0) = 1; r(0, 1) = 2; r(1, 0) = 2; r(1, 1) = 4;
    CHECK_THROWS_AS(min_eig_gram(r), AssumptionViolation);

    // more rows than columns can never have full row rank
    Matrix tall(3, 2, 1.0);
    CHECK_THROWS_AS(min_eig_gram(tall), AssumptionViolation);
}
