#include <doctest.h>

#include "voltau/linsolve.hpp"
#include "voltau/quadrature.hpp"
#include "voltau/special.hpp"

#include <random>

using voltau::Real;

namespace {

Real pi_real() { return acos(Real(-1)); }

void check_close(const Real& got, const Real& want, const Real& tol) {
    Real scale = abs(want) > 1 ? abs(want) : Real(1);
    CAPTURE(static_cast<double>(got));
    CAPTURE(static_cast<double>(want));
    CHECK(abs(got - want) <= tol * scale);
}

}  // namespace

TEST_CASE("ln_gamma at classical points") {
    const Real tol = voltau::pow10(-46);
    check_close(voltau::ln_gamma(Real(1)), Real(0), tol);
    check_close(voltau::ln_gamma(Real(5)), log(Real(24)), tol);
    check_close(voltau::ln_gamma(Real(1) / 2), log(pi_real()) / 2, tol);
    CHECK_THROWS_AS(voltau::ln_gamma(Real(0)), std::domain_error);
    CHECK_THROWS_AS(voltau::ln_gamma(Real(-3)), std::domain_error);
}

TEST_CASE("beta values and identities") {
    const Real tol = voltau::pow10(-44);
    check_close(voltau::beta(Real(1), Real(1)), Real(1), tol);
    check_close(voltau::beta(Real(1) / 2, Real(1) / 2), pi_real(), tol);
    // B(1/2, 9/2) = 35*pi/128 by the duplication recurrence from B(1/2,1/2)
    check_close(voltau::beta(Real(1) / 2, Real(9) / 2), 35 * pi_real() / 128, tol);
    CHECK_THROWS_AS(voltau::beta(Real(0), Real(1)), std::domain_error);
}

TEST_CASE("beta symmetry and recurrence properties") {
    const Real tol = voltau::pow10(-44);
    const Real pairs[][2] = {{Real("0.5"), Real("4.5")},
                             {Real(1) / 3, Real(4) / 3},
                             {Real("2.25"), Real("0.125")},
                             {Real(7), Real("0.03125")}};
    for (const auto& p : pairs) {
        check_close(voltau::beta(p[0], p[1]), voltau::beta(p[1], p[0]), tol);
        // B(a, b+1) = B(a,b) * b / (a+b)
        check_close(voltau::beta(p[0], p[1] + 1), voltau::beta(p[0], p[1]) * p[1] / (p[0] + p[1]),
                    tol);
    }
}

TEST_CASE("gauss_legendre basics") {
    const auto& r1 = voltau::gauss_legendre(1);
    REQUIRE(r1.nodes.size() == 1);
    check_close(r1.nodes[0], Real(1) / 2, voltau::pow10(-45));
    check_close(r1.weights[0], Real(1), voltau::pow10(-45));

    const auto& r2 = voltau::gauss_legendre(2);
    Real offset = 1 / (2 * sqrt(Real(3)));
    check_close(r2.nodes[0], Real(1) / 2 - offset, voltau::pow10(-45));
    check_close(r2.nodes[1], Real(1) / 2 + offset, voltau::pow10(-45));
    // exactness at degree 3: integral of u^3 is 1/4
    Real cube = r2.apply([](const Real& u) { return u * u * u; });
    check_close(cube, Real(1) / 4, voltau::pow10(-45));

    CHECK_THROWS_AS(voltau::gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("gauss_legendre integrates monomials exactly up to degree 2m-1") {
    const Real tol = voltau::pow10(-42);
    for (int m : {1, 2, 3, 5, 8, 13, 21, 32}) {
        const auto& rule = voltau::gauss_legendre(m);
        CHECK(rule.nodes.size() == static_cast<std::size_t>(m));
        for (int k = 0; k <= 2 * m - 1; ++k) {
            Real got = rule.apply([&](const Real& u) { return voltau::pow_int(u, k); });
            check_close(got, Real(1) / (k + 1), tol);
        }
    }
}

TEST_CASE("gauss_jacobi reduces to legendre at zero exponents") {
    const auto& leg = voltau::gauss_legendre(7);
    const auto& jac = voltau::gauss_jacobi(7, Real(0), Real(0));
    for (std::size_t i = 0; i < leg.nodes.size(); ++i) {
        check_close(jac.nodes[i], leg.nodes[i], voltau::pow10(-44));
        check_close(jac.weights[i], leg.weights[i], voltau::pow10(-44));
    }
}

TEST_CASE("gauss_jacobi knows the singular weight (1-u)^(-1/2)") {
    // integral of (1-u)^(-1/2) * u du = B(1/2, 2) = 4/3
    for (int m : {2, 6, 20}) {
        const auto& rule = voltau::gauss_jacobi(m, Real(-1) / 2, Real(0));
        Real got = rule.apply([](const Real& u) { return u; });
        check_close(got, Real(4) / 3, voltau::pow10(-42));
    }
    CHECK_THROWS_AS(voltau::gauss_jacobi(4, Real(-1), Real(0)), std::domain_error);
    CHECK_THROWS_AS(voltau::gauss_jacobi(4, Real(0), Real("-1.5")), std::domain_error);
}

TEST_CASE("gauss_jacobi total mass and monomial moments match Beta") {
    const Real tol = voltau::pow10(-42);
    struct Pair {
        Real a, b;
    };
    const Pair cases[] = {{Real(-1) / 2, Real(0)}, {Real(-1) / 3, Real(1) / 3}, {Real(0), Real(3) / 2}};
    for (const auto& c : cases) {
        for (int m : {4, 9}) {
            const auto& rule = voltau::gauss_jacobi(m, c.a, c.b);
            check_close(rule.total_weight, voltau::beta(c.a + 1, c.b + 1), tol);
            for (int k = 0; k <= 2 * m - 1; ++k) {
                Real got = rule.apply([&](const Real& u) { return voltau::pow_int(u, k); });
                check_close(got, voltau::beta(c.a + 1, c.b + k + 1), tol);
            }
        }
    }
}

TEST_CASE("solve_dense on pinned systems") {
    using voltau::Matrix;
    {
        Matrix A = {{Real(1), Real(0)}, {Real(0), Real(1)}};
        auto x = voltau::solve_dense(A, {Real(3), Real(7)});
        check_close(x[0], Real(3), voltau::pow10(-44));
        check_close(x[1], Real(7), voltau::pow10(-44));
    }
    {
        Matrix A = {{Real(2), Real(0)}, {Real(0), Real(4)}};
        auto x = voltau::solve_dense(A, {Real(2), Real(2)});
        check_close(x[0], Real(1), voltau::pow10(-44));
        check_close(x[1], Real(1) / 2, voltau::pow10(-44));
    }
    {
        Matrix A = {{Real(1), Real(1)}, {Real(1), Real(-1)}};
        auto x = voltau::solve_dense(A, {Real(2), Real(0)});
        check_close(x[0], Real(1), voltau::pow10(-44));
        check_close(x[1], Real(1), voltau::pow10(-44));
    }
    {
        Matrix A = {{Real(0), Real(0)}, {Real(0), Real(0)}};
        CHECK_THROWS_AS(voltau::solve_dense(A, {Real(1), Real(1)}), voltau::SingularSystemError);
    }
}

TEST_CASE("solve_dense round trip on random well-conditioned systems") {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int dim = 8;
    for (int trial = 0; trial < 6; ++trial) {
        voltau::Matrix A(dim, std::vector<Real>(dim));
        std::vector<Real> x_true(dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) A[i][j] = Real(dist(rng)) + (i == j ? Real(4) : Real(0));
            x_true[i] = Real(dist(rng));
        }
        std::vector<Real> rhs(dim, Real(0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) rhs[i] += A[i][j] * x_true[j];

        auto x = voltau::solve_dense(A, rhs);
        Real rhs_norm = 0, res_norm = 0;
        for (int i = 0; i < dim; ++i) {
            Real acc = rhs[i];
            for (int j = 0; j < dim; ++j) acc -= A[i][j] * x[j];
            res_norm = std::max(res_norm, abs(acc));
            rhs_norm = std::max(rhs_norm, abs(rhs[i]));
            check_close(x[i], x_true[i], voltau::pow10(-42));
        }
        CHECK(res_norm <= voltau::pow10(-44) * rhs_norm);
    }
}
