#include <doctest.h>

#include "voltau/projection.hpp"

#include <random>

using namespace voltau;

namespace {

void check_close(const Real& got, const Real& want, const Real& tol) {
    Real scale = abs(want) > 1 ? abs(want) : Real(1);
    CAPTURE(static_cast<double>(got));
    CAPTURE(static_cast<double>(want));
    CHECK(abs(got - want) <= tol * scale);
}

Real eval_flp_side(const Projection1D& proj, const Rational& theta, const Real& t) {
    Real acc = 0;
    for (std::size_t i = 0; i < proj.flp_coeffs.size(); ++i)
        acc += proj.flp_coeffs[i] * flp_eval(static_cast<int>(i), theta, t);
    return acc;
}

}  // namespace

TEST_CASE("project_monomial_1d pinned cases") {
    FracGrid g3(3);
    {
        auto p = project_monomial_1d(Rational(0), 5, g3);
        check_close(p.flp_coeffs[0], Real(1), pow10(-44));
        for (int i = 1; i <= 5; ++i) CHECK(abs(p.flp_coeffs[static_cast<std::size_t>(i)]) < pow10(-40));
        REQUIRE(p.monomial.coeffs.size() == 1);
        CHECK(p.monomial.coeffs[0] == 1);
    }
    {
        // t^alpha = (P_1 + 1)/2
        auto p = project_monomial_1d(Rational(1, 3), 4, g3);
        check_close(p.flp_coeffs[0], Real(1) / 2, pow10(-44));
        check_close(p.flp_coeffs[1], Real(1) / 2, pow10(-44));
        REQUIRE(p.monomial.coeffs.size() == 2);
        CHECK(p.monomial.coeffs[1] == 1);
    }
    CHECK_THROWS_AS(project_monomial_1d(Rational(-1, 2), 4, g3), std::domain_error);
}

TEST_CASE("project_monomial_1d reconstructs an off-grid power") {
    // mu = 13/4 on the alpha = 1/3 grid at n = 14
    FracGrid g3(3);
    auto p = project_monomial_1d(Rational(13, 4), 14, g3);
    Real sup = 0;
    for (int k = 1; k <= 100; ++k) {
        Real t = Real(k) / 100;
        if (t < Real("0.01")) continue;
        Real err = abs(p.monomial.eval(t) - pow(t, Real(13) / 4));
        if (err > sup) sup = err;
    }
    CHECK(sup < pow10(-6));
}

TEST_CASE("representation consistency between flp and monomial forms") {
    FracGrid g2(2);
    auto p = project_monomial_1d(Rational(9, 5), 10, g2);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        Real t(dist(rng));
        check_close(p.monomial.eval(t), eval_flp_side(p, Rational(1, 2), t), pow10(-25));
    }
}

TEST_CASE("project_fn_1d matches the closed form and handles constants") {
    FracGrid g3(3);
    {
        auto p = project_fn_1d([](const Real&) { return Real(1); }, 6, g3, 40);
        check_close(p.flp_coeffs[0], Real(1), pow10(-40));
        for (int i = 1; i <= 6; ++i) CHECK(abs(p.flp_coeffs[static_cast<std::size_t>(i)]) < pow10(-38));
    }
    CHECK_THROWS_AS(project_fn_1d([](const Real&) { return Real(1); }, 6, g3, 6),
                    std::invalid_argument);
}

TEST_CASE("closed form vs quadrature for fractional powers") {
    const int n = 12;
    const Rational mus[] = {Rational(1, 2), Rational(13, 4), Rational(9, 5)};
    for (long long den : {2, 3}) {
        FracGrid grid(den);
        for (const auto& mu : mus) {
            auto closed = project_monomial_1d(mu, n, grid);
            Real mur = mu.to_real();
            auto quad = project_fn_1d([&](const Real& t) { return pow(t, mur); }, n, grid, 44);
            for (int i = 0; i <= n; ++i)
                check_close(quad.flp_coeffs[static_cast<std::size_t>(i)],
                            closed.flp_coeffs[static_cast<std::size_t>(i)], pow10(-19));
        }
    }
}

TEST_CASE("project_fn_1d resolves sqrt(t)*sin(t) on the 1/3 grid") {
    FracGrid g3(3);
    auto p = project_fn_1d([](const Real& t) { return sqrt(t) * sin(t); }, 16, g3, 42);
    Real sup = 0;
    for (int k = 1; k <= 200; ++k) {
        Real t = Real(k) / 200;
        Real err = abs(p.monomial.eval(t) - sqrt(t) * sin(t));
        if (err > sup) sup = err;
    }
    CHECK(sup <= pow10(-8));
}

TEST_CASE("projection is idempotent on grid polynomials") {
    FracGrid g3(3);
    FracPoly p(g3, {Real(2), Real(0), Real("-0.75"), Real(1), Real(4)});
    auto proj = project_fracpoly(p, 8, g3);
    REQUIRE(proj.monomial.coeffs.size() >= p.coeffs.size());
    for (std::size_t k = 0; k < p.coeffs.size(); ++k)
        CHECK(abs(proj.monomial.coeffs[k] - p.coeffs[k]) <= pow10(-40));
    for (std::size_t k = p.coeffs.size(); k < proj.monomial.coeffs.size(); ++k)
        CHECK(abs(proj.monomial.coeffs[k]) <= pow10(-40));
}

TEST_CASE("detect_monomial_sum") {
    {
        auto terms = detect_monomial_sum(exprlang::parse("s^2", "ts"));
        REQUIRE(terms.has_value());
        REQUIRE(terms->size() == 1);
        CHECK((*terms)[0].mu == Rational(0));
        CHECK((*terms)[0].nu == Rational(2));
        CHECK((*terms)[0].coeff_value() == 1);
    }
    {
        auto terms = detect_monomial_sum(exprlang::parse("t^(3/2) - 0.859*t^(7/2)", "ts"));
        REQUIRE(terms.has_value());
        REQUIRE(terms->size() == 2);
        CHECK((*terms)[0].mu == Rational(3, 2));
        CHECK((*terms)[1].mu == Rational(7, 2));
        CHECK((*terms)[1].negate);
        check_close((*terms)[1].coeff_value(), Real("-0.859"), pow10(-44));
    }
    CHECK_FALSE(detect_monomial_sum(exprlang::parse("sin(t)", "ts")).has_value());
    CHECK_FALSE(detect_monomial_sum(exprlang::parse("t^0.5", "ts")).has_value());  // decimal exponent
    {
        // sqrt(t)*s and a constant term
        auto terms = detect_monomial_sum(exprlang::parse("sqrt(t)*s/2 + 3", "ts"));
        REQUIRE(terms.has_value());
        REQUIRE(terms->size() == 2);
        CHECK((*terms)[0].mu == Rational(1, 2));
        CHECK((*terms)[0].nu == Rational(1));
        check_close((*terms)[0].coeff_value(), Real("0.5"), pow10(-44));
    }
}

TEST_CASE("project_2d pinned kernels") {
    {
        auto k = project_2d(exprlang::parse("5", "ts"), 4, FracGrid(2));
        CHECK(k.height == 0);
        CHECK(k.h00() == 5);
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j)
                if (i || j) CHECK(k.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0);
    }
    {
        auto k = project_2d(exprlang::parse("s^2", "ts"), 6, FracGrid(2));
        CHECK(k.height == 4);
        CHECK(k.h[0][4] == 1);
    }
    {
        auto k = project_2d(exprlang::parse("s^(5/3)", "ts"), 6, FracGrid(3));
        CHECK(k.height == 5);
        CHECK(k.h[0][5] == 1);
    }
}

TEST_CASE("effective height thresholds noise") {
    std::vector<std::vector<Real>> h(5, std::vector<Real>(5, Real(0)));
    h[0][0] = 3;
    CHECK(effective_height(h, default_trunc_tol()) == 0);
    h[2][2] = pow10(-static_cast<int>(working_digits()));  // far below tolerance
    CHECK(effective_height(h, default_trunc_tol()) == 0);
    h[1][2] = Real("0.25");
    CHECK(effective_height(h, default_trunc_tol()) == 3);
}

TEST_CASE("2d separability through the quadrature path") {
    const int n = 6;
    FracGrid g2(2);
    auto k = project_2d_fn([](const Real& t, const Real& s) { return exp(t) * sin(s); }, n, g2, 40,
                           default_trunc_tol());
    auto pt = project_fn_1d([](const Real& t) { return exp(t); }, n, g2, 40);
    auto ps = project_fn_1d([](const Real& s) { return sin(s); }, n, g2, 40);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            Real want = (static_cast<std::size_t>(i) < pt.monomial.coeffs.size() &&
                         static_cast<std::size_t>(j) < ps.monomial.coeffs.size())
                            ? pt.monomial.coeffs[static_cast<std::size_t>(i)] *
                                  ps.monomial.coeffs[static_cast<std::size_t>(j)]
                            : Real(0);
            CHECK(abs(k.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - want) <=
                  pow10(-25));
        }
}
