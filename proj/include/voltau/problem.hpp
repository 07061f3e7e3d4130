#pragma once

#include "voltau/expr.hpp"
#include "voltau/projection.hpp"
#include "voltau/rational.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace voltau {

struct ConstraintError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One instance of the weakly singular third-kind equation
///   t^beta y(t) = t^beta g(t) + int_0^t (t-s)^(gamma-1) s^(beta-gamma) H(t,s) y(s) ds
/// posed through its cordial form y = g + K y. The stored g is the
/// right-hand side already divided by t^beta.
struct ProblemSpec {
    Rational gamma{1};  // 0 < gamma <= 1
    Rational beta{1};   // beta >= gamma, beta > 0
    exprlang::Expr H;   // variables (t,s)
    std::optional<exprlang::Expr> g;        // variable t
    std::optional<exprlang::Expr> exact_y;  // variable t; enables error reporting
    bool manufacture = false;               // build g as exact_y - K exact_y

    void validate() const;
};

/// Exact integer decomposition of (gamma, beta) onto the alpha grid:
/// gamma = sigma1 * alpha, beta = sigma2 * alpha with alpha = 1/delta.
struct DerivedParams {
    long long delta = 1;
    long long theta1 = 1;
    long long theta2 = 1;
    long long sigma1 = 1;
    long long sigma2 = 1;
    Rational alpha{1};

    FracGrid grid() const { return FracGrid(delta); }
    Rational gamma() const { return Rational(sigma1, delta); }
    Rational beta() const { return Rational(sigma2, delta); }
};

DerivedParams derive_params(const Rational& gamma, const Rational& beta);

/// Same, with the grid refined to a caller-chosen denominator. The override
/// must be a positive multiple of lcm(q1,q2).
DerivedParams derive_params(const Rational& gamma, const Rational& beta,
                            long long alpha_den_override);

/// Outcome of the Theorem-1 style solvability scan over the spectrum grid
/// lambda = r*alpha.
struct SpectrumReport {
    bool compact = false;  // H(0,0) below the truncation tolerance
    Real h00;
    int checked_r_max = 0;
    std::vector<int> violations;  // r with |1 - h00 B(gamma, 1-gamma+beta+r alpha)| < margin
    Real min_gap;                 // min over checked r of |1 - v(r)|
};

struct UnsolvableError : std::runtime_error {
    SpectrumReport report;
    UnsolvableError(std::string msg, SpectrumReport rep)
        : std::runtime_error(std::move(msg)), report(std::move(rep)) {}
};

/// Scans v(r) = h00 * B(gamma, 1-gamma+beta+r*alpha) for r = 0,1,2,...
/// B decays monotonically in r, so the scan stops at the first r with
/// |v(r)| < 1 - margin. Requires margin in (0,1).
SpectrumReport check_solvability(const Real& h00, const DerivedParams& params, const Real& margin);

using RealFn = std::function<Real(const Real&)>;

/// (K y)(t) = int_0^1 (1-u)^(gamma-1) u^(beta-gamma) H(t,tu) y(tu) du for
/// t > 0, by graded composite Gauss quadrature with m nodes per panel:
/// a Jacobi rule absorbs the (1-u)^(gamma-1) endpoint and dyadic
/// Gauss-Legendre panels resolve fractional powers of u near zero. Works for
/// black-box y and never consults the Beta function.
Real apply_K(const RealFn& y, const Real& t, const ProblemSpec& spec, const DerivedParams& params,
             int m = 120);

/// Forcing for a manufactured problem: g(t) = exact_y(t) - (K exact_y)(t),
/// memoized per t. When H is a monomial sum and exact_y factors as
/// t^lambda0 * (entire function), each kernel term is integrated with a
/// dedicated Jacobi rule whose weight absorbs all fractional powers;
/// otherwise apply_K supplies the value.
RealFn manufacture_g(const ProblemSpec& spec, const DerivedParams& params, int m = 120);

/// Decomposition exact_y = t^lambda0 * remainder used by the manufactured
/// fast path. Exposed for tests.
struct PowerFactor {
    Rational lambda0{0};
    bool negate = false;
    std::vector<exprlang::NodePtr> num_factors;  // entire in t
    std::vector<exprlang::NodePtr> den_factors;  // variable-free

    Real remainder_value(const Real& t) const;
};
std::optional<PowerFactor> detect_power_factor(const exprlang::Expr& e);

}  // namespace voltau
