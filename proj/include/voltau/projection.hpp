#pragma once

#include "voltau/expr.hpp"
#include "voltau/fracpoly.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace voltau {

/// Best approximation of a one-variable function in the fractional Legendre
/// space of a given order, in both representations.
struct Projection1D {
    std::vector<Real> flp_coeffs;  // a_0..a_n against P_{i,alpha}
    FracPoly monomial;             // same element as powers of t^alpha
};

/// Projected two-variable kernel: h[i][j] multiplies t^(i alpha) s^(j alpha).
/// `height` is the effective height: max i+j over entries above trunc_tol.
struct KernelCoeffs {
    FracGrid grid;
    std::vector<std::vector<Real>> h;
    int height = 0;
    Real trunc_tol;

    const Real& h00() const { return h[0][0]; }
};

/// One c * t^mu * s^nu term of a detected monomial sum. The coefficient is
/// kept as expression factors so it can be evaluated at any precision.
struct MonomialTerm {
    bool negate = false;
    std::vector<exprlang::NodePtr> num_factors;
    std::vector<exprlang::NodePtr> den_factors;
    Rational mu{0};  // exponent of t
    Rational nu{0};  // exponent of s

    Real coeff_value() const;
};

/// Closed-form projection of t^mu (mu >= 0) onto order n. When mu lands on
/// the grid at index k <= n the monomial representation is exactly the unit
/// vector at k.
Projection1D project_monomial_1d(const Rational& mu, int n, const FracGrid& grid);

/// Projection of an arbitrary bounded function via composite Gauss-Legendre
/// in the substituted variable u = t^alpha (8 panels, quad_order nodes per
/// panel). Requires quad_order >= n+1.
Projection1D project_fn_1d(const std::function<Real(const Real&)>& f, int n, const FracGrid& grid,
                           int quad_order);

/// Exact projection of a FracPoly (linearity over its monomials).
Projection1D project_fracpoly(const FracPoly& p, int n, const FracGrid& grid);

/// Default entry-truncation threshold for height detection: 10^(-digits/2).
Real default_trunc_tol();

/// Projects a kernel given as an expression in (t,s). Uses the exact
/// monomial-sum path when the expression is one, tensor quadrature otherwise.
KernelCoeffs project_2d(const exprlang::Expr& H, int n, const FracGrid& grid, int quad_order,
                        const Real& trunc_tol);
KernelCoeffs project_2d(const exprlang::Expr& H, int n, const FracGrid& grid);

/// Quadrature-only variant for black-box kernels.
KernelCoeffs project_2d_fn(const std::function<Real(const Real&, const Real&)>& H, int n,
                           const FracGrid& grid, int quad_order, const Real& trunc_tol);

/// max{i+j : |h[i][j]| > trunc_tol}, or 0 when every entry is below it.
int effective_height(const std::vector<std::vector<Real>>& h, const Real& trunc_tol);
int effective_height(const KernelCoeffs& k);

/// Recognizes a finite sum of c * t^mu * s^nu terms with exact rational
/// exponents. Returns nullopt for anything else (sin(t), decimal exponents,
/// variables inside function calls, ...).
std::optional<std::vector<MonomialTerm>> detect_monomial_sum(const exprlang::Expr& e);

}  // namespace voltau
