#pragma once

#include "voltau/rational.hpp"
#include "voltau/real.hpp"

#include <span>
#include <utility>
#include <vector>

namespace voltau {

/// Polynomial in powers of t^alpha on the grid alpha = 1/alpha_den:
/// p(t) = sum_k coeffs[k] * t^(k*alpha). The empty coefficient vector is the
/// canonical zero polynomial; otherwise the trailing coefficient is nonzero
/// (after trim()).
struct FracPoly {
    FracGrid grid;
    std::vector<Real> coeffs;

    FracPoly() = default;
    explicit FracPoly(FracGrid g) : grid(g) {}
    FracPoly(FracGrid g, std::vector<Real> c) : grid(g), coeffs(std::move(c)) {}

    bool is_zero() const { return coeffs.empty(); }
    /// Largest k with coeffs[k] != 0, or -1 for the zero polynomial.
    /// The fractional degree is degree_index() * alpha.
    long long degree_index() const { return static_cast<long long>(coeffs.size()) - 1; }

    /// Horner evaluation in v = t^alpha; returns coeffs[0] at t == 0.
    Real eval(const Real& t) const;

    /// Drops trailing coefficients of magnitude <= threshold.
    void trim(const Real& threshold);

    /// A single monomial t^(k*alpha).
    static FracPoly monomial(FracGrid g, std::size_t k, const Real& coeff = Real(1));
};

/// Linear combination of fractional polynomials sharing one grid. Trailing
/// zeros are trimmed with threshold 10^(-digits+10).
FracPoly fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>> terms);
FracPoly fracpoly_combine(const std::vector<std::pair<Real, FracPoly>>& terms);

/// Monomial coefficient row of the shifted fractional Legendre polynomial:
/// P_i(t) = sum_j row[j] * t^(j*theta), with
/// row[j] = (-1)^(i+j) (i+j)! / ((i-j)! (j!)^2), computed by the ratio
/// recurrence to avoid factorial overflow.
std::vector<Real> flp_coefficients(int i);

/// P_{i,theta}(t) via the three-term recurrence in x = 2 t^theta - 1.
/// Requires t in [0,1].
Real flp_eval(int i, const Rational& theta, const Real& t);

/// Shifted fractional Legendre basis up to a given order: coefficient rows
/// C[i][j] for 0 <= j <= i <= order.
struct FLPBasis {
    Rational theta;
    int order = 0;
    std::vector<std::vector<Real>> C;

    FLPBasis() = default;
    FLPBasis(const Rational& th, int n);

    /// P_i as a FracPoly on the grid with alpha = theta (theta must be 1/den).
    FracPoly flp_as_fracpoly(int i) const;
};

}  // namespace voltau
