#pragma once

#include "voltau/real.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace voltau {

/// Exact rational p/q, always kept reduced with q > 0.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    explicit Rational(long long n) : num(n), den(1) {}

    bool is_integer() const { return den == 1; }
    bool is_zero() const { return num == 0; }
    bool positive() const { return num > 0; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;  // throws on o == 0
    Rational operator-() const { return Rational(-num, den); }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    std::strong_ordering operator<=>(const Rational& o) const;

    Real to_real() const { return Real(num) / Real(den); }
    std::string str() const;  // "p/q", or just "p" when q == 1
};

long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);

/// Parses "p", "p/q", or a finite decimal such as "0.75" into an exact rational.
/// Throws std::invalid_argument on malformed input or overflow.
Rational parse_rational(std::string_view text);

/// Strictly positive rational exponent, the form the equation parameters
/// gamma and beta take.
struct RationalExp {
    Rational value;
    explicit RationalExp(const Rational& v);
    long long p() const { return value.num; }
    long long q() const { return value.den; }
};

/// The fractional exponent grid: powers of t^alpha with alpha = 1/alpha_den.
struct FracGrid {
    long long alpha_den = 1;

    FracGrid() = default;
    explicit FracGrid(long long den);
    Rational alpha() const { return Rational(1, alpha_den); }
    bool operator==(const FracGrid& o) const { return alpha_den == o.alpha_den; }
};

}  // namespace voltau
