#include "voltau/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace voltau {

long long gcd_ll(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long lcm_ll(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd_ll(a, b) * b;
}

Rational::Rational(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = gcd_ll(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::domain_error("rational division by zero");
    return Rational(num * o.den, den * o.num);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    long long lhs = num * o.den;
    long long rhs = o.num * den;
    return lhs <=> rhs;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto parse_ll = [](const std::string& part) -> long long {
        size_t pos = 0;
        long long v = std::stoll(part, &pos);
        if (pos != part.size()) throw std::invalid_argument("malformed integer '" + part + "'");
        return v;
    };

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rational(parse_ll(s.substr(0, slash)), parse_ll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (fp.empty() || fp.size() > 17) throw std::invalid_argument("decimal literal out of range");
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
        long long whole = ip.empty() ? 0 : parse_ll(ip);
        long long frac = parse_ll(fp);
        long long scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        long long n = whole * scale + frac;
        return Rational(neg ? -n : n, scale);
    }
    return Rational(parse_ll(s));
}

RationalExp::RationalExp(const Rational& v) : value(v) {
    if (!(v.num > 0)) throw std::invalid_argument("rational exponent must be positive, got " + v.str());
}

FracGrid::FracGrid(long long den) : alpha_den(den) {
    if (den < 1) throw std::invalid_argument("alpha denominator must be >= 1");
}

}  // namespace voltau
