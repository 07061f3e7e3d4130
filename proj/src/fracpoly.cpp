#include "voltau/fracpoly.hpp"

#include <stdexcept>

namespace voltau {

Real FracPoly::eval(const Real& t) const {
    if (coeffs.empty()) return Real(0);
    if (t == 0) return coeffs.front();
    Real v = pow(t, Real(1) / Real(grid.alpha_den));
    Real acc = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * v + coeffs[k];
    return acc;
}

void FracPoly::trim(const Real& threshold) {
    while (!coeffs.empty() && abs(coeffs.back()) <= threshold) coeffs.pop_back();
}

FracPoly FracPoly::monomial(FracGrid g, std::size_t k, const Real& coeff) {
    FracPoly p(g);
    p.coeffs.assign(k + 1, Real(0));
    p.coeffs[k] = coeff;
    return p;
}

FracPoly fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>> terms) {
    if (terms.empty()) return FracPoly{};
    FracGrid grid = terms.front().second->grid;
    std::size_t len = 0;
    for (const auto& [c, p] : terms) {
        if (!(p->grid == grid)) throw std::invalid_argument("fracpoly_combine: mismatched grids");
        len = std::max(len, p->coeffs.size());
    }
    FracPoly out(grid);
    out.coeffs.assign(len, Real(0));
    for (const auto& [c, p] : terms)
        for (std::size_t k = 0; k < p->coeffs.size(); ++k) out.coeffs[k] += c * p->coeffs[k];
    out.trim(pow10(-static_cast<int>(working_digits()) + 10));
    return out;
}

FracPoly fracpoly_combine(const std::vector<std::pair<Real, FracPoly>>& terms) {
    std::vector<std::pair<Real, const FracPoly*>> view;
    view.reserve(terms.size());
    for (const auto& [c, p] : terms) view.emplace_back(c, &p);
    return fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>>(view));
}

std::vector<Real> flp_coefficients(int i) {
    if (i < 0) throw std::invalid_argument("flp_coefficients: negative index");
    std::vector<Real> row(static_cast<std::size_t>(i) + 1);
    row[0] = (i % 2 == 0) ? 1 : -1;
    for (int j = 0; j < i; ++j) {
        // C_{i,j+1} = -C_{i,j} * (i+j+1)(i-j) / (j+1)^2
        row[j + 1] = -row[j] * Real((i + j + 1)) * Real(i - j) / (Real(j + 1) * Real(j + 1));
    }
    return row;
}

Real flp_eval(int i, const Rational& theta, const Real& t) {
    if (i < 0) throw std::invalid_argument("flp_eval: negative index");
    if (t < 0 || t > 1) throw std::domain_error("flp_eval: t outside [0,1]");
    if (!(theta.positive()) || theta > Rational(1))
        throw std::domain_error("flp_eval: theta outside (0,1]");
    Real x;
    if (t == 0)
        x = -1;
    else
        x = 2 * pow(t, theta.to_real()) - 1;
    if (i == 0) return Real(1);
    Real pkm1 = 1, pk = x;
    for (int k = 1; k < i; ++k) {
        Real pk1 = ((2 * k + 1) * x * pk - k * pkm1) / (k + 1);
        pkm1 = pk;
        pk = pk1;
    }
    return pk;
}

FLPBasis::FLPBasis(const Rational& th, int n) : theta(th), order(n) {
    if (n < 0) throw std::invalid_argument("FLPBasis: negative order");
    if (!(th.positive()) || th > Rational(1))
        throw std::domain_error("FLPBasis: theta outside (0,1]");
    C.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) C.push_back(flp_coefficients(i));
}

FracPoly FLPBasis::flp_as_fracpoly(int i) const {
    if (i < 0 || i > order) throw std::out_of_range("FLPBasis: index outside table");
    if (theta.num != 1) throw std::logic_error("FLPBasis: theta is not of the form 1/den");
    return FracPoly(FracGrid(theta.den), C[static_cast<std::size_t>(i)]);
}

}  // namespace voltau
