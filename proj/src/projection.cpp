#include "voltau/projection.hpp"

#include "voltau/quadrature.hpp"

#include <stdexcept>

namespace voltau {

using exprlang::Node;
using exprlang::NodeKind;
using exprlang::NodePtr;

namespace {

constexpr int kPanels = 8;

// Composite Gauss-Legendre nodes/weights covering [0,1].
void composite_gl(int per_panel, std::vector<Real>& nodes, std::vector<Real>& weights) {
    const QuadratureRule& rule = gauss_legendre(per_panel);
    nodes.clear();
    weights.clear();
    nodes.reserve(static_cast<std::size_t>(kPanels) * per_panel);
    weights.reserve(nodes.capacity());
    for (int p = 0; p < kPanels; ++p) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            nodes.push_back((Real(p) + rule.nodes[i]) / kPanels);
            weights.push_back(rule.weights[i] / kPanels);
        }
    }
}

// Shifted Legendre values P_hat_i(u) for i = 0..n at each u, by the
// three-term recurrence in x = 2u-1.
std::vector<std::vector<Real>> shifted_legendre_table(int n, const std::vector<Real>& us) {
    std::vector<std::vector<Real>> P(static_cast<std::size_t>(n) + 1,
                                     std::vector<Real>(us.size()));
    for (std::size_t m = 0; m < us.size(); ++m) {
        Real x = 2 * us[m] - 1;
        P[0][m] = 1;
        if (n >= 1) P[1][m] = x;
        for (int k = 1; k < n; ++k)
            P[k + 1][m] = ((2 * k + 1) * x * P[k][m] - k * P[k - 1][m]) / (k + 1);
    }
    return P;
}

std::vector<std::vector<Real>> coeff_rows(int n) {
    std::vector<std::vector<Real>> C;
    C.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) C.push_back(flp_coefficients(i));
    return C;
}

FracPoly monomial_from_flp(const std::vector<Real>& a, const std::vector<std::vector<Real>>& C,
                           const FracGrid& grid) {
    const int n = static_cast<int>(a.size()) - 1;
    FracPoly out(grid);
    out.coeffs.assign(a.size(), Real(0));
    for (int i = 0; i <= n; ++i)
        for (int r = 0; r <= i; ++r) out.coeffs[r] += a[static_cast<std::size_t>(i)] * C[i][r];
    out.trim(pow10(-static_cast<int>(working_digits()) + 10));
    return out;
}

bool contains_variable(const NodePtr& node) {
    const Node& n = *node;
    switch (n.kind) {
        case NodeKind::Variable: return true;
        case NodeKind::Number:
        case NodeKind::Constant: return false;
        case NodeKind::Unary: return contains_variable(n.lhs);
        case NodeKind::Binary: return contains_variable(n.lhs) || contains_variable(n.rhs);
        case NodeKind::Call:
            for (const auto& a : n.args)
                if (contains_variable(a)) return true;
            return false;
    }
    return false;
}

// Splits a multiplicative term into variable powers and coefficient factors.
// Returns false when the term is not of the form c * t^mu * s^nu.
bool decompose_term(const NodePtr& node, MonomialTerm& term) {
    const Node& n = *node;
    if (!contains_variable(node)) {
        term.num_factors.push_back(node);
        return true;
    }
    switch (n.kind) {
        case NodeKind::Variable: {
            (n.var == 't' ? term.mu : term.nu) = (n.var == 't' ? term.mu : term.nu) + Rational(1);
            return true;
        }
        case NodeKind::Unary:
            term.negate = !term.negate;
            return decompose_term(n.lhs, term);
        case NodeKind::Binary:
            if (n.op == '*') return decompose_term(n.lhs, term) && decompose_term(n.rhs, term);
            if (n.op == '/') {
                if (contains_variable(n.rhs)) return false;
                term.den_factors.push_back(n.rhs);
                return decompose_term(n.lhs, term);
            }
            if (n.op == '^') {
                if (n.lhs->kind != NodeKind::Variable) return false;
                if (n.rhs->kind != NodeKind::Number || !n.rhs->rat) return false;
                const Rational& e = *n.rhs->rat;
                if (e < Rational(0)) return false;
                Rational& slot = (n.lhs->var == 't') ? term.mu : term.nu;
                slot = slot + e;
                return true;
            }
            return false;
        case NodeKind::Call:
            if (n.name == "sqrt" && n.args[0]->kind == NodeKind::Variable) {
                Rational& slot = (n.args[0]->var == 't') ? term.mu : term.nu;
                slot = slot + Rational(1, 2);
                return true;
            }
            return false;
        default:
            return false;
    }
}

bool collect_terms(const NodePtr& node, bool negate, std::vector<MonomialTerm>& out) {
    const Node& n = *node;
    if (n.kind == NodeKind::Binary && (n.op == '+' || n.op == '-')) {
        if (!collect_terms(n.lhs, negate, out)) return false;
        return collect_terms(n.rhs, negate != (n.op == '-'), out);
    }
    if (n.kind == NodeKind::Unary) return collect_terms(n.lhs, !negate, out);
    MonomialTerm term;
    term.negate = negate;
    if (!decompose_term(node, term)) return false;
    out.push_back(std::move(term));
    return true;
}

}  // namespace

Real MonomialTerm::coeff_value() const {
    Real v = negate ? -1 : 1;
    for (const auto& f : num_factors) v *= exprlang::eval_node(f, nullptr, nullptr);
    for (const auto& f : den_factors) {
        Real d = exprlang::eval_node(f, nullptr, nullptr);
        if (d == 0) throw exprlang::EvalError("monomial coefficient divides by zero");
        v /= d;
    }
    return v;
}

Real default_trunc_tol() { return pow10(-static_cast<int>(working_digits()) / 2); }

Projection1D project_monomial_1d(const Rational& mu, int n, const FracGrid& grid) {
    if (mu < Rational(0)) throw std::domain_error("project_monomial_1d: mu must be >= 0");
    if (n < 0) throw std::invalid_argument("project_monomial_1d: negative order");
    auto C = coeff_rows(n);
    Projection1D out;
    out.flp_coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));

    // a_i = (2i+1) sum_j C_{i,j} / (mu*delta + j + 1), exact rationals
    const long long p = mu.num, q = mu.den, delta = grid.alpha_den;
    for (int i = 0; i <= n; ++i) {
        Real acc = 0;
        for (int j = 0; j <= i; ++j)
            acc += C[i][j] * Real(q) / (Real(p) * Real(delta) + Real(q) * Real(j + 1));
        out.flp_coeffs[static_cast<std::size_t>(i)] = (2 * i + 1) * acc;
    }

    // on-grid monomial with index <= n: representation is exact
    Rational k = mu * Rational(delta);
    if (k.is_integer() && k.num <= n) {
        out.monomial = FracPoly::monomial(grid, static_cast<std::size_t>(k.num));
    } else {
        out.monomial = monomial_from_flp(out.flp_coeffs, C, grid);
    }
    return out;
}

Projection1D project_fn_1d(const std::function<Real(const Real&)>& f, int n, const FracGrid& grid,
                           int quad_order) {
    if (n < 0) throw std::invalid_argument("project_fn_1d: negative order");
    if (quad_order < n + 1)
        throw std::invalid_argument("project_fn_1d: quad_order must be at least n+1");

    std::vector<Real> us, ws;
    composite_gl(quad_order, us, ws);
    auto P = shifted_legendre_table(n, us);

    std::vector<Real> fu(us.size());
    for (std::size_t m = 0; m < us.size(); ++m)
        fu[m] = f(pow_int(us[m], grid.alpha_den));

    Projection1D out;
    out.flp_coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
    for (int i = 0; i <= n; ++i) {
        Real acc = 0;
        for (std::size_t m = 0; m < us.size(); ++m) acc += ws[m] * fu[m] * P[i][m];
        out.flp_coeffs[static_cast<std::size_t>(i)] = (2 * i + 1) * acc;
    }
    out.monomial = monomial_from_flp(out.flp_coeffs, coeff_rows(n), grid);
    return out;
}

Projection1D project_fracpoly(const FracPoly& p, int n, const FracGrid& grid) {
    if (!(p.grid == grid)) throw std::invalid_argument("project_fracpoly: grid mismatch");
    Projection1D out;
    out.flp_coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
    out.monomial = FracPoly(grid);
    out.monomial.coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
    const Rational alpha = grid.alpha();
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        if (p.coeffs[k] == 0) continue;
        Projection1D basis = project_monomial_1d(alpha * Rational(static_cast<long long>(k)), n, grid);
        for (std::size_t i = 0; i < out.flp_coeffs.size(); ++i)
            out.flp_coeffs[i] += p.coeffs[k] * basis.flp_coeffs[i];
        for (std::size_t i = 0; i < basis.monomial.coeffs.size(); ++i)
            out.monomial.coeffs[i] += p.coeffs[k] * basis.monomial.coeffs[i];
    }
    out.monomial.trim(pow10(-static_cast<int>(working_digits()) + 10));
    return out;
}

int effective_height(const std::vector<std::vector<Real>>& h, const Real& trunc_tol) {
    int height = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h[i].size(); ++j)
            if (abs(h[i][j]) > trunc_tol) height = std::max(height, static_cast<int>(i + j));
    return height;
}

int effective_height(const KernelCoeffs& k) { return effective_height(k.h, k.trunc_tol); }

std::optional<std::vector<MonomialTerm>> detect_monomial_sum(const exprlang::Expr& e) {
    if (e.empty()) return std::nullopt;
    NodePtr folded = exprlang::constant_fold_node(e.root());
    std::vector<MonomialTerm> terms;
    if (!collect_terms(folded, false, terms)) return std::nullopt;
    return terms;
}

KernelCoeffs project_2d(const exprlang::Expr& H, int n, const FracGrid& grid, int quad_order,
                        const Real& trunc_tol) {
    if (auto terms = detect_monomial_sum(H)) {
        KernelCoeffs out;
        out.grid = grid;
        out.trunc_tol = trunc_tol;
        out.h.assign(static_cast<std::size_t>(n) + 1,
                     std::vector<Real>(static_cast<std::size_t>(n) + 1, Real(0)));
        for (const auto& term : *terms) {
            Real c = term.coeff_value();
            if (c == 0) continue;
            FracPoly pt = project_monomial_1d(term.mu, n, grid).monomial;
            FracPoly ps = project_monomial_1d(term.nu, n, grid).monomial;
            for (std::size_t i = 0; i < pt.coeffs.size(); ++i) {
                if (pt.coeffs[i] == 0) continue;
                for (std::size_t j = 0; j < ps.coeffs.size(); ++j)
                    out.h[i][j] += c * pt.coeffs[i] * ps.coeffs[j];
            }
        }
        out.height = effective_height(out.h, trunc_tol);
        return out;
    }
    auto fn = [&H](const Real& t, const Real& s) { return exprlang::eval(H, t, s); };
    return project_2d_fn(fn, n, grid, quad_order, trunc_tol);
}

KernelCoeffs project_2d(const exprlang::Expr& H, int n, const FracGrid& grid) {
    return project_2d(H, n, grid, std::max(40, 2 * n + 10), default_trunc_tol());
}

KernelCoeffs project_2d_fn(const std::function<Real(const Real&, const Real&)>& H, int n,
                           const FracGrid& grid, int quad_order, const Real& trunc_tol) {
    if (n < 0) throw std::invalid_argument("project_2d_fn: negative order");
    if (quad_order < n + 1)
        throw std::invalid_argument("project_2d_fn: quad_order must be at least n+1");

    std::vector<Real> us, ws;
    composite_gl(quad_order, us, ws);
    auto P = shifted_legendre_table(n, us);
    const std::size_t M = us.size();

    std::vector<Real> tv(M);
    for (std::size_t m = 0; m < M; ++m) tv[m] = pow_int(us[m], grid.alpha_den);

    // a[i][j] = (2i+1)(2j+1) sum_{p,q} w_p w_q H(t_p, s_q) P_i(u_p) P_j(u_q)
    // computed as two nested matrix contractions
    std::vector<std::vector<Real>> Hw(M, std::vector<Real>(M));
    for (std::size_t p = 0; p < M; ++p)
        for (std::size_t q = 0; q < M; ++q) Hw[p][q] = ws[p] * ws[q] * H(tv[p], tv[q]);

    std::vector<std::vector<Real>> tmp(static_cast<std::size_t>(n) + 1, std::vector<Real>(M, Real(0)));
    for (int i = 0; i <= n; ++i)
        for (std::size_t q = 0; q < M; ++q) {
            Real acc = 0;
            for (std::size_t p = 0; p < M; ++p) acc += P[i][p] * Hw[p][q];
            tmp[i][q] = acc;
        }

    std::vector<std::vector<Real>> a(static_cast<std::size_t>(n) + 1,
                                     std::vector<Real>(static_cast<std::size_t>(n) + 1));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            Real acc = 0;
            for (std::size_t q = 0; q < M; ++q) acc += tmp[i][q] * P[j][q];
            a[i][j] = Real(2 * i + 1) * Real(2 * j + 1) * acc;
        }

    // h = C^T a C with the lower-triangular coefficient rows
    auto C = coeff_rows(n);
    KernelCoeffs out;
    out.grid = grid;
    out.trunc_tol = trunc_tol;
    out.h.assign(static_cast<std::size_t>(n) + 1,
                 std::vector<Real>(static_cast<std::size_t>(n) + 1, Real(0)));
    for (int r = 0; r <= n; ++r)
        for (int c = 0; c <= n; ++c) {
            Real acc = 0;
            for (int i = r; i <= n; ++i)
                for (int j = c; j <= n; ++j) acc += C[i][r] * a[i][j] * C[j][c];
            out.h[r][c] = acc;
        }
    out.height = effective_height(out.h, trunc_tol);
    return out;
}

}  // namespace voltau
