#include "voltau/problem.hpp"

#include "voltau/quadrature.hpp"
#include "voltau/special.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace voltau {

using exprlang::Node;
using exprlang::NodeKind;
using exprlang::NodePtr;

void ProblemSpec::validate() const {
    if (!gamma.positive() || gamma > Rational(1))
        throw ConstraintError("gamma must lie in (0,1], got " + gamma.str());
    if (!beta.positive()) throw ConstraintError("beta must be positive, got " + beta.str());
    if (beta < gamma)
        throw ConstraintError("beta must be >= gamma, got beta=" + beta.str() +
                              ", gamma=" + gamma.str());
    if (H.empty()) throw ConstraintError("kernel H is required");
    if (manufacture) {
        if (!exact_y) throw ConstraintError("manufacture=true requires exact_y");
        if (g) throw ConstraintError("manufacture=true conflicts with an explicit g");
    } else if (!g) {
        throw ConstraintError("either g or exact_y with manufacture=true is required");
    }
}

DerivedParams derive_params(const Rational& gamma, const Rational& beta) {
    if (!gamma.positive() || gamma > Rational(1))
        throw ConstraintError("gamma must lie in (0,1], got " + gamma.str());
    if (!beta.positive() || beta < gamma)
        throw ConstraintError("beta must satisfy beta >= gamma > 0, got beta=" + beta.str());
    DerivedParams P;
    P.delta = lcm_ll(gamma.den, beta.den);
    P.theta1 = P.delta / gamma.den;
    P.theta2 = P.delta / beta.den;
    P.sigma1 = gamma.num * P.theta1;
    P.sigma2 = beta.num * P.theta2;
    P.alpha = Rational(1, P.delta);
    return P;
}

DerivedParams derive_params(const Rational& gamma, const Rational& beta,
                            long long alpha_den_override) {
    DerivedParams base = derive_params(gamma, beta);
    if (alpha_den_override <= 0 || alpha_den_override % base.delta != 0)
        throw ConstraintError("alpha denominator override must be a positive multiple of " +
                              std::to_string(base.delta));
    DerivedParams P;
    P.delta = alpha_den_override;
    P.theta1 = P.delta / gamma.den;
    P.theta2 = P.delta / beta.den;
    P.sigma1 = gamma.num * P.theta1;
    P.sigma2 = beta.num * P.theta2;
    P.alpha = Rational(1, P.delta);
    return P;
}

SpectrumReport check_solvability(const Real& h00, const DerivedParams& params, const Real& margin) {
    if (!(margin > 0) || !(margin < 1))
        throw std::invalid_argument("solvability margin must lie in (0,1)");
    SpectrumReport rep;
    rep.h00 = h00;
    rep.min_gap = 1;
    if (abs(h00) <= default_trunc_tol()) {
        rep.compact = true;
        return rep;
    }
    const Real g = params.gamma().to_real();
    const Real base = Real(1) - g + params.beta().to_real();
    const Real alpha = params.alpha.to_real();
    bool first = true;
    for (long long r = 0;; ++r) {
        Real v = h00 * beta(g, base + r * alpha);
        Real gap = abs(1 - v);
        if (first || gap < rep.min_gap) rep.min_gap = gap;
        first = false;
        if (gap < margin) rep.violations.push_back(static_cast<int>(r));
        rep.checked_r_max = static_cast<int>(r);
        if (abs(v) < 1 - margin) break;
        if (r > 5'000'000)
            throw std::runtime_error("solvability scan failed to terminate");  // unreachable
    }
    return rep;
}

namespace {

// Edge panel [1/2,1] with the (1-u)^(gamma-1) endpoint absorbed into a
// Jacobi weight, plus dyadic Gauss-Legendre panels toward u = 0. The tail
// below the last panel contributes at most
// sup|F| * (2^-K)^(beta-gamma+1) / (beta-gamma+1).
Real graded_cordial_integral(const std::function<Real(const Real&)>& F, const Real& gamma,
                             const Real& beta_minus_gamma, int m) {
    const unsigned digits = working_digits();
    const double target = 0.72 * digits + 8;
    const double bmg1 = static_cast<double>(beta_minus_gamma) + 1.0;
    int K = static_cast<int>(std::ceil(target * std::log(10.0) / (bmg1 * std::log(2.0)))) + 2;
    if (K < 8) K = 8;
    if (K > 4000) K = 4000;

    Real total = 0;

    const QuadratureRule& edge = gauss_jacobi(m, Real(0), gamma - 1);
    Real edge_acc = 0;
    for (std::size_t i = 0; i < edge.nodes.size(); ++i) {
        Real u = 1 - edge.nodes[i] / 2;
        Real val = F(u);
        if (beta_minus_gamma != 0) val *= pow(u, beta_minus_gamma);
        edge_acc += edge.weights[i] * val;
    }
    total += pow(Real(2), -gamma) * edge_acc;

    const QuadratureRule& gl = gauss_legendre(m);
    Real hi = Real(1) / 2;
    for (int k = 1; k <= K; ++k) {
        Real lo = hi / 2;
        Real len = hi - lo;
        Real acc = 0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            Real u = lo + len * gl.nodes[i];
            Real w = pow(1 - u, gamma - 1);
            if (beta_minus_gamma != 0) w *= pow(u, beta_minus_gamma);
            acc += gl.weights[i] * w * F(u);
        }
        total += len * acc;
        hi = lo;
    }
    return total;
}

bool contains_var(const NodePtr& node) {
    const Node& n = *node;
    switch (n.kind) {
        case NodeKind::Variable: return true;
        case NodeKind::Number:
        case NodeKind::Constant: return false;
        case NodeKind::Unary: return contains_var(n.lhs);
        case NodeKind::Binary: return contains_var(n.lhs) || contains_var(n.rhs);
        case NodeKind::Call:
            for (const auto& a : n.args)
                if (contains_var(a)) return true;
            return false;
    }
    return false;
}

// Entire in t: built from +,-,*, non-negative integer powers and sin/cos/exp
// over entire arguments. Division only by variable-free subtrees.
bool is_entire(const NodePtr& node) {
    const Node& n = *node;
    if (!contains_var(node)) return true;
    switch (n.kind) {
        case NodeKind::Variable: return true;
        case NodeKind::Unary: return is_entire(n.lhs);
        case NodeKind::Binary:
            if (n.op == '+' || n.op == '-' || n.op == '*') return is_entire(n.lhs) && is_entire(n.rhs);
            if (n.op == '/') return !contains_var(n.rhs) && is_entire(n.lhs);
            if (n.op == '^')
                return is_entire(n.lhs) && n.rhs->kind == NodeKind::Number && n.rhs->rat &&
                       n.rhs->rat->is_integer() && n.rhs->rat->num >= 0;
            return false;
        case NodeKind::Call:
            return (n.name == "sin" || n.name == "cos" || n.name == "exp") && is_entire(n.args[0]);
        default:
            return false;
    }
}

bool split_power_factor(const NodePtr& node, PowerFactor& pf) {
    const Node& n = *node;
    if (!contains_var(node)) {
        pf.num_factors.push_back(node);
        return true;
    }
    switch (n.kind) {
        case NodeKind::Variable:
            pf.lambda0 = pf.lambda0 + Rational(1);
            return true;
        case NodeKind::Unary:
            pf.negate = !pf.negate;
            return split_power_factor(n.lhs, pf);
        case NodeKind::Binary:
            if (n.op == '*') return split_power_factor(n.lhs, pf) && split_power_factor(n.rhs, pf);
            if (n.op == '/') {
                if (contains_var(n.rhs)) return false;
                pf.den_factors.push_back(n.rhs);
                return split_power_factor(n.lhs, pf);
            }
            if (n.op == '^' && n.lhs->kind == NodeKind::Variable && n.rhs->kind == NodeKind::Number &&
                n.rhs->rat && !(*n.rhs->rat < Rational(0))) {
                pf.lambda0 = pf.lambda0 + *n.rhs->rat;
                return true;
            }
            if (is_entire(node)) {
                pf.num_factors.push_back(node);
                return true;
            }
            return false;
        case NodeKind::Call:
            if (n.name == "sqrt" && n.args[0]->kind == NodeKind::Variable) {
                pf.lambda0 = pf.lambda0 + Rational(1, 2);
                return true;
            }
            if (is_entire(node)) {
                pf.num_factors.push_back(node);
                return true;
            }
            return false;
        default:
            return false;
    }
}

}  // namespace

Real PowerFactor::remainder_value(const Real& t) const {
    Real v = negate ? -1 : 1;
    for (const auto& f : num_factors) v *= exprlang::eval_node(f, &t, nullptr);
    for (const auto& f : den_factors) {
        Real d = exprlang::eval_node(f, nullptr, nullptr);
        if (d == 0) throw exprlang::EvalError("power-factor remainder divides by zero");
        v /= d;
    }
    return v;
}

std::optional<PowerFactor> detect_power_factor(const exprlang::Expr& e) {
    if (e.empty()) return std::nullopt;
    NodePtr folded = exprlang::constant_fold_node(e.root());
    PowerFactor pf;
    if (!split_power_factor(folded, pf)) return std::nullopt;
    return pf;
}

Real apply_K(const RealFn& y, const Real& t, const ProblemSpec& spec, const DerivedParams& params,
             int m) {
    if (!(t > 0)) throw std::domain_error("apply_K requires t > 0");
    if (m < 1) throw std::invalid_argument("apply_K requires m >= 1");
    const Real g = params.gamma().to_real();
    const Real bmg = Rational(params.sigma2 - params.sigma1, params.delta).to_real();
    auto F = [&](const Real& u) { return exprlang::eval(spec.H, t, t * u) * y(t * u); };
    return graded_cordial_integral(F, g, bmg, m);
}

RealFn manufacture_g(const ProblemSpec& spec, const DerivedParams& params, int m) {
    spec.validate();
    if (!spec.exact_y) throw ConstraintError("manufacture_g requires exact_y");
    const exprlang::Expr y_expr = *spec.exact_y;

    // fast path: H a monomial sum, exact_y = t^lambda0 * entire remainder
    auto kernel_terms = detect_monomial_sum(spec.H);
    auto pf = detect_power_factor(y_expr);

    std::function<Real(const Real&)> ky;
    if (kernel_terms && pf) {
        const Real g = params.gamma().to_real();
        const Rational bmg(params.sigma2 - params.sigma1, params.delta);
        struct TermRule {
            Real coeff;
            Real t_exponent;
            const QuadratureRule* rule;
        };
        auto rules = std::make_shared<std::vector<TermRule>>();
        for (const auto& term : *kernel_terms) {
            Real b_exp = (bmg + term.nu + pf->lambda0).to_real();
            const QuadratureRule& rule = gauss_jacobi(m, g - 1, b_exp);
            rules->push_back(TermRule{term.coeff_value(),
                                      (term.mu + term.nu + pf->lambda0).to_real(), &rule});
        }
        PowerFactor rem = *pf;
        ky = [rules, rem](const Real& t) {
            Real acc = 0;
            for (const auto& tr : *rules) {
                Real inner = 0;
                for (std::size_t i = 0; i < tr.rule->nodes.size(); ++i)
                    inner += tr.rule->weights[i] * rem.remainder_value(t * tr.rule->nodes[i]);
                acc += tr.coeff * pow(t, tr.t_exponent) * inner;
            }
            return acc;
        };
    } else {
        ProblemSpec captured = spec;
        DerivedParams P = params;
        ky = [captured, P, m, y_expr](const Real& t) {
            auto yfn = [&y_expr](const Real& s) { return exprlang::eval(y_expr, s); };
            return apply_K(yfn, t, captured, P, m);
        };
    }

    struct Memo {
        std::mutex mutex;
        std::map<Real, Real> values;
    };
    auto memo = std::make_shared<Memo>();
    return [memo, ky, y_expr](const Real& t) -> Real {
        {
            std::lock_guard<std::mutex> lock(memo->mutex);
            auto it = memo->values.find(t);
            if (it != memo->values.end()) return it->second;
        }
        Real v = exprlang::eval(y_expr, t) - ky(t);
        std::lock_guard<std::mutex> lock(memo->mutex);
        memo->values.emplace(t, v);
        return v;
    };
}

}  // namespace voltau
