#include "voltau/quadrature.hpp"

#include "voltau/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace voltau {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// algorithm, double precision. Used only to seed Newton polishing.
std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 80) throw std::runtime_error("tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double bb = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * bb;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - bb;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

// Monic three-term recurrence coefficients for the Jacobi weight
// (1-x)^a (1+x)^b on [-1,1]:  pi_{k+1} = (x - alpha_k) pi_k - beta_k pi_{k-1}.
struct JacobiRecurrence {
    Real a, b;

    Real alpha(int k) const {
        if (k == 0) return (b - a) / (a + b + 2);
        Real t = 2 * k + a + b;
        return (b * b - a * a) / (t * (t + 2));
    }
    Real beta_k(int k) const {  // valid for k >= 1
        if (k == 1) return 4 * (a + 1) * (b + 1) / ((a + b + 2) * (a + b + 2) * (a + b + 3));
        Real t = 2 * k + a + b;
        return 4 * Real(k) * (k + a) * (k + b) * (k + a + b) / (t * t * (t + 1) * (t - 1));
    }
};

// Value and derivative of the orthonormal polynomial p_m at x, plus the
// Christoffel sum of squares p_0^2 + ... + p_{m-1}^2.
struct OrthEval {
    Real pm, dpm, christoffel;
};

OrthEval eval_orthonormal(const JacobiRecurrence& rec, const std::vector<Real>& sqb, int m,
                          const Real& mu0, const Real& x) {
    Real p_prev = 0, p_cur = 1 / sqrt(mu0);
    Real d_prev = 0, d_cur = 0;
    Real sum = p_cur * p_cur;
    for (int k = 0; k < m; ++k) {
        Real ak = rec.alpha(k);
        Real p_next = ((x - ak) * p_cur - (k > 0 ? sqb[k] * p_prev : Real(0))) / sqb[k + 1];
        Real d_next = ((x - ak) * d_cur + p_cur - (k > 0 ? sqb[k] * d_prev : Real(0))) / sqb[k + 1];
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
        if (k < m - 1) sum += p_cur * p_cur;
    }
    return OrthEval{p_cur, d_cur, sum};
}

QuadratureRule build_rule(int m, const Real& a, const Real& b, QuadratureRule::Kind kind) {
    if (m < 1) throw std::invalid_argument("quadrature order must be >= 1");
    if (!(a > -1) || !(b > -1)) throw std::domain_error("jacobi exponents must exceed -1");

    JacobiRecurrence rec{a, b};
    const Real mass01 = jacobi_mass01(a, b);
    const Real mu0 = pow(Real(2), a + b + 1) * mass01;  // mass on [-1,1]

    std::vector<Real> sqb(m + 1);
    sqb[0] = 0;
    for (int k = 1; k <= m; ++k) sqb[k] = sqrt(rec.beta_k(k));

    std::vector<Real> xs(m);
    if (m == 1) {
        xs[0] = rec.alpha(0);
    } else {
        std::vector<double> diag(m), off(m - 1);
        for (int k = 0; k < m; ++k) diag[k] = static_cast<double>(rec.alpha(k));
        for (int k = 0; k + 1 < m; ++k) off[k] = static_cast<double>(sqb[k + 1]);
        std::vector<double> seeds = tridiag_eigenvalues(std::move(diag), std::move(off));
        for (int i = 0; i < m; ++i) xs[i] = Real(seeds[i]);
    }

    const Real tol = pow10(-static_cast<int>(working_digits()) - 5);
    QuadratureRule rule;
    rule.kind = kind;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    Real wsum = 0;
    for (int i = 0; i < m; ++i) {
        Real x = xs[i];
        OrthEval ev{};
        for (int it = 0; it < 24; ++it) {
            ev = eval_orthonormal(rec, sqb, m, mu0, x);
            Real dx = ev.pm / ev.dpm;
            x -= dx;
            if (abs(dx) < tol) break;
        }
        ev = eval_orthonormal(rec, sqb, m, mu0, x);
        Real w = 1 / (ev.christoffel + ev.pm * ev.pm);
        // map [-1,1] -> [0,1]; weight scaling keeps the Jacobi mass on [0,1]
        rule.nodes[i] = (x + 1) / 2;
        rule.weights[i] = w * mass01 / mu0;
        wsum += rule.weights[i];
    }
    rule.total_weight = wsum;

    for (int i = 0; i + 1 < m; ++i) {
        if (!(rule.nodes[i] < rule.nodes[i + 1]))
            throw std::runtime_error("quadrature nodes failed to separate");
    }
    if (!(rule.nodes.front() > 0) || !(rule.nodes.back() < 1))
        throw std::runtime_error("quadrature nodes left (0,1)");
    return rule;
}

using CacheKey = std::tuple<std::string, int, unsigned>;
std::map<CacheKey, std::shared_ptr<const QuadratureRule>> g_cache;
std::mutex g_cache_mutex;

const QuadratureRule& cached(const CacheKey& key, const std::function<QuadratureRule()>& make) {
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return *it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(make());
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto [it, inserted] = g_cache.emplace(key, std::move(rule));
    return *it->second;
}

}  // namespace

Real jacobi_mass01(const Real& a, const Real& b) {
    if (b == 0) return 1 / (a + 1);
    if (a == 0) return 1 / (b + 1);
    return beta(a + 1, b + 1);
}

const QuadratureRule& gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("gauss_legendre requires m >= 1");
    CacheKey key{"leg", m, working_digits()};
    return cached(key, [m] { return build_rule(m, Real(0), Real(0), QuadratureRule::Kind::legendre); });
}

const QuadratureRule& gauss_jacobi(int m, const Real& a, const Real& b) {
    if (m < 1) throw std::invalid_argument("gauss_jacobi requires m >= 1");
    if (!(a > -1) || !(b > -1)) throw std::domain_error("gauss_jacobi requires a,b > -1");
    unsigned digits = working_digits();
    std::string kind = "jac:" + to_sci_string(a, static_cast<int>(digits)) + ":" +
                       to_sci_string(b, static_cast<int>(digits));
    CacheKey key{std::move(kind), m, digits};
    return cached(key, [m, &a, &b] { return build_rule(m, a, b, QuadratureRule::Kind::jacobi); });
}

}  // namespace voltau
