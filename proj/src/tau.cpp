#include "voltau/tau.hpp"

#include "voltau/quadrature.hpp"
#include "voltau/special.hpp"

#include <chrono>
#include <stdexcept>

namespace voltau {

OperatorImage::OperatorImage(const KernelCoeffs& kernel, const DerivedParams& params)
    : kernel_(kernel), params_(params) {}

Real OperatorImage::beta_at(long long m) const {
    if (m < 0) throw std::logic_error("operator image: negative beta index");
    if (static_cast<std::size_t>(m) >= beta_cache_.size())
        beta_cache_.resize(static_cast<std::size_t>(m) + 1);
    auto& slot = beta_cache_[static_cast<std::size_t>(m)];
    if (!slot) {
        Real second = Rational(m + params_.sigma2 - params_.sigma1, params_.delta).to_real() + 1;
        slot = beta(params_.gamma().to_real(), second);
    }
    return *slot;
}

std::vector<Real> OperatorImage::band(long long r) const {
    if (r < 0) throw std::invalid_argument("operator image: negative index");
    const int vt = kernel_.height;
    const int n = static_cast<int>(kernel_.h.size()) - 1;
    std::vector<Real> S(static_cast<std::size_t>(vt) + 1, Real(0));
    S[0] = 1;
    for (int k = 0; k <= vt; ++k) {
        for (int j = std::max(0, k - n); j <= std::min(k, n); ++j) {
            int i = k - j;
            const Real& hij = kernel_.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (hij == 0) continue;
            S[static_cast<std::size_t>(k)] -= hij * beta_at(r + j);
        }
    }
    return S;
}

CanonicalTable generate_canonical(const KernelCoeffs& kernel, const DerivedParams& params,
                                  long long N) {
    if (N < 0) throw std::invalid_argument("generate_canonical: negative index");
    OperatorImage image(kernel, params);
    const int vt = image.height();
    const Real lead_tol = pow10(-static_cast<int>(working_digits()) / 2);
    const FracGrid grid = params.grid();

    CanonicalTable table;
    table.height = vt;
    table.psi.assign(static_cast<std::size_t>(N) + 1, FracPoly(grid));
    table.d.assign(static_cast<std::size_t>(N) + 1, std::vector<Real>(vt, Real(0)));

    if (vt == 0) {
        for (long long r = 0; r <= N; ++r) {
            Real s = image.band(r)[0];
            if (abs(s) <= lead_tol)
                throw DegenerateHeightError(r, "vanishing leading divisor S(r,r) at r=" +
                                                   std::to_string(r));
            table.psi[static_cast<std::size_t>(r)] =
                FracPoly::monomial(grid, static_cast<std::size_t>(r), 1 / s);
        }
        return table;
    }

    for (long long r = 0; r < vt && r <= N; ++r)
        table.d[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)] = 1;

    for (long long r = 0; r + vt <= N; ++r) {
        std::vector<Real> S = image.band(r);
        const Real& lead = S[static_cast<std::size_t>(vt)];
        if (abs(lead) <= lead_tol)
            throw DegenerateHeightError(
                r, "vanishing leading divisor S(r+height,r) at r=" + std::to_string(r) +
                       "; the effective height is overestimated");

        std::vector<std::pair<Real, const FracPoly*>> terms;
        FracPoly tr = FracPoly::monomial(grid, static_cast<std::size_t>(r));
        terms.emplace_back(Real(1) / lead, &tr);
        for (int k = 0; k < vt; ++k)
            terms.emplace_back(-S[static_cast<std::size_t>(k)] / lead,
                               &table.psi[static_cast<std::size_t>(r + k)]);
        table.psi[static_cast<std::size_t>(r + vt)] =
            fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>>(terms));

        for (int j = 0; j < vt; ++j) {
            Real acc = 0;
            for (int k = 0; k < vt; ++k)
                acc += table.d[static_cast<std::size_t>(r + k)][static_cast<std::size_t>(j)] *
                       S[static_cast<std::size_t>(k)];
            table.d[static_cast<std::size_t>(r + vt)][static_cast<std::size_t>(j)] = -acc / lead;
        }
    }
    return table;
}

std::pair<Matrix, std::vector<Real>> assemble_tau_system(int n, const FracPoly& g_monomial,
                                                         const CanonicalTable& table,
                                                         const FLPBasis& basis) {
    const int vt = table.height;
    if (vt == 0) return {Matrix{}, std::vector<Real>{}};
    const long long need = static_cast<long long>(n) + vt;
    if (static_cast<long long>(table.d.size()) <= need)
        throw std::invalid_argument("assemble_tau_system: canonical table too short");
    if (basis.order < need) throw std::invalid_argument("assemble_tau_system: basis order too low");

    Matrix M(static_cast<std::size_t>(vt), std::vector<Real>(static_cast<std::size_t>(vt), Real(0)));
    std::vector<Real> B(static_cast<std::size_t>(vt), Real(0));
    for (int l = 0; l < vt; ++l) {
        for (int r = 0; r < vt; ++r) {
            const auto& row = basis.C[static_cast<std::size_t>(n + vt - r)];
            Real acc = 0;
            for (std::size_t j = 0; j < row.size(); ++j)
                acc += row[j] * table.d[j][static_cast<std::size_t>(l)];
            M[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)] = acc;
        }
        Real acc = 0;
        const std::size_t gmax = std::min<std::size_t>(g_monomial.coeffs.size(),
                                                       static_cast<std::size_t>(n) + 1);
        for (std::size_t r = 0; r < gmax; ++r)
            acc += g_monomial.coeffs[r] * table.d[r][static_cast<std::size_t>(l)];
        B[static_cast<std::size_t>(l)] = -acc;
    }
    return {std::move(M), std::move(B)};
}

FracPoly apply_projected_kernel(const KernelCoeffs& kernel, const DerivedParams& params,
                                const FracPoly& y, int quad_order) {
    const FracGrid grid = params.grid();
    if (!(y.grid == grid)) throw std::invalid_argument("apply_projected_kernel: grid mismatch");
    const long long delta = params.delta;
    const int n = static_cast<int>(kernel.h.size()) - 1;
    const int vt = kernel.height;

    FracPoly out(grid);
    if (y.is_zero()) return out;
    const long long kmax = y.degree_index();
    const long long mmax = std::min<long long>(n, vt) + kmax;

    // I_m = int_0^1 (1-u)^(gamma-1) u^(beta-gamma+m*alpha) du via u = v^delta:
    //     = delta * int_0^1 (1-v)^(gamma-1) q(v)^(gamma-1) v^(sigma2-sigma1+m+delta-1) dv
    // with q(v) = 1 + v + ... + v^(delta-1); the integrand beyond the Jacobi
    // weight is polynomial times an analytic factor.
    const Real g = params.gamma().to_real();
    const QuadratureRule& rule = gauss_jacobi(quad_order, g - 1, Real(0));
    const std::size_t M = rule.nodes.size();
    std::vector<Real> base(M), vpow(M);
    for (std::size_t i = 0; i < M; ++i) {
        const Real& v = rule.nodes[i];
        Real q = 1;
        Real vk = v;
        for (long long k = 1; k < delta; ++k) {
            q += vk;
            vk *= v;
        }
        Real factor = (g == 1) ? Real(1) : pow(q, g - 1);
        base[i] = rule.weights[i] * Real(delta) * factor *
                  pow_int(v, params.sigma2 - params.sigma1 + delta - 1);
        vpow[i] = 1;
    }
    std::vector<Real> I(static_cast<std::size_t>(mmax) + 1);
    for (long long m = 0; m <= mmax; ++m) {
        Real acc = 0;
        for (std::size_t i = 0; i < M; ++i) {
            acc += base[i] * vpow[i];
            vpow[i] *= rule.nodes[i];
        }
        I[static_cast<std::size_t>(m)] = acc;
    }

    out.coeffs.assign(static_cast<std::size_t>(vt + kmax) + 1, Real(0));
    for (int i = 0; i <= std::min(n, vt); ++i) {
        for (int j = 0; i + j <= vt && j <= n; ++j) {
            const Real& hij = kernel.h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (hij == 0) continue;
            for (long long k = 0; k <= kmax; ++k) {
                if (y.coeffs[static_cast<std::size_t>(k)] == 0) continue;
                out.coeffs[static_cast<std::size_t>(i + j + k)] +=
                    hij * y.coeffs[static_cast<std::size_t>(k)] * I[static_cast<std::size_t>(j + k)];
            }
        }
    }
    out.trim(Real(0));
    return out;
}

namespace {

Real grid_sup(const FracPoly& p, int grid_size) {
    Real sup = 0;
    for (int k = 1; k <= grid_size; ++k) {
        Real t = Real(k) / grid_size;
        Real v = abs(p.eval(t));
        if (v > sup) sup = v;
    }
    return sup;
}

FracPoly projection_to_fracpoly(const Projection1D& proj) { return proj.monomial; }

Projection1D project_data(const ProblemSpec& spec, const DerivedParams& params, int n,
                          int fn_quad_order, int quad_order) {
    const FracGrid grid = params.grid();
    if (spec.manufacture) {
        RealFn g = manufacture_g(spec, params, quad_order);
        return project_fn_1d(g, n, grid, fn_quad_order);
    }
    const exprlang::Expr& gexpr = *spec.g;
    if (auto terms = detect_monomial_sum(gexpr)) {
        Projection1D out;
        out.flp_coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
        out.monomial = FracPoly(grid);
        out.monomial.coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
        for (const auto& term : *terms) {
            Real c = term.coeff_value();
            if (c == 0) continue;
            Projection1D part = project_monomial_1d(term.mu, n, grid);
            for (std::size_t i = 0; i < out.flp_coeffs.size(); ++i)
                out.flp_coeffs[i] += c * part.flp_coeffs[i];
            for (std::size_t i = 0; i < part.monomial.coeffs.size(); ++i)
                out.monomial.coeffs[i] += c * part.monomial.coeffs[i];
        }
        out.monomial.trim(pow10(-static_cast<int>(working_digits()) + 10));
        return out;
    }
    auto fn = [&gexpr](const Real& t) { return exprlang::eval(gexpr, t); };
    return project_fn_1d(fn, n, grid, fn_quad_order);
}

}  // namespace

TauSolution solve(const ProblemSpec& spec, int n, const SolveOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    if (n < 1) throw std::invalid_argument("solve: order n must be >= 1");
    spec.validate();

    TauSolution sol;
    sol.n = n;
    sol.params = options.alpha_den_override
                     ? derive_params(spec.gamma, spec.beta, *options.alpha_den_override)
                     : derive_params(spec.gamma, spec.beta);
    const FracGrid grid = sol.params.grid();
    const int fnq = options.fn_quad_order > 0 ? options.fn_quad_order : std::max(40, 2 * n + 10);

    sol.kernel = project_2d(spec.H, n, grid, fnq, default_trunc_tol());
    const int vt = sol.kernel.height;
    sol.report.height = vt;

    sol.report.solvability = check_solvability(sol.kernel.h00(), sol.params,
                                               Real(options.solvability_margin));
    if (!sol.report.solvability.violations.empty()) {
        throw UnsolvableError("uniqueness condition violated at r=" +
                                  std::to_string(sol.report.solvability.violations.front()),
                              sol.report.solvability);
    }

    Projection1D gproj = project_data(spec, sol.params, n, fnq, options.quad_order);
    sol.g_tilde = projection_to_fracpoly(gproj);

    FLPBasis basis(sol.params.alpha, n + vt);
    CanonicalTable table = generate_canonical(sol.kernel, sol.params, n + vt);

    if (vt > 0) {
        auto [M, B] = assemble_tau_system(n, sol.g_tilde, table, basis);
        sol.tau = solve_dense(std::move(M), std::move(B));
    }

    std::vector<std::pair<Real, const FracPoly*>> terms;
    const std::size_t gmax = std::min<std::size_t>(sol.g_tilde.coeffs.size(),
                                                   static_cast<std::size_t>(n) + 1);
    for (std::size_t r = 0; r < gmax; ++r)
        if (sol.g_tilde.coeffs[r] != 0) terms.emplace_back(sol.g_tilde.coeffs[r], &table.psi[r]);

    std::vector<FracPoly> tau_parts(sol.tau.size());
    for (std::size_t r = 0; r < sol.tau.size(); ++r) {
        const auto& row = basis.C[static_cast<std::size_t>(n + vt) - r];
        std::vector<std::pair<Real, const FracPoly*>> inner;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0) inner.emplace_back(row[j], &table.psi[j]);
        tau_parts[r] = fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>>(inner));
        terms.emplace_back(sol.tau[r], &tau_parts[r]);
    }
    sol.y = fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>>(terms));

    std::vector<std::pair<Real, FracPoly>> pterms;
    for (std::size_t r = 0; r < sol.tau.size(); ++r)
        pterms.emplace_back(sol.tau[r],
                            basis.flp_as_fracpoly(static_cast<int>(static_cast<std::size_t>(n + vt) - r)));
    sol.perturbation = fracpoly_combine(pterms);

    sol.report.residual_sup = residual_sup(sol, options.residual_grid, options.quad_order);

    if (spec.exact_y) {
        const exprlang::Expr& ye = *spec.exact_y;
        Real sup = 0;
        for (int k = 1; k <= options.error_grid; ++k) {
            Real t = Real(k) / options.error_grid;
            Real err = abs(sol.y.eval(t) - exprlang::eval(ye, t));
            if (err > sup) sup = err;
        }
        sol.report.sup_error = sup;
    }

    sol.report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    return sol;
}

Real perturbation_eval(const TauSolution& solution, const Real& t) {
    if (t < 0 || t > 1) throw std::domain_error("perturbation_eval: t outside [0,1]");
    const int vt = solution.report.height;
    Real acc = 0;
    for (std::size_t r = 0; r < solution.tau.size(); ++r)
        acc += solution.tau[r] *
               flp_eval(solution.n + vt - static_cast<int>(r), solution.params.alpha, t);
    return acc;
}

Real residual_sup(const TauSolution& solution, int grid_size, int quad_order) {
    if (grid_size < 10) throw std::invalid_argument("residual_sup: grid_size must be >= 10");
    FracPoly ky = apply_projected_kernel(solution.kernel, solution.params, solution.y, quad_order);
    std::vector<std::pair<Real, const FracPoly*>> terms;
    terms.emplace_back(Real(1), &solution.y);
    terms.emplace_back(Real(-1), &ky);
    terms.emplace_back(Real(-1), &solution.g_tilde);
    terms.emplace_back(Real(-1), &solution.perturbation);
    FracPoly residual = fracpoly_combine(std::span<const std::pair<Real, const FracPoly*>>(terms));
    return grid_sup(residual, grid_size);
}

Real canonical_residual_sup(const CanonicalTable& table, const KernelCoeffs& kernel,
                            const DerivedParams& params, long long r, int grid_size,
                            int quad_order) {
    if (r < 0 || static_cast<std::size_t>(r) >= table.psi.size())
        throw std::invalid_argument("canonical_residual_sup: index outside table");
    const FracGrid grid = params.grid();
    const FracPoly& psi = table.psi[static_cast<std::size_t>(r)];
    FracPoly kpsi = apply_projected_kernel(kernel, params, psi, quad_order);

    std::vector<std::pair<Real, FracPoly>> terms;
    terms.emplace_back(Real(1), psi);
    terms.emplace_back(Real(-1), kpsi);
    for (int j = 0; j < table.height; ++j) {
        const Real& drj = table.d[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        if (drj != 0)
            terms.emplace_back(drj, FracPoly::monomial(grid, static_cast<std::size_t>(j)));
    }
    terms.emplace_back(Real(-1), FracPoly::monomial(grid, static_cast<std::size_t>(r)));
    FracPoly res = fracpoly_combine(terms);
    return grid_sup(res, grid_size);
}

}  // namespace voltau
