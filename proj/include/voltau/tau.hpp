#pragma once

#include "voltau/fracpoly.hpp"
#include "voltau/linsolve.hpp"
#include "voltau/problem.hpp"
#include "voltau/projection.hpp"

#include <optional>
#include <vector>

namespace voltau {

struct DegenerateHeightError : std::runtime_error {
    long long r;
    DegenerateHeightError(long long r_, std::string msg)
        : std::runtime_error(std::move(msg)), r(r_) {}
};

/// Coefficients of the cordial operator applied to grid monomials:
/// L(t^(r alpha)) = sum_{l=r}^{r+height} S(l,r) t^(l alpha), where
///   S(r,r)   = 1 - sum_{i+j=0} h_ij B(gamma, (r+j+sigma2-sigma1) alpha + 1)
///   S(r+k,r) =   - sum_{i+j=k} h_ij B(gamma, (r+j+sigma2-sigma1) alpha + 1).
/// Only entries with i+j <= height participate (effective truncation).
class OperatorImage {
  public:
    OperatorImage(const KernelCoeffs& kernel, const DerivedParams& params);

    int height() const { return kernel_.height; }
    const KernelCoeffs& kernel() const { return kernel_; }
    const DerivedParams& params() const { return params_; }

    /// S(r+k, r) for k = 0..height, as a vector indexed by k.
    std::vector<Real> band(long long r) const;

  private:
    Real beta_at(long long m) const;  // B(gamma, (m+sigma2-sigma1) alpha + 1), memoized

    KernelCoeffs kernel_;
    DerivedParams params_;
    mutable std::vector<std::optional<Real>> beta_cache_;
};

/// Associated FC-polynomials psi_r and coupling coefficients d_{r,j}
/// produced by the canonical recursion.
struct CanonicalTable {
    int height = 0;
    std::vector<FracPoly> psi;          // indices 0..N
    std::vector<std::vector<Real>> d;   // (N+1) x height
};

/// Runs the recursion up to index N inclusive. Throws DegenerateHeightError
/// when a leading divisor S(r+height, r) falls below 10^(-digits/2).
CanonicalTable generate_canonical(const KernelCoeffs& kernel, const DerivedParams& params,
                                  long long N);

/// The height x height Tau-system M tau = B:
///   M[l][r] = sum_{j=0}^{n+height-r} C_{n+height-r, j} d_{j,l}
///   B[l]    = -sum_{r=0}^{n} g_r d_{r,l}
/// Requires the table filled to index n+height and basis order >= n+height.
std::pair<Matrix, std::vector<Real>> assemble_tau_system(int n, const FracPoly& g_monomial,
                                                         const CanonicalTable& table,
                                                         const FLPBasis& basis);

struct SolveOptions {
    int quad_order = 120;          // oracle / manufactured-forcing rule size
    int fn_quad_order = 0;         // projection nodes per panel; 0 = max(40, 2n+10)
    int residual_grid = 24;        // grid for the perturbed-equation residual
    int error_grid = 2000;         // grid for the sup error against exact_y
    double solvability_margin = 1e-8;
    std::optional<long long> alpha_den_override;
};

struct TauSolution {
    int n = 0;
    FracPoly y;                 // the Tau-solution
    std::vector<Real> tau;      // tau_{n,0..height-1}
    FracPoly perturbation;      // H_n as a FracPoly
    FracPoly g_tilde;           // projected data, monomial form
    KernelCoeffs kernel;        // projected kernel
    DerivedParams params;

    struct Report {
        Real residual_sup;
        SpectrumReport solvability;
        int height = 0;
        std::optional<Real> sup_error;  // against exact_y when available
        long long wall_ms = 0;
    } report;
};

/// Full pipeline: derive parameters, project H and g, run the canonical
/// recursion, solve the Tau-system, assemble y_n, and verify the residual.
TauSolution solve(const ProblemSpec& spec, int n, const SolveOptions& options = {});

/// H_n(t) = sum_r tau_{n,r} P_{n+height-r, alpha}(t), straight from the
/// Legendre recurrence. Requires t in [0,1].
Real perturbation_eval(const TauSolution& solution, const Real& t);

/// Applies the truncated projected kernel to a FracPoly through the
/// quadrature oracle (substitution u = v^delta; the result is exact up to
/// the rule's analytic convergence and never consults the Beta function).
FracPoly apply_projected_kernel(const KernelCoeffs& kernel, const DerivedParams& params,
                                const FracPoly& y, int quad_order);

/// max over a uniform grid in (0,1] of |y_n - K y_n - g~ - H_n|, with the
/// operator applied by the quadrature oracle. Requires grid_size >= 10.
Real residual_sup(const TauSolution& solution, int grid_size, int quad_order);

/// Residual of the canonical property at index r: the reconstructed
/// phi_r = psi_r + sum_j d_{r,j} phi_j must satisfy L phi_r = t^(r alpha),
/// i.e. (psi_r - K psi_r)(t) + sum_j d_{r,j} t^(j alpha) - t^(r alpha) = 0.
/// Returns the sup over grid_size uniform points in (0,1].
Real canonical_residual_sup(const CanonicalTable& table, const KernelCoeffs& kernel,
                            const DerivedParams& params, long long r, int grid_size,
                            int quad_order);

}  // namespace voltau
