#pragma once

#include "voltau/tau.hpp"

#include <optional>
#include <string>
#include <vector>

namespace voltau {

/// One row of a convergence sweep.
struct SweepRecord {
    int n = 0;
    std::optional<Real> sup_error;  // only when exact_y is known
    Real residual;
    int height = 0;
    Real tau_norm;
    long long wall_ms = 0;
};

SweepRecord make_sweep_record(const TauSolution& sol);

/// Serialization width for reals in reports: max(17, digits/2).
int report_sig_digits();

constexpr const char* kSweepCsvHeader = "n,sup_error,residual,height,tau_norm,wall_ms";
std::string sweep_record_csv(const SweepRecord& rec);
std::string sweep_record_json(const SweepRecord& rec);

/// Solution document (JSON). Stores everything cmd_eval needs to re-evaluate
/// y_n, plus the solve diagnostics.
std::string solution_to_json(const TauSolution& sol, const std::string& source_label);

std::string spectrum_report_to_json(const SpectrumReport& rep, const DerivedParams& params);

/// Subset of the solution document needed to evaluate the stored polynomial.
struct StoredSolution {
    FracPoly y;
    unsigned precision = 0;
};
StoredSolution solution_from_json(const std::string& text);

}  // namespace voltau
