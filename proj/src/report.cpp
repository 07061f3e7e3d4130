#include "voltau/report.hpp"

#include <json.hpp>

#include <algorithm>

namespace voltau {

using nlohmann::json;
using nlohmann::ordered_json;

int report_sig_digits() { return std::max(17, static_cast<int>(working_digits()) / 2); }

SweepRecord make_sweep_record(const TauSolution& sol) {
    SweepRecord rec;
    rec.n = sol.n;
    rec.sup_error = sol.report.sup_error;
    rec.residual = sol.report.residual_sup;
    rec.height = sol.report.height;
    Real norm = 0;
    for (const auto& t : sol.tau) norm = std::max(norm, abs(t));
    rec.tau_norm = norm;
    rec.wall_ms = sol.report.wall_ms;
    return rec;
}

std::string sweep_record_csv(const SweepRecord& rec) {
    const int sig = report_sig_digits();
    std::string out = std::to_string(rec.n);
    out += ',';
    if (rec.sup_error) out += to_sci_string(*rec.sup_error, sig);
    out += ',';
    out += to_sci_string(rec.residual, sig);
    out += ',';
    out += std::to_string(rec.height);
    out += ',';
    out += to_sci_string(rec.tau_norm, sig);
    out += ',';
    out += std::to_string(rec.wall_ms);
    return out;
}

std::string sweep_record_json(const SweepRecord& rec) {
    const int sig = report_sig_digits();
    ordered_json j;
    j["n"] = rec.n;
    if (rec.sup_error)
        j["sup_error"] = to_sci_string(*rec.sup_error, sig);
    else
        j["sup_error"] = nullptr;
    j["residual"] = to_sci_string(rec.residual, sig);
    j["height"] = rec.height;
    j["tau_norm"] = to_sci_string(rec.tau_norm, sig);
    j["wall_ms"] = rec.wall_ms;
    return j.dump();
}

namespace {

ordered_json spectrum_json(const SpectrumReport& rep, const DerivedParams& params) {
    const int sig = report_sig_digits();
    ordered_json j;
    j["compact"] = rep.compact;
    j["h00"] = to_sci_string(rep.h00, sig);
    j["spectrum"] = "h00 * B(" + params.gamma().str() + ", 1 - " + params.gamma().str() + " + " +
                    params.beta().str() + " + lambda), lambda = r*" + params.alpha.str();
    j["checked_r_max"] = rep.checked_r_max;
    j["min_gap"] = to_sci_string(rep.min_gap, sig);
    j["violations"] = rep.violations;
    return j;
}

}  // namespace

std::string spectrum_report_to_json(const SpectrumReport& rep, const DerivedParams& params) {
    return spectrum_json(rep, params).dump(2);
}

std::string solution_to_json(const TauSolution& sol, const std::string& source_label) {
    const unsigned digits = working_digits();
    const int full = static_cast<int>(digits);
    const int sig = report_sig_digits();

    ordered_json j;
    j["source"] = source_label;
    j["n"] = sol.n;
    j["precision"] = digits;
    j["alpha"] = sol.params.alpha.str();
    j["alpha_den"] = sol.params.delta;
    j["gamma"] = sol.params.gamma().str();
    j["beta"] = sol.params.beta().str();
    j["height"] = sol.report.height;

    json coeffs = json::array();
    for (const auto& c : sol.y.coeffs) coeffs.push_back(to_sci_string(c, full));
    j["y_coeffs"] = std::move(coeffs);

    json tau = json::array();
    for (const auto& t : sol.tau) tau.push_back(to_sci_string(t, full));
    j["tau"] = std::move(tau);

    j["residual_sup"] = to_sci_string(sol.report.residual_sup, sig);
    if (sol.report.sup_error) j["sup_error"] = to_sci_string(*sol.report.sup_error, sig);
    j["solvability"] = spectrum_json(sol.report.solvability, sol.params);
    j["wall_ms"] = sol.report.wall_ms;
    return j.dump(2);
}

StoredSolution solution_from_json(const std::string& text) {
    json j = json::parse(text);
    StoredSolution out;
    out.precision = j.at("precision").get<unsigned>();
    long long den = j.at("alpha_den").get<long long>();
    out.y = FracPoly(FracGrid(den));
    for (const auto& c : j.at("y_coeffs")) out.y.coeffs.push_back(real_from_string(c.get<std::string>()));
    return out;
}

}  // namespace voltau
