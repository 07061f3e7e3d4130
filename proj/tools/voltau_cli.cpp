#include "voltau/problem_file.hpp"
#include "voltau/registry.hpp"
#include "voltau/report.hpp"
#include "voltau/tau.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitUnsolvable = 4;
constexpr int kExitNumerical = 5;

struct ProblemSource {
    std::string path;     // --problem
    std::string example;  // --example
};

struct OutputTarget {
    std::string path;  // --out, empty = stdout

    void write(const std::string& doc) const {
        if (path.empty()) {
            std::cout << doc << "\n";
            return;
        }
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
        out << doc << "\n";
    }
};

struct LoadedProblem {
    voltau::ProblemSpec spec;
    std::string label;
    std::optional<long long> alpha_den_override;
    std::optional<unsigned> precision;
};

LoadedProblem load_problem(const ProblemSource& src) {
    if (src.example.empty() == src.path.empty())
        throw CLI::ValidationError("exactly one of --problem or --example is required");
    LoadedProblem lp;
    if (!src.example.empty()) {
        const voltau::BuiltinExample* ex = voltau::find_example(src.example);
        if (!ex) throw CLI::ValidationError("unknown example '" + src.example + "'");
        lp.spec = voltau::make_problem(*ex);
        lp.label = ex->name;
    } else {
        voltau::ProblemFile pf = voltau::load_problem_file(src.path);
        lp.spec = pf.spec;
        lp.label = src.path;
        lp.alpha_den_override = pf.alpha_den_override;
        lp.precision = pf.precision;
    }
    return lp;
}

// precedence: explicit flag > problem-file setting > default
void configure_precision(unsigned flag_value, bool flag_given, const LoadedProblem& lp) {
    unsigned digits = flag_given ? flag_value : lp.precision.value_or(50);
    voltau::set_working_precision({digits});
}

std::optional<long long> resolve_alpha_den(const std::string& flag, const LoadedProblem& lp) {
    if (flag == "auto") return lp.alpha_den_override;
    try {
        return std::stoll(flag);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--alpha-den expects an integer or 'auto'");
    }
}

int run_with_diagnostics(const std::function<int()>& body) {
    try {
        return body();
    } catch (const voltau::exprlang::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const voltau::ProblemFileError& e) {
        std::cerr << "problem file error: " << e.what() << "\n";
        return kExitParse;
    } catch (const voltau::ConstraintError& e) {
        std::cerr << "invalid problem: " << e.what() << "\n";
        return kExitParse;
    } catch (const voltau::UnsolvableError& e) {
        std::cerr << "unsolvable problem: " << e.what() << "\n";
        return kExitUnsolvable;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

std::vector<voltau::Real> parse_points(const std::string& list, int grid) {
    std::vector<voltau::Real> pts;
    if (!list.empty()) {
        std::istringstream in(list);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item.empty()) continue;
            pts.push_back(voltau::real_from_string(item));
        }
    }
    for (int k = 1; k <= grid; ++k) pts.push_back(voltau::Real(k) / grid);
    if (pts.empty()) throw CLI::ValidationError("eval needs --points or --grid");
    return pts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voltau: fractional recursive Tau solver for weakly singular third-kind "
                 "Volterra integral equations"};
    app.require_subcommand(1);

    ProblemSource src;
    unsigned precision = 50;
    std::string alpha_den = "auto";
    int quad_order = 120;
    int grid = 2000;
    std::string format;
    OutputTarget out;

    auto add_problem_flags = [&](CLI::App* cmd) {
        cmd->add_option("--problem", src.path, "problem file path");
        cmd->add_option("--example", src.example, "builtin example name (ex1..ex5)");
        cmd->add_option("--precision", precision, "working precision in decimal digits");
        cmd->add_option("--alpha-den", alpha_den, "fractional grid denominator or 'auto'");
        cmd->add_option("--quad-order", quad_order, "quadrature order for oracle integrals");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem at a fixed order");
    int n = 0;
    add_problem_flags(solve_cmd);
    solve_cmd->add_option("--n", n, "Tau order")->required();
    solve_cmd->add_option("--grid", grid, "error-grid size for the sup error");
    solve_cmd->add_option("--out", out.path, "output path (default stdout)");
    solve_cmd->add_option("--format", format, "output format (json)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve across a range of orders");
    int n_min = 0, n_max = 0, step = 2;
    add_problem_flags(sweep_cmd);
    sweep_cmd->add_option("--n-min", n_min, "first order")->required();
    sweep_cmd->add_option("--n-max", n_max, "last order")->required();
    sweep_cmd->add_option("--step", step, "order increment");
    sweep_cmd->add_option("--grid", grid, "error-grid size for the sup error");
    sweep_cmd->add_option("--out", out.path, "output path (default stdout)");
    sweep_cmd->add_option("--format", format, "output format (csv or json)");

    CLI::App* check_cmd = app.add_subcommand("check", "solvability / spectrum report");
    int check_n = 8;
    add_problem_flags(check_cmd);
    check_cmd->add_option("--n", check_n, "projection order for the kernel");
    check_cmd->add_option("--out", out.path, "output path (default stdout)");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a stored solution document");
    std::string solution_path, points_list;
    int eval_grid = 0;
    eval_cmd->add_option("--solution", solution_path, "solution JSON from 'solve'")->required();
    eval_cmd->add_option("--points", points_list, "comma-separated evaluation points");
    eval_cmd->add_option("--grid", eval_grid, "evaluate on k/grid, k=1..grid");
    eval_cmd->add_option("--out", out.path, "output path (default stdout)");
    eval_cmd->add_option("--format", format, "output format (csv or json)");

    CLI::App* examples_cmd = app.add_subcommand("examples", "builtin example registry");
    CLI::App* examples_list = examples_cmd->add_subcommand("list", "list builtin examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (examples_list->parsed() || (examples_cmd->parsed() && examples_cmd->get_subcommands().empty())) {
        for (const auto& ex : voltau::builtin_examples()) {
            std::cout << ex.name << "  gamma=" << ex.gamma << "  beta=" << ex.beta
                      << "  exact_y=" << (ex.exact_y.empty() ? "?" : ex.exact_y) << "  # "
                      << ex.description << "\n";
        }
        return kExitOk;
    }

    if (solve_cmd->parsed()) {
        return run_with_diagnostics([&]() -> int {
            if (!format.empty() && format != "json")
                throw CLI::ValidationError("solve supports --format json only");
            LoadedProblem lp = load_problem(src);
            configure_precision(precision, solve_cmd->count("--precision") > 0, lp);
            voltau::SolveOptions opt;
            opt.quad_order = quad_order;
            opt.error_grid = grid;
            opt.alpha_den_override = resolve_alpha_den(alpha_den, lp);
            voltau::TauSolution sol = voltau::solve(lp.spec, n, opt);
            out.write(voltau::solution_to_json(sol, lp.label));
            return kExitOk;
        });
    }

    if (sweep_cmd->parsed()) {
        return run_with_diagnostics([&]() -> int {
            if (format.empty()) format = "csv";
            if (format != "csv" && format != "json")
                throw CLI::ValidationError("sweep supports --format csv or json");
            if (n_min > n_max) throw CLI::ValidationError("--n-min must not exceed --n-max");
            if (step < 1) throw CLI::ValidationError("--step must be >= 1");
            LoadedProblem lp = load_problem(src);
            configure_precision(precision, sweep_cmd->count("--precision") > 0, lp);

            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!out.path.empty()) {
                file.open(out.path);
                if (!file) throw std::runtime_error("cannot open output file '" + out.path + "'");
                os = &file;
            }
            if (format == "csv") *os << voltau::kSweepCsvHeader << "\n";
            os->flush();

            for (int order = n_min; order <= n_max; order += step) {
                voltau::SolveOptions opt;
                opt.quad_order = quad_order;
                opt.error_grid = grid;
                opt.alpha_den_override = resolve_alpha_den(alpha_den, lp);
                voltau::TauSolution sol = voltau::solve(lp.spec, order, opt);
                voltau::SweepRecord rec = voltau::make_sweep_record(sol);
                *os << (format == "csv" ? voltau::sweep_record_csv(rec)
                                        : voltau::sweep_record_json(rec))
                    << "\n";
                os->flush();
            }
            return kExitOk;
        });
    }

    if (check_cmd->parsed()) {
        return run_with_diagnostics([&]() -> int {
            LoadedProblem lp = load_problem(src);
            configure_precision(precision, check_cmd->count("--precision") > 0, lp);
            voltau::DerivedParams params =
                lp.alpha_den_override
                    ? voltau::derive_params(lp.spec.gamma, lp.spec.beta, *lp.alpha_den_override)
                    : voltau::derive_params(lp.spec.gamma, lp.spec.beta);
            voltau::KernelCoeffs kernel = voltau::project_2d(lp.spec.H, check_n, params.grid());
            voltau::SpectrumReport rep =
                voltau::check_solvability(kernel.h00(), params, voltau::Real("1e-8"));
            out.write(voltau::spectrum_report_to_json(rep, params));
            return rep.violations.empty() ? kExitOk : kExitUnsolvable;
        });
    }

    if (eval_cmd->parsed()) {
        return run_with_diagnostics([&]() -> int {
            if (format.empty()) format = "csv";
            if (format != "csv" && format != "json")
                throw CLI::ValidationError("eval supports --format csv or json");
            std::ifstream in(solution_path);
            if (!in) throw std::runtime_error("cannot open solution file '" + solution_path + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            voltau::StoredSolution stored = voltau::solution_from_json(buf.str());
            voltau::set_working_precision({stored.precision});
            std::vector<voltau::Real> pts = parse_points(points_list, eval_grid);

            const int sig = voltau::report_sig_digits();
            std::ostringstream doc;
            if (format == "csv") doc << "t,y\n";
            bool first = true;
            if (format == "json") doc << "[";
            for (const auto& t : pts) {
                bool in_domain = (t >= 0 && t <= 1);
                if (format == "csv") {
                    doc << voltau::to_sci_string(t, sig) << ",";
                    doc << (in_domain ? voltau::to_sci_string(stored.y.eval(t), sig)
                                      : std::string("ERROR(outside [0,1])"));
                    doc << "\n";
                } else {
                    if (!first) doc << ",";
                    first = false;
                    doc << "{\"t\":\"" << voltau::to_sci_string(t, sig) << "\",";
                    if (in_domain)
                        doc << "\"y\":\"" << voltau::to_sci_string(stored.y.eval(t), sig) << "\"}";
                    else
                        doc << "\"error\":\"outside [0,1]\"}";
                }
            }
            if (format == "json") doc << "]";
            std::string s = doc.str();
            if (!s.empty() && s.back() == '\n') s.pop_back();
            out.write(s);
            return kExitOk;
        });
    }

    std::cerr << "no subcommand given\n";
    return kExitUsage;
}
