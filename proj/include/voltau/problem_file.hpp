#pragma once

#include "voltau/problem.hpp"

#include <optional>
#include <string>

namespace voltau {

struct ProblemFileError : std::runtime_error {
    int line;
    ProblemFileError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// A problem definition loaded from disk. The file is a UTF-8 key/value
/// document, one `key = value` pair per line, expressions in double quotes,
/// '#' starting a comment:
///
///   gamma = "1/2"
///   beta  = "1/2"
///   H     = "s^2"
///   g     = "t^(3/2) - beta(1/2,9/2)*t^(7/2)"
///   exact_y = "t^(3/2)"
///   manufacture = false        # optional
///   alpha_den_override = 2     # optional
///   precision = 50             # optional
struct ProblemFile {
    ProblemSpec spec;
    std::optional<long long> alpha_den_override;
    std::optional<unsigned> precision;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

}  // namespace voltau
