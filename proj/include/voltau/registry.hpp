#pragma once

#include "voltau/problem.hpp"

#include <string>
#include <vector>

namespace voltau {

/// One of the built-in worked examples, stored in source form.
struct BuiltinExample {
    std::string name;
    std::string description;
    std::string gamma;
    std::string beta;
    std::string H;
    std::string g;        // empty when manufactured
    std::string exact_y;  // empty when unknown
    bool manufacture = false;
};

const std::vector<BuiltinExample>& builtin_examples();

/// nullptr when no example has that name.
const BuiltinExample* find_example(const std::string& name);

ProblemSpec make_problem(const BuiltinExample& ex);

}  // namespace voltau
