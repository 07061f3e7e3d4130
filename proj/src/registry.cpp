#include "voltau/registry.hpp"

namespace voltau {

const std::vector<BuiltinExample>& builtin_examples() {
    static const std::vector<BuiltinExample> examples = {
        {"ex1",
         "compact kernel H = s^2 with exact grid solution t^(3/2)",
         "1/2", "1/2",
         "s^2",
         "t^(3/2) - beta(1/2,9/2)*t^(7/2)",
         "t^(3/2)",
         false},
        {"ex2",
         "Lighthill model: constant non-compact kernel, solution t^(13/4)",
         "1/3", "2/3",
         "sqrt(3)/(3*pi)",
         "(1 - (gamma(1/3)*gamma(55/12))/(pi*sqrt(3)*gamma(59/12)))*t^(13/4)",
         "t^(13/4)",
         false},
        {"ex3",
         "heat-conduction model: constant kernel on the integer grid, solution t^(5/2)",
         "1", "1",
         "1/2",
         "(6/7)*t^(5/2)",
         "t^(5/2)",
         false},
        {"ex4",
         "constant non-compact kernel, off-grid solution t^(9/5)",
         "1/2", "3/2",
         "sqrt(2)/(2*pi)",
         "(1 - gamma(19/5)/(sqrt(2*pi)*gamma(43/10)))*t^(9/5)",
         "t^(9/5)",
         false},
        {"ex5",
         "compact kernel H = s^(5/3) with manufactured forcing, solution sqrt(t)*sin(t)",
         "2/3", "1",
         "s^(5/3)",
         "",
         "sqrt(t)*sin(t)",
         true},
    };
    return examples;
}

const BuiltinExample* find_example(const std::string& name) {
    for (const auto& ex : builtin_examples())
        if (ex.name == name) return &ex;
    return nullptr;
}

ProblemSpec make_problem(const BuiltinExample& ex) {
    ProblemSpec spec;
    spec.gamma = parse_rational(ex.gamma);
    spec.beta = parse_rational(ex.beta);
    spec.H = exprlang::parse(ex.H, "ts");
    if (!ex.g.empty()) spec.g = exprlang::parse(ex.g, "t");
    if (!ex.exact_y.empty()) spec.exact_y = exprlang::parse(ex.exact_y, "t");
    spec.manufacture = ex.manufacture;
    spec.validate();
    return spec;
}

}  // namespace voltau
