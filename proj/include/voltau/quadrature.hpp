#pragma once

#include "voltau/real.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace voltau {

/// Gauss rule on [0,1]. For kind==jacobi the weight function is
/// (1-u)^a * u^b; for kind==legendre it is 1 (a == b == 0).
struct QuadratureRule {
    enum class Kind { legendre, jacobi };

    Kind kind = Kind::legendre;
    Real a, b;
    std::vector<Real> nodes;    // strictly increasing, inside (0,1)
    std::vector<Real> weights;  // positive
    Real total_weight;          // sum of weights == mass of the weight function

    template <class F>
    Real apply(F&& f) const {
        Real acc = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// m-point Gauss-Legendre rule on [0,1], exact for polynomials of degree
/// <= 2m-1. Cached per (m, working precision).
const QuadratureRule& gauss_legendre(int m);

/// m-point Gauss-Jacobi rule on [0,1] with weight (1-u)^a u^b, a,b > -1.
/// Cached per (m, a, b, working precision).
const QuadratureRule& gauss_jacobi(int m, const Real& a, const Real& b);

/// Mass of the Jacobi weight on [0,1]: B(a+1, b+1). Uses the exact value
/// 1/(a+1) resp. 1/(b+1) when the other exponent is zero.
Real jacobi_mass01(const Real& a, const Real& b);

}  // namespace voltau
