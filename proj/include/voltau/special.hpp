#pragma once

#include "voltau/real.hpp"

namespace voltau {

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
Real ln_gamma(const Real& x);

/// Gamma(x) for x > 0.
Real gamma_fn(const Real& x);

/// Euler Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a,b > 0.
Real beta(const Real& a, const Real& b);

}  // namespace voltau
