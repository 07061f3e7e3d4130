#include "voltau/special.hpp"

#include <stdexcept>

namespace voltau {

// Backed by MPFR's lngamma, which is computed at the full working precision
// of the argument.

Real ln_gamma(const Real& x) {
    if (!(x > 0)) throw std::domain_error("ln_gamma requires x > 0");
    return lgamma(x);
}

Real gamma_fn(const Real& x) {
    if (!(x > 0)) throw std::domain_error("gamma requires x > 0");
    return tgamma(x);
}

Real beta(const Real& a, const Real& b) {
    if (!(a > 0) || !(b > 0)) throw std::domain_error("beta requires positive arguments");
    return exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

}  // namespace voltau
