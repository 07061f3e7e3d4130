#include "voltau/real.hpp"

#include <sstream>

namespace voltau {

namespace {
unsigned g_digits = 50;
}

void set_working_precision(const PrecisionConfig& cfg) {
    if (cfg.digits < 15) {
        throw std::invalid_argument("working precision must be at least 15 digits, got " +
                                    std::to_string(cfg.digits));
    }
    g_digits = cfg.digits;
    Real::default_precision(cfg.digits);
}

unsigned working_digits() { return g_digits; }

Real pow10(int e) {
    Real base = 10;
    return pow_int(base, e);
}

Real real_from_string(std::string_view text) { return Real(std::string(text)); }

Real pow_int(const Real& x, long long k) {
    if (k == 0) return Real(1);
    bool neg = k < 0;
    unsigned long long m = neg ? static_cast<unsigned long long>(-(k + 1)) + 1ull
                               : static_cast<unsigned long long>(k);
    Real acc = 1;
    Real base = x;
    while (m > 0) {
        if (m & 1ull) acc *= base;
        base *= base;
        m >>= 1;
    }
    if (neg) {
        if (acc == 0) throw std::domain_error("pow_int: zero base with negative exponent");
        return Real(1) / acc;
    }
    return acc;
}

std::string to_sci_string(const Real& x, int significant_digits) {
    if (significant_digits < 1) significant_digits = 1;
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(significant_digits - 1);
    os << x;
    return os.str();
}

}  // namespace voltau
