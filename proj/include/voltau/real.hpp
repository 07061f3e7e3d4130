#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace voltau {

/// Arbitrary-precision real number. Precision is set at runtime, once per
/// solver run, through set_working_precision().
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Working precision in decimal digits for a solver run.
struct PrecisionConfig {
    unsigned digits = 50;
};

/// Installs `cfg` as the default precision for newly created Real values.
/// Throws std::invalid_argument if cfg.digits < 15.
void set_working_precision(const PrecisionConfig& cfg);

/// Decimal digits currently in effect.
unsigned working_digits();

/// 10^e at working precision (e may be negative). Handy for tolerances
/// such as pow10(-(int)working_digits() + 6).
Real pow10(int e);

/// Parses a decimal string at working precision.
Real real_from_string(std::string_view text);

/// x^k by repeated squaring (k may be negative; x must be nonzero then).
Real pow_int(const Real& x, long long k);

/// Scientific-notation serialization with the given significant digit count.
/// Deterministic: equal inputs give byte-identical output.
std::string to_sci_string(const Real& x, int significant_digits);

}  // namespace voltau
