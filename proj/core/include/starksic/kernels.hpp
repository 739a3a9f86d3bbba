#pragma once

#include "starksic/bigfloat.hpp"

namespace starksic {

/// Exponential integral E1(x) for x > 0, correct to ~2^-bits relative.
/// Power series with cancellation guard bits for small x, continued fraction
/// (modified Lentz) for large x.
Real exp_integral_e1(const Real& x, Prec bits);

/// Upper incomplete gamma Gamma(s, x) for real s and x > 0. Series route uses
/// the all-positive Kummer form of the lower function; near s = 0 the pole
/// cancellation between Gamma(s) and the k = 0 term is absorbed by extra
/// working bits.
Real upper_gamma(const Real& s, const Real& x, Prec bits);

}  // namespace starksic
