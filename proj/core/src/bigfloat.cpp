#include "starksic/bigfloat.hpp"

#include <stdexcept>

namespace starksic {

Real Real::from_decimal(std::string_view text, Prec bits) {
    Real r(bits);
    std::string s(text);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("Real::from_decimal: unparsable number '" + s + "'");
    return r;
}

std::string Real::decimal(long digits) const {
    if (digits < 2) digits = 2;
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string digs(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!digs.empty() && digs[0] == '-') {
        sign = "-";
        digs.erase(0, 1);
    }
    std::string out = sign + digs.substr(0, 1) + "." + digs.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
}

void sin_cos_pi(const Real& t, Real& s, Real& c) {
    Prec w = t.prec() + 64;
    Real theta = Real::pi(w);
    mpfr_mul(theta.raw(), theta.raw(), t.raw(), MPFR_RNDN);
    if (s.prec() < t.prec()) mpfr_set_prec(s.raw(), t.prec());
    if (c.prec() < t.prec()) mpfr_set_prec(c.raw(), t.prec());
    mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
}

}  // namespace starksic
