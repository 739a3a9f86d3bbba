#include "starksic/kernels.hpp"

#include <stdexcept>

namespace starksic {

namespace {

double series_cf_switch(Prec bits) {
    double x = 0.18 * static_cast<double>(bits);
    return x < 24.0 ? 24.0 : x;
}

// K(a_k/b_k) with a_k = -k(k-s), b_k = x + 2k+1 - s; Gamma(s,x) = e^-x x^s / K.
Real gamma_cf(const Real& s_in, const Real& x_in, Prec w, Prec bits) {
    Real s = s_in.at_prec(w), x = x_in.at_prec(w);
    Real tiny = Real::pow10(-static_cast<long>(w), w);  // Lentz zero guard
    Real f = x + 1 - s;
    if (f.is_zero()) f = tiny;
    Real C = f, Dn(0, w);
    Real eps = Real(1, w);
    mpfr_mul_2si(eps.raw(), eps.raw(), -static_cast<long>(bits + 16), MPFR_RNDN);
    for (long k = 1; k < 100000; ++k) {
        Real a = (s - k) * k;           // a_k = -k(k-s)
        Real b = x + (2 * k + 1) - s;
        Dn = b + a * Dn;
        if (Dn.is_zero()) Dn = tiny;
        Dn = 1 / Dn;
        C = b + a / C;
        if (C.is_zero()) C = tiny;
        Real delta = C * Dn;
        f *= delta;
        if (abs(delta - 1) < eps) {
            Real r = exp(-x);
            if (!(s.is_zero())) {
                Real xs = exp(s * log(x));
                r *= xs;
            }
            return (r / f).at_prec(bits);
        }
    }
    throw std::runtime_error("upper_gamma: continued fraction did not converge");
}

Real e1_series(const Real& x_in, Prec w, Prec bits) {
    // E1 = -gamma - log x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    Real x = x_in.at_prec(w);
    Real sum(0, w);
    Real term = x;  // (-1)^{k+1} x^k / k!
    Real thresh = Real(1, w);
    mpfr_mul_2si(thresh.raw(), thresh.raw(), -static_cast<long>(w - 8), MPFR_RNDN);
    for (long k = 1; k < 1000000; ++k) {
        sum += term / k;
        Real nxt = term * x;
        nxt /= -(k + 1);
        term = nxt;
        if (abs(term) < thresh) break;
    }
    Real g(w);
    mpfr_const_euler(g.raw(), MPFR_RNDN);
    Real r = sum - g - log(x);
    return r.at_prec(bits);
}

// Gamma(s,x) = Gamma(s) - x^s e^-x sum_{k>=0} x^k / (s(s+1)...(s+k))
Real gamma_series(const Real& s_in, const Real& x_in, Prec w, Prec bits) {
    Real s = s_in.at_prec(w), x = x_in.at_prec(w);
    Real term = 1 / s;
    Real sum = term;
    Real thresh = Real(1, w);
    mpfr_mul_2si(thresh.raw(), thresh.raw(), -static_cast<long>(w - 8), MPFR_RNDN);
    for (long k = 1; k < 1000000; ++k) {
        term *= x;
        term /= (s + k);
        sum += term;
        if (abs(term) < thresh * (abs(sum) + 1)) break;
    }
    Real lower = exp(s * log(x) - x) * sum;
    Real g(w);
    mpfr_gamma(g.raw(), s.raw(), MPFR_RNDN);
    return (g - lower).at_prec(bits);
}

}  // namespace

Real exp_integral_e1(const Real& x, Prec bits) {
    if (x.sign() <= 0) throw std::invalid_argument("exp_integral_e1: requires x > 0");
    double xd = x.to_double();
    if (xd < series_cf_switch(bits)) {
        Prec w = bits + static_cast<Prec>(1.4427 * xd) + 48;
        return e1_series(x, w, bits);
    }
    return gamma_cf(Real(0, bits), x, bits + 32, bits);
}

Real upper_gamma(const Real& s, const Real& x, Prec bits) {
    if (x.sign() <= 0) throw std::invalid_argument("upper_gamma: requires x > 0");
    if (s.is_zero()) return exp_integral_e1(x, bits);
    double xd = x.to_double();
    if (xd >= series_cf_switch(bits)) return gamma_cf(s, x, bits + 32, bits);
    // pole-cancellation guard bits when s is near a small magnitude
    Prec extra_s = 0;
    if (abs(s) < Real(1, 64) / 2) extra_s = static_cast<Prec>(-abs(s).exponent2()) + 8;
    Prec w = bits + static_cast<Prec>(1.4427 * xd) + extra_s + 48;
    return gamma_series(s, x, w, bits);
}

}  // namespace starksic
