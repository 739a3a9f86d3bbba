#include "starksic/polyroots.hpp"

#include <stdexcept>

namespace starksic {

Complex poly_eval(const std::vector<Complex>& c, const Complex& x) {
    Prec bits = std::max(x.prec(), c.back().prec());
    Complex acc(bits);
    for (size_t i = c.size(); i-- > 0;) {
        acc = acc * x + c[i];
    }
    return acc;
}

static Complex poly_eval_derivative(const std::vector<Complex>& c, const Complex& x) {
    Prec bits = std::max(x.prec(), c.back().prec());
    Complex acc(bits);
    for (size_t i = c.size(); i-- > 1;) {
        acc = acc * x + c[i] * Real(static_cast<long>(i), bits);
    }
    return acc;
}

Complex newton_polish(const std::vector<Complex>& c, Complex x, Prec bits) {
    Real tol = Real(1, bits);
    mpfr_mul_2si(tol.raw(), tol.raw(), -static_cast<long>(bits - 8), MPFR_RNDN);
    x = x.at_prec(bits);
    for (int it = 0; it < 200; ++it) {
        Complex p = poly_eval(c, x);
        Complex dp = poly_eval_derivative(c, x);
        Real dpn = abs2(dp);
        if (dpn.is_zero()) break;
        Complex step = p / dp;
        x -= step;
        if (abs(step) < tol * (abs(x) + 1)) break;
    }
    return x;
}

std::vector<Complex> all_roots(const std::vector<Complex>& coeffs, Prec bits) {
    size_t deg = coeffs.size() - 1;
    while (deg > 0 && abs2(coeffs[deg]).is_zero()) --deg;
    if (deg == 0) return {};
    std::vector<Complex> c(coeffs.begin(), coeffs.begin() + deg + 1);

    Prec wb = bits + 32 + static_cast<Prec>(2 * deg);
    for (auto& z : c) z = z.at_prec(wb);

    // initial guesses on a circle of radius (|c0|/|cn|)^(1/deg), angles spread
    Real r0(wb);
    {
        Real a0 = abs(c[0]) + Real::pow10(-static_cast<long>(digits_for_bits(wb)), wb);
        Real an = abs(c[deg]);
        Real ratio = a0 / an;
        mpfr_rootn_ui(r0.raw(), ratio.raw(), static_cast<unsigned long>(deg), MPFR_RNDN);
        if (r0.is_zero()) r0 = Real(1, wb);
    }
    std::vector<Complex> z(deg, Complex(wb));
    for (size_t i = 0; i < deg; ++i) {
        Real ang = (Real(static_cast<long>(2 * i), wb) + Real(1, wb) / 2 + Real(1, wb) / (7 + static_cast<long>(i))) /
                   Real(static_cast<long>(deg), wb);
        // reduce angle into (-1, 1] half-turns
        long whole = (ang / 2).to_long();
        ang -= 2 * whole;
        if (ang > Real(1, wb)) ang -= 2;
        Complex dir = exp_i_pi(ang);
        z[i] = dir * r0;
    }

    Real conv = Real(1, wb);
    mpfr_mul_2si(conv.raw(), conv.raw(), -static_cast<long>(bits + 16), MPFR_RNDN);

    for (int iter = 0; iter < 500; ++iter) {
        Real worst(0, wb);
        for (size_t i = 0; i < deg; ++i) {
            Complex p = poly_eval(c, z[i]);
            Complex dp = poly_eval_derivative(c, z[i]);
            if (abs2(dp).is_zero()) {
                // nudge off a critical point
                z[i].re += Real::pow10(-3, wb);
                continue;
            }
            Complex newton = p / dp;
            Complex sum(wb);
            for (size_t j = 0; j < deg; ++j) {
                if (j == i) continue;
                Complex diff = z[i] - z[j];
                Real dn = abs2(diff);
                if (dn.is_zero()) {
                    diff.re += Real::pow10(-static_cast<long>(digits_for_bits(wb) / 2), wb) * (1 + static_cast<long>(j));
                    dn = abs2(diff);
                }
                sum += conj(diff) / dn;  // 1/(z_i - z_j)
            }
            Complex denom = Complex(Real(1, wb), Real(0, wb)) - newton * sum;
            Complex corr = abs2(denom).is_zero() ? newton : newton / denom;
            z[i] -= corr;
            Real cn = abs(corr) / (abs(z[i]) + 1);
            if (cn > worst) worst = cn;
        }
        if (worst < conv) {
            for (auto& r : z) r = newton_polish(c, r, wb).at_prec(bits);
            return z;
        }
    }
    throw std::runtime_error("all_roots: Aberth iteration did not converge");
}

}  // namespace starksic
