#include <doctest.h>

#include "starksic/kernels.hpp"

using namespace starksic;

// oracle: MPFR's own incomplete gamma
static Real mpfr_gamma_inc_oracle(double s, const Real& x, Prec bits) {
    Real a(bits);
    mpfr_set_d(a.raw(), s, MPFR_RNDN);
    Real r(bits);
    mpfr_gamma_inc(r.raw(), a.raw(), x.raw(), MPFR_RNDN);
    return r;
}

TEST_CASE("E1 against MPFR incomplete gamma across the series/CF switch") {
    for (long digits : {30L, 60L, 120L}) {
        Prec b = bits_for_digits(digits);
        Real tol = Real::pow10(-(digits - 2), b);
        for (double xv : {0.001, 0.1, 1.0, 3.0, 10.0, 24.5, 26.0, 40.0, 80.0, 200.0}) {
            Real x(b);
            mpfr_set_d(x.raw(), xv, MPFR_RNDN);
            Real mine = exp_integral_e1(x, b);
            Real ref = mpfr_gamma_inc_oracle(0.0, x, b + 32).at_prec(b);
            CHECK(abs(mine - ref) < tol * abs(ref));
        }
    }
}

TEST_CASE("upper gamma general shift against MPFR") {
    Prec b = bits_for_digits(50);
    Real tol = Real::pow10(-46, b);
    for (double sv : {1.0, 0.5, 1.5, -0.25, 2.0}) {
        for (double xv : {0.2, 2.0, 9.0, 30.0, 120.0}) {
            Real s(b), x(b);
            mpfr_set_d(s.raw(), sv, MPFR_RNDN);
            mpfr_set_d(x.raw(), xv, MPFR_RNDN);
            Real mine = upper_gamma(s, x, b);
            Real ref = mpfr_gamma_inc_oracle(sv, x, b + 32).at_prec(b);
            CHECK(abs(mine - ref) < tol * (abs(ref) + Real(1, b)));
        }
    }
}

TEST_CASE("upper gamma near the s=0 pole stays finite and consistent") {
    Prec b = bits_for_digits(50);
    Real s = Real::pow10(-20, b);
    Real x(b);
    mpfr_set_d(x.raw(), 2.5, MPFR_RNDN);
    Real g = upper_gamma(s, x, b);
    Real e1 = exp_integral_e1(x, b);
    // Gamma(s,x) -> E1(x) as s -> 0, with error O(s)
    CHECK(abs(g - e1) < Real::pow10(-18, b));
}

TEST_CASE("Gamma(1,x) = exp(-x)") {
    Prec b = bits_for_digits(60);
    Real x(b);
    mpfr_set_d(x.raw(), 7.25, MPFR_RNDN);
    Real g = upper_gamma(Real(1, b), x, b);
    CHECK(abs(g - exp(-x)) < Real::pow10(-57, b));
}
