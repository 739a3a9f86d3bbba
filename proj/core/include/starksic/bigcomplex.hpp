#pragma once

#include "starksic/bigfloat.hpp"

namespace starksic {

/// Complex number built from two Reals (MPFR has no complex layer here).
struct Complex {
    Real re, im;

    Complex() = default;
    explicit Complex(Prec bits) : re(bits), im(bits) {
        mpfr_set_zero(re.raw(), 1);
        mpfr_set_zero(im.raw(), 1);
    }
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(long r, Prec bits) : re(r, bits), im(0, bits) {}

    Prec prec() const { return std::max(re.prec(), im.prec()); }

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
    friend Complex operator*(const Real& s, const Complex& a) { return a * s; }
    friend Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend Complex operator/(const Complex& a, long k) { return {a.re / k, a.im / k}; }
    friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
    friend Real abs2(const Complex& a) { return a.re * a.re + a.im * a.im; }
    friend Real abs(const Complex& a) { return sqrt(abs2(a)); }

    /// *this += a*b without temporaries beyond two scratch fmas.
    void addmul(const Complex& a, const Complex& b) {
        re.addmul(a.re, b.re);
        re.submul(a.im, b.im);
        im.addmul(a.re, b.im);
        im.addmul(a.im, b.re);
    }
    /// *this += a*r for a real r.
    void addmul_real(const Complex& a, const Real& r) {
        re.addmul(a.re, r);
        im.addmul(a.im, r);
    }
    /// *this += a*k for a machine-integer k.
    void addmul_si(const Complex& a, long k) {
        Real t = a.re * k;
        re += t;
        t = a.im * k;
        im += t;
    }

    Complex at_prec(Prec bits) const { return {re.at_prec(bits), im.at_prec(bits)}; }
};

/// exp(i*pi*t): unit-modulus complex from the angle in half-turns.
inline Complex exp_i_pi(const Real& t) {
    Real s(t.prec()), c(t.prec());
    sin_cos_pi(t, s, c);
    return {std::move(c), std::move(s)};
}

}  // namespace starksic
