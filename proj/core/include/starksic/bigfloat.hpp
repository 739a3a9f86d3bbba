#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace starksic {

using Prec = mpfr_prec_t;

/// Bits needed to represent `digits` decimal digits, with headroom.
inline Prec bits_for_digits(long digits) {
    return static_cast<Prec>(digits * 3.3219280948873623 + 16);
}

inline long digits_for_bits(Prec bits) {
    return static_cast<long>(bits / 3.3219280948873623);
}

/// Arbitrary-precision real number. Thin RAII wrapper around mpfr_t with an
/// explicit, locally tracked precision: every arithmetic result carries
/// max(precision of operands), never a hidden global default. All rounding
/// is to nearest.
class Real {
  public:
    explicit Real(Prec bits) { mpfr_init2(v_, bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits); }
    Real() : Real(64) { mpfr_set_zero(v_, 1); }
    Real(long value, Prec bits) : Real(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, o.prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.prec());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real from_decimal(std::string_view text, Prec bits);
    static Real from_mpz(const mpz_class& z, Prec bits) {
        Real r(bits);
        mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static Real from_mpq(const mpq_class& q, Prec bits) {
        Real r(bits);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static Real pi(Prec bits) {
        Real r(bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    /// 10^e at the given precision (e may be negative).
    static Real pow10(long e, Prec bits) {
        Real r(bits);
        mpfr_set_si(r.v_, 10, MPFR_RNDN);
        mpfr_pow_si(r.v_, r.v_, e, MPFR_RNDN);
        return r;
    }

    Prec prec() const { return mpfr_get_prec(v_); }
    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    /// Decimal string "[-]d.ddd...e±XX" with exactly `digits` significant digits.
    std::string decimal(long digits) const;

    Real& operator+=(const Real& o) { bump(o.prec()); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { bump(o.prec()); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { bump(o.prec()); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { bump(o.prec()); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator+=(long k) { mpfr_add_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator-=(long k) { mpfr_sub_si(v_, v_, k, MPFR_RNDN); return *this; }

    friend Real operator+(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r(pmax(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, long k) { Real r(a.prec()); mpfr_mul_si(r.v_, a.v_, k, MPFR_RNDN); return r; }
    friend Real operator*(long k, const Real& a) { return a * k; }
    friend Real operator/(const Real& a, long k) { Real r(a.prec()); mpfr_div_si(r.v_, a.v_, k, MPFR_RNDN); return r; }
    friend Real operator/(long k, const Real& a) { Real r(a.prec()); mpfr_si_div(r.v_, k, a.v_, MPFR_RNDN); return r; }
    friend Real operator+(const Real& a, long k) { Real r(a.prec()); mpfr_add_si(r.v_, a.v_, k, MPFR_RNDN); return r; }
    friend Real operator+(long k, const Real& a) { return a + k; }
    friend Real operator-(const Real& a, long k) { Real r(a.prec()); mpfr_sub_si(r.v_, a.v_, k, MPFR_RNDN); return r; }
    friend Real operator-(long k, const Real& a) { Real r(a.prec()); mpfr_si_sub(r.v_, k, a.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    friend Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sqrt(const Real& a) { Real r(a.prec()); mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real pow_si(const Real& a, long e) { Real r(a.prec()); mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN); return r; }
    friend Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.v_, a.v_); return r; }
    friend Real round_nearest(const Real& a) { Real r(a.prec()); mpfr_round(r.v_, a.v_); return r; }

    /// Rounds to the nearest integer, exactly.
    mpz_class to_mpz_round() const {
        Real t(prec());
        mpfr_round(t.v_, v_);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
        return z;
    }

    /// In-place fused accumulate: *this += a*b.
    void addmul(const Real& a, const Real& b) {
        bump(std::max(a.prec(), b.prec()));
        mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
    }
    void submul(const Real& a, const Real& b) {
        bump(std::max(a.prec(), b.prec()));
        mpfr_fms(v_, a.v_, b.v_, v_, MPFR_RNDN);
        mpfr_neg(v_, v_, MPFR_RNDN);
    }

    /// Copy rounded to a different precision.
    Real at_prec(Prec bits) const {
        Real r(bits);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    /// Base-2 exponent of the value (0 for zero).
    long exponent2() const { return is_zero() || is_nan() ? 0 : mpfr_get_exp(v_); }

  private:
    static Prec pmax(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }
    void bump(Prec p) { if (p > prec()) mpfr_prec_round(v_, p, MPFR_RNDN); }
    mpfr_t v_;
};

/// sin and cos of pi*t computed together at the precision of t.
void sin_cos_pi(const Real& t, Real& s, Real& c);

}  // namespace starksic
