#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "starksic/bigfloat.hpp"

namespace starksic {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element p + q*sqrt(D) of the real quadratic field Q(sqrt(D)), D squarefree.
/// p, q are exact rationals; all arithmetic is exact.
struct QuadRational {
    mpq_class p, q;
    long D = 0;

    QuadRational() = default;
    QuadRational(mpq_class p_, mpq_class q_, long D_) : p(std::move(p_)), q(std::move(q_)), D(D_) {}
    static QuadRational integer(long v, long D) { return {mpq_class(v), mpq_class(0), D}; }

    mpq_class norm() const { return p * p - D * q * q; }
    mpq_class trace() const { return 2 * p; }
    QuadRational conj() const { return {p, -q, D}; }
    bool is_zero() const { return p == 0 && q == 0; }
    bool is_rational() const { return q == 0; }
    /// Lies in Z[sqrt(D)] (the maximal order for D = 2, 3 mod 4).
    bool is_integral() const {
        return p.get_den() == 1 && q.get_den() == 1;
    }

    QuadRational operator-() const { return {-p, -q, D}; }
    friend QuadRational operator+(const QuadRational& a, const QuadRational& b) {
        return {a.p + b.p, a.q + b.q, a.D};
    }
    friend QuadRational operator-(const QuadRational& a, const QuadRational& b) {
        return {a.p - b.p, a.q - b.q, a.D};
    }
    friend QuadRational operator*(const QuadRational& a, const QuadRational& b) {
        return {a.p * b.p + a.q * b.q * a.D, a.p * b.q + a.q * b.p, a.D};
    }
    friend bool operator==(const QuadRational& a, const QuadRational& b) {
        return a.p == b.p && a.q == b.q && a.D == b.D;
    }
    QuadRational inverse() const {
        mpq_class n = norm();
        if (n == 0) throw FieldError("QuadRational: inverse of zero");
        return {p / n, -q / n, D};
    }
    QuadRational pow(long e) const;

    /// Exact sign of the image under rho1 (sqrt(D) -> +sqrt(D)).
    int sign_rho1() const;
    /// Exact sign under rho2 (sqrt(D) -> -sqrt(D)).
    int sign_rho2() const { return conj().sign_rho1(); }

    Real rho1(Prec bits) const;
    Real rho2(Prec bits) const { return conj().rho1(bits); }

    std::string str() const;
};

/// Exact comparison of rho1 images: sign of rho1(a - b).
inline int cmp_rho1(const QuadRational& a, const QuadRational& b) {
    return (a - b).sign_rho1();
}

/// The real quadratic field K = Q(sqrt((d+1)(d-3))) attached to dimension d,
/// with its units and class number. Immutable once built.
struct FieldContext {
    long d = 0;
    long Delta = 0;       // (d+1)(d-3)
    long D = 0;           // squarefree radical: Delta = (2*half_s)^2 * D / 4... see half_s
    long half_s = 0;      // sqrt(Delta) = 2*half_s*sqrt(D)
    long disc = 0;        // field discriminant = 4D
    long class_number = 0;
    QuadRational eps0;    // fundamental unit, > 1 under rho1
    QuadRational zauner;  // ((d-1) + sqrt(Delta))/2
    long zauner_power = 0;  // zauner == eps0^zauner_power

    Real sqrtD(Prec bits) const {
        Real r(bits);
        mpfr_sqrt_ui(r.raw(), static_cast<unsigned long>(D), MPFR_RNDN);
        return r;
    }
    Real sqrtDelta(Prec bits) const { return sqrtD(bits) * (2 * half_s); }
};

/// Principal ideal of Z[sqrt(D)], stored by a canonical generator: the unique
/// associate g with rho1(g) > 0 and |N(g)| <= rho1(g)^2 < |N(g)|*eps0^2.
struct PrincipalIdeal {
    QuadRational gen;
    mpz_class norm;  // |N(gen)|
};

FieldContext make_field(long d);
/// Accepts non-prime d (used for the d=15 unit identity); skips the
/// congruence class checks that require d prime.
FieldContext make_field_relaxed(long d);

/// Smallest unit eta > 1 with eta == 1 mod d*O_K; checks it equals zauner^3.
QuadRational minimal_congruent_unit(const FieldContext& ctx);

QuadRational canonical_associate(const FieldContext& ctx, QuadRational g);
PrincipalIdeal make_ideal(const FieldContext& ctx, const QuadRational& g);
bool ideal_equal(const FieldContext& ctx, const PrincipalIdeal& a, const PrincipalIdeal& b);

enum class PrimeType { Split, Inert, Ramified };

struct PrimeIdeal {
    PrincipalIdeal ideal;
    long p = 0;  // residue characteristic
    PrimeType type = PrimeType::Inert;
};

/// All prime ideals of norm <= X, each exactly once. Requires class number 1.
std::vector<PrimeIdeal> enumerate_prime_ideals(const FieldContext& ctx, long X);

/// Multiplicative closure: every integral ideal of norm <= X exactly once,
/// visited as (norm, canonical generator). Requires class number 1.
void for_each_ideal(const FieldContext& ctx, long X,
                    const std::function<void(long, const QuadRational&)>& visit);

std::map<long, std::vector<PrincipalIdeal>> enumerate_ideals(const FieldContext& ctx, long X);

/// Independent oracle: ideal counts by brute-force element enumeration modulo
/// the unit group <-1, eps0>. Exposed for tests.
std::vector<long> ideal_counts_by_element_enumeration(const FieldContext& ctx, long X);

/// Number of cycles of reduced indefinite binary quadratic forms of the given
/// positive non-square discriminant (= the narrow class number).
long narrow_class_number_by_forms(long disc);

namespace detail {
bool is_prime_u64(unsigned long long n);
long squarefree_radical(long n, long& square_part);  // n = square_part^2 * radical
QuadRational fundamental_unit_by_continued_fraction(long D);
}  // namespace detail

}  // namespace starksic
