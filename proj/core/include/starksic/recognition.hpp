#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starksic/lfun.hpp"
#include "starksic/polyroots.hpp"

namespace starksic {

struct RecognitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Result of recognizing a real number as p + q*sqrt(D); failure is a value.
struct RecognizedQuad {
    bool ok = false;
    mpq_class p, q;
    Real residual;
};

/// Integer-relation detection by lattice reduction on (1, sqrt(D), x) scaled
/// by 10^(P-10). P is the count of trusted decimal digits of x.
RecognizedQuad recognize_quad(const Real& x, long D, const mpz_class& height_bound, long P);

/// Variant when the denominator is known: recognizes x*den as A + B*sqrt(D)
/// with integer A, B bounded by num_bound (closest-vector embedding; needs
/// roughly half the precision of the three-term relation).
RecognizedQuad recognize_quad_known_den(const Real& x, long D, const mpz_class& den,
                                        const mpz_class& num_bound, long P);

struct RecognizedPolynomial {
    long d = 0;
    long D = 0;
    std::string role;                  // f | g | gtilde | h | htilde
    std::vector<QuadRational> coeffs;  // ascending degree

    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    bool is_palindromic() const;
    RecognizedPolynomial conjugated() const;  // sqrt(D) -> -sqrt(D)
    std::vector<Complex> complex_coeffs(Prec bits) const;
    std::vector<Real> real_coeffs(Prec bits) const;
    Real eval_rho1(const Real& x) const;

    void save(std::ostream& os) const;
    static RecognizedPolynomial load(std::istream& is);
};

/// Monic expansion prod (x - r_k), ascending coefficients, c[n] = 1.
std::vector<Real> expand_from_roots(const std::vector<Real>& roots, Prec bits);

/// Minimal polynomial of the alpha table over K; asserts palindromicity and
/// constant term 1. Throws RecognitionError with a precision estimate if the
/// table precision cannot support the coefficient heights.
RecognizedPolynomial build_f(const FieldContext& ctx, const RayClassGroup& G, const ZetaTable& table);

/// Table precision (user P, in decimal digits) that the coefficient heights
/// of f_d demand; derived a priori from the numeric alpha magnitudes.
long f_precision_needed(const ZetaTable& table);

struct SignAssignment {
    std::vector<int> signs;   // per class exponent
    std::vector<Real> nus;    // signed nu values in class order
    std::string strategy;
    bool global_sign_fixed = false;
};

/// Idempotency error of the matrix M assembled from a candidate nu vector;
/// supplied by the caller (keeps this module independent of the sic layer).
using IdempotencyOracle = std::function<Real(const std::vector<Real>&)>;

/// Exhaustive search over sign vectors modulo the global flip; the unique
/// vector whose symmetric functions all recognize over K wins.
SignAssignment resolve_signs_bruteforce(const FieldContext& ctx, const RayClassGroup& G,
                                        const ZetaTable& table);

/// Matches the real roots of a supplied g_d to the alpha table by minimizing
/// |(d+1) r^2 - alpha|; injectivity asserted.
SignAssignment resolve_signs_known_g(const FieldContext& ctx, const RayClassGroup& G,
                                     const ZetaTable& table, const RecognizedPolynomial& g);

/// Randomized local search scored by the caller's idempotency oracle;
/// explicitly best-effort, throws when the budget is exhausted.
SignAssignment resolve_signs_search(const FieldContext& ctx, const RayClassGroup& G,
                                    const ZetaTable& table, const IdempotencyOracle& oracle,
                                    long budget, unsigned seed);

/// Minimal polynomial of the nu orbit, cleared to integral coefficients with
/// leading coefficient (d+1)^(N/2).
RecognizedPolynomial build_g(const FieldContext& ctx, const std::vector<Real>& nus, long P);

RecognizedPolynomial conjugate_poly(const RecognizedPolynomial& p);

/// Largest deviation of |root| from 1/sqrt(d+1) over the roots of gtilde.
Real gtilde_root_modulus_deviation(const FieldContext& ctx, const RecognizedPolynomial& gtilde, long P);

struct HPolynomials {
    RecognizedPolynomial h, htilde;
    Real vandermonde_residual;
    Real orbit_residual;          // max |h(nu_k) - nu_{k+1}|
    long digits_used = 0;         // working precision that succeeded
};

/// Solves the Vandermonde system tau(nu) = sum c_j nu^j for the Galois-action
/// polynomial; nu values are Newton-refined on the exact g to the working
/// precision, which escalates until every c_j is recognized over K.
HPolynomials solve_h(const FieldContext& ctx, const RayClassGroup& G, const RecognizedPolynomial& g,
                     const std::vector<Real>& nus, long P);

}  // namespace starksic
