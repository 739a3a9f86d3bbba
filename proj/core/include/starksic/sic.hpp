#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starksic/recognition.hpp"

namespace starksic {

struct SicError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense d x d complex matrix at a fixed precision.
class BigComplexMatrix {
  public:
    BigComplexMatrix(long n, Prec bits) : n_(n), bits_(bits), a_(static_cast<size_t>(n * n), Complex(bits)) {}
    long size() const { return n_; }
    Prec prec() const { return bits_; }
    Complex& at(long i, long j) { return a_[static_cast<size_t>(i * n_ + j)]; }
    const Complex& at(long i, long j) const { return a_[static_cast<size_t>(i * n_ + j)]; }

    static BigComplexMatrix identity(long n, Prec bits);
    BigComplexMatrix multiply(const BigComplexMatrix& o) const;
    BigComplexMatrix adjoint() const;
    Real max_abs_diff(const BigComplexMatrix& o) const;
    Real max_abs() const;
    Complex trace() const;

  private:
    long n_;
    Prec bits_;
    std::vector<Complex> a_;
};

/// Displacement operator D_{m,n} = tau^{mn} X^m Z^n with tau = -exp(i pi/d);
/// indices taken mod d (d odd, so the operators are d-periodic).
BigComplexMatrix displacement(long d, long m, long n, Prec bits);

/// M = (1/d) sum_{m,n} nu[m*d+n] D_{-m, -lambda n}. The nu table is row-major
/// over (m,n) with nu[0] the (0,0) entry.
BigComplexMatrix build_weighted_displacement_sum(long d, const std::vector<Complex>& nu_mn, long lambda,
                                                 Prec bits);

struct MDiagnostics {
    Real idem_err;         // ||M^2 - M||_max
    Real herm_err;         // ||M - M*||_max
    Real minor_max;        // largest |2x2 minor|
    Real second_singular;  // power-iteration proxy for sigma_2
};

MDiagnostics m_diagnostics(const BigComplexMatrix& M);

/// Condition-(4) matrix from real nu values indexed by class exponent;
/// nu_{0,0} = 1 and nu_{m,n} = nus[class of (m,n)]. Returns diagnostics only.
MDiagnostics build_M_diagnostics(const FieldContext& ctx, const RayClassGroup& G,
                                 const std::vector<Real>& nus_by_class, Prec bits);

/// Idempotency error alone (the sign-search oracle).
Real idempotency_error_for_nus(const FieldContext& ctx, const RayClassGroup& G,
                               const std::vector<Real>& nus_by_class, Prec bits);

/// The htilde orbit through the roots of gtilde, starting at the canonical
/// root (largest real part, ties by imaginary part), validated against an
/// independent root-finder.
struct HtildeOrbit {
    std::vector<Complex> orbit;
    Real match_residual;       // orbit vs direct root multiset
    Real modulus_deviation;    // max | |r| - 1/sqrt(d+1) |
};

HtildeOrbit compute_htilde_orbit(const FieldContext& ctx, const RayClassGroup& G,
                                 const RecognizedPolynomial& gtilde, const RecognizedPolynomial& htilde,
                                 long P);

/// nu table over (m,n) from the orbit: class exponent k receives
/// orbit[(root_index + k) mod N]; the (0,0) slot is 1.
std::vector<Complex> overlaps_from_orbit(const FieldContext& ctx, const RayClassGroup& G,
                                         const HtildeOrbit& orb, long root_index, Prec bits);

struct OverlapAssignment {
    long d = 0;
    long lambda = 1;
    long root_index = 0;              // offset into the htilde orbit for sigma(nu_id)
    std::vector<Complex> nu_mn;       // d*d row-major, (0,0) entry = 1
    Real orbit_match_residual;        // orbit vs direct root multiset
    Real modulus_deviation;           // max | |r| - 1/sqrt(d+1) |
};

/// Walks the htilde orbit from a canonical root of gtilde (largest real part,
/// ties by imaginary part; root_index shifts the start), validates it against
/// an independent root-finder, and spreads values to (m,n) through the class
/// table. The lambda substitution n -> lambda n happens at build time.
OverlapAssignment assign_conjugate_overlaps(const FieldContext& ctx, const RayClassGroup& G,
                                            const RecognizedPolynomial& gtilde,
                                            const RecognizedPolynomial& htilde, long lambda,
                                            long root_index, long P);

struct FiducialCertificate {
    long d = 0;
    long lambda = 0;
    long P = 0;
    bool valid = false;
    std::vector<Complex> v;
    Real e_max;             // max | |<v, D v>|^2 - 1/(d+1) |
    Real norm_err;          // | <v,v> - 1 |
    Real idem_err, herm_err, minor_max, second_singular;
    Real extract_err;       // || v v* - sigma(M) ||_max
    Real gram_min_eig_lower;
    std::string note;
};

struct LambdaOutcome {
    long lambda = 0;
    bool valid = false;
    std::string idem_err;  // decimal, for the report
};

/// Tries every lambda in (Z/d)^x (or only lambda_override when nonzero),
/// building sigma(M) per the assignment, and returns the first certificate
/// that passes Hermitian/idempotent/rank-1 and equiangularity checks.
FiducialCertificate lambda_search_and_extract(const FieldContext& ctx, const RayClassGroup& G,
                                              const RecognizedPolynomial& gtilde,
                                              const RecognizedPolynomial& htilde, long P, int threads,
                                              long lambda_override,
                                              std::vector<LambdaOutcome>* outcomes = nullptr,
                                              long root_index = 0);

/// Equiangularity certification of an arbitrary unit vector.
FiducialCertificate verify_sic(long d, const std::vector<Complex>& v, long P);

/// If M is (numerically) a Hermitian rank-1 idempotent at tolerance
/// 10^(10-P), extracts the normalized dominant column, phase-fixed, and
/// validates || v v* - M ||_max; otherwise returns nullopt.
std::optional<std::vector<Complex>> extract_fiducial(const BigComplexMatrix& M, long P,
                                                     Real* extract_err = nullptr,
                                                     Real* idem_err = nullptr);

/// Text fiducial files: "starksic-fiducial 1", "d <d>", then one "re im" line
/// per entry (decimal strings).
void save_fiducial(std::ostream& os, long d, const std::vector<Complex>& v, long digits);
std::vector<Complex> load_fiducial(std::istream& is, long& d, Prec bits);

/// Phase-normalizes v so its first entry of significant modulus is real
/// positive (the convention used for printed fiducials).
void phase_normalize(std::vector<Complex>& v);

}  // namespace starksic
