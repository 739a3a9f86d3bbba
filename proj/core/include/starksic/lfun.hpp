#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starksic/bigcomplex.hpp"
#include "starksic/kernels.hpp"
#include "starksic/rayclass.hpp"

namespace starksic {

struct LfunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-class ideal counts a_n(A) = #{ideals in A of norm n}, n <= X.
struct DirichletCoeffs {
    long X = 0;
    long N = 0;
    std::vector<int> counts;  // counts[k*(X+1) + n]
    int at(long k, long n) const { return counts[static_cast<size_t>(k) * (X + 1) + n]; }
    /// Sparse per-norm view: (class, count) pairs for each n.
    std::vector<std::vector<std::pair<int, int>>> by_norm() const;
};

DirichletCoeffs class_counts(const FieldContext& ctx, const RayClassGroup& G, long X);

/// Shared kernel tables for one (Q, P, X) evaluation setup. All vectors are
/// indexed by n = 1..X (slot 0 unused).
struct KernelTables {
    long Q = 0;
    long X = 0;
    Prec bits = 0;
    Real Cprime;                      // sqrt(Q) / (2 pi)
    std::vector<Real> e1;             // E1(n/C')
    std::vector<Real> exp1;           // exp(-n/C')
    Real t0, t1, t2;                  // root-number and validation test points
    std::vector<Real> th_t0, th_inv_t0, th_t1, th_inv_t1, th_t2, th_inv_t2;
    Real s0;                          // offset for the |L(0)| check
    std::vector<Real> k1_s0;          // (n/C')^-s0 Gamma(s0, n/C')
    std::vector<Real> k2_s0;          // (n/C')^(s0-1) Gamma(1-s0, n/C')
};

KernelTables build_kernel_tables(long Q, long X, long P, int threads);

/// Functional-equation data for one contributing character (chi(R) = -1,
/// gamma shifts {0,1}).
struct LFunctionSpec {
    const RayClassGroup* G = nullptr;
    long j = 0;        // character index
    long Q = 0;        // conductor norm |disc_K| * Nm(f)
    long P = 0;        // decimal digits target
    Complex W;         // root number (unit modulus after solve)
    Real w_delta;      // | |W| - 1 | before renormalization
    Real fe_res1, fe_res2;  // theta functional-equation residuals at t1, t2
};

/// Solves W from the theta relation Theta_chi(1/t) = W t Theta_chibar(t) at
/// t0 and validates it at t1 and t2; renormalizes |W| to 1.
Complex solve_root_number(LFunctionSpec& spec, const DirichletCoeffs& coeffs, const KernelTables& K);

/// L'(0, chi) as the finite part of the completed function at s = 0, after
/// verifying |L(0, chi)| < 10^(5-P) via an offset evaluation at s0.
Complex lprime_at_zero(LFunctionSpec& spec, const DirichletCoeffs& coeffs, const KernelTables& K,
                       Real* l0_estimate = nullptr);

struct LChar {
    long j = 0;
    Complex W;
    Complex lprime;
    Real w_delta;
    Real fe_res1, fe_res2;
    Real l0_abs;
};

struct ZetaTable {
    long d = 0, P = 0, X = 0, N = 0, Q = 0;
    std::vector<Real> zprime;  // Z'_A(0), indexed by class exponent
    std::vector<Real> alpha;   // exp(Z'_A(0))
    std::vector<LChar> chars;  // contributing characters, ascending j
    Real max_imag;             // largest dropped imaginary part
    bool from_cache = false;
};

struct LfunOptions {
    long P = 50;
    long X_override = 0;       // 0: derive from the tail bound
    int threads = 1;
    std::string cache_dir;     // empty: no disk cache
};

/// Default coefficient bound: smallest X whose smoothed tail is below
/// 10^-(P+guard+5) for conductor norm Q.
long default_coeff_bound(long Q, long P);

/// Full per-class table of Z'_A(0) and alpha_A = exp(Z'_A(0)).
ZetaTable zeta_derivative_table(const FieldContext& ctx, const RayClassGroup& G, const LfunOptions& opt);

/// Cache round trip (text format with decimal strings and a content checksum).
std::string zeta_cache_filename(long d, long P);
void save_zeta_table(const ZetaTable& table, const std::string& dir);
std::optional<ZetaTable> load_zeta_table(long d, long P, long X_expected, long N, const std::string& dir);

/// Guard digits added to the user precision throughout the zeta stage.
inline long lfun_guard_digits() { return 15; }

}  // namespace starksic
