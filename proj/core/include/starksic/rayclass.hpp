#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "starksic/bigcomplex.hpp"
#include "starksic/quadfield.hpp"

namespace starksic {

struct RayClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element of (O_K/d)^x x {sign at rho2}, residues written u + v*w with
/// w = sqrt(D) mod d.
struct ResiduePair {
    int u = 0, v = 0;
    int sign = 1;

    friend bool operator==(const ResiduePair& a, const ResiduePair& b) {
        return a.u == b.u && a.v == b.v && a.sign == b.sign;
    }
    friend bool operator<(const ResiduePair& a, const ResiduePair& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.v != b.v) return a.v < b.v;
        return a.sign > b.sign;  // + before -
    }
};

/// Ray class group Cl_{(d) inf2} of the field, for class number 1 in full;
/// for class number 2 (d = 23) only the principal part carries the (m,n)
/// table and the global structure is reported separately.
class RayClassGroup {
  public:
    const FieldContext* ctx = nullptr;
    long N = 0;                       // order of the principal part, (d^2-1)/3
    ResiduePair generator;            // class generator (canonical rep)
    std::pair<int, int> generator_mn; // its (m,n) label
    long R_index = 0;
    std::vector<long> structure;      // cyclic factors of the full group

    long dlog(const ResiduePair& r) const;           // exponent of the class of r
    ResiduePair canonical(ResiduePair r) const;      // reduce modulo unit image
    long amn_class(int m, int n) const;              // exponent of A_{m,n}
    long R_class() const { return R_index; }

    /// Exponent of the class of an element coprime to d (denominator coprime
    /// to d allowed).
    long class_of_element(const QuadRational& beta) const;

    /// Galois permutation on exponents is k -> k+1 mod N; this gives the
    /// induced map on (m,n) fiber representatives.
    std::pair<int, int> galois_on_mn(int m, int n) const;
    /// Lexicographically smallest (m,n) in the epsilon-fiber of (m,n).
    std::pair<int, int> fiber_representative(int m, int n) const;

    /// Multiplication of residue pairs (mod d arithmetic in F_d[w]/(w^2-D)).
    ResiduePair mul(const ResiduePair& a, const ResiduePair& b) const;
    long order_of(const ResiduePair& r) const;

    /// Character chi_j: class exponent k -> e(jk/N).
    Complex character_value(long j, long k, Prec bits) const;
    int character_at_R(long j) const;  // +1 or -1, exact

    /// One JSON record per (m,n) pair with its class exponent.
    void dump_mn_table(std::ostream& os) const;

    /// Orders of the ray class groups for the four sign moduli
    /// (d), (d)inf1, (d)inf2, (d)inf1inf2  (diagnostic; d=5 gives 4,8,8,16).
    std::array<long, 4> sign_modulus_orders() const;

  private:
    friend RayClassGroup build_ray_class_group(const FieldContext& ctx);
    std::vector<ResiduePair> unit_image_;
    std::unordered_map<int, long> dlog_;            // encoded canonical rep -> exponent
    std::vector<long> amn_;                          // d*d table, -1 at (0,0)
    int two_s_ = 0;                                  // 2*half_s mod d: n-coordinate scale
    int encode(const ResiduePair& r) const { return (r.u * static_cast<int>(ctx->d) + r.v) * 2 + (r.sign < 0 ? 1 : 0); }
};

RayClassGroup build_ray_class_group(const FieldContext& ctx);

}  // namespace starksic
