#include "starksic/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "starksic/lll.hpp"

namespace starksic {

namespace {

mpz_class round_scaled(const Real& v, const mpz_class& scale, Prec wb) {
    Real s = Real::from_mpz(scale, wb);
    return (s * v).to_mpz_round();
}

Real sqrtD_at(long D, Prec bits) {
    Real r(bits);
    mpfr_sqrt_ui(r.raw(), static_cast<unsigned long>(D), MPFR_RNDN);
    return r;
}

}  // namespace

RecognizedQuad recognize_quad(const Real& x, long D, const mpz_class& height_bound, long P) {
    Prec wb = std::max<Prec>(x.prec(), bits_for_digits(P)) + 64;
    RecognizedQuad out;
    out.residual = Real(0, wb);
    if (P < 16) return out;
    mpz_class S;
    mpz_ui_pow_ui(S.get_mpz_t(), 10, static_cast<unsigned long>(P - 10));
    Real rd = sqrtD_at(D, wb);

    std::vector<std::vector<mpz_class>> B = {
        {1, 0, 0, S},
        {0, 1, 0, round_scaled(rd, S, wb)},
        {0, 0, 1, round_scaled(x, S, wb)},
    };
    lll_reduce(B);

    Real tol = Real::pow10(10 - P, wb) * (abs(x) + 1);
    bool have = false;
    for (const auto& row : B) {
        const mpz_class &A = row[0], &Bq = row[1], &C = row[2];
        if (C == 0) continue;
        if (abs(A) > height_bound || abs(Bq) > height_bound || abs(C) > height_bound) continue;
        mpq_class p(-A, C), q(-Bq, C);
        p.canonicalize();
        q.canonicalize();
        Real res = abs(x - (Real::from_mpq(p, wb) + Real::from_mpq(q, wb) * rd));
        if (res < tol && (!have || res < out.residual)) {
            out.ok = true;
            out.p = p;
            out.q = q;
            out.residual = res;
            have = true;
        }
    }
    return out;
}

RecognizedQuad recognize_quad_known_den(const Real& x, long D, const mpz_class& den,
                                        const mpz_class& num_bound, long P) {
    Prec wb = std::max<Prec>(x.prec(), bits_for_digits(P)) + 64;
    RecognizedQuad out;
    out.residual = Real(0, wb);
    if (P < 16) return out;
    mpz_class S;
    mpz_ui_pow_ui(S.get_mpz_t(), 10, static_cast<unsigned long>(P - 10));
    Real rd = sqrtD_at(D, wb);
    Real y = x * Real::from_mpz(den, wb);
    mpz_class T = num_bound + 1;  // Kannan embedding weight ~ expected distance

    std::vector<std::vector<mpz_class>> B = {
        {1, 0, S, 0},
        {0, 1, round_scaled(rd, S, wb), 0},
        {0, 0, round_scaled(y, S, wb), T},
    };
    lll_reduce(B);

    Real tol = Real::pow10(10 - P, wb) * (abs(x) + 1);
    for (const auto& row : B) {
        if (row[3] == 0) continue;
        if (abs(row[3]) != T) continue;
        int u = row[3] == T ? 1 : -1;
        mpz_class A = -u * row[0], Bq = -u * row[1];
        if (abs(A) > num_bound || abs(Bq) > num_bound) continue;
        mpq_class p(A, den), q(Bq, den);
        p.canonicalize();
        q.canonicalize();
        Real res = abs(x - (Real::from_mpq(p, wb) + Real::from_mpq(q, wb) * rd));
        if (res < tol) {
            out.ok = true;
            out.p = p;
            out.q = q;
            out.residual = res;
            return out;
        }
    }
    return out;
}

bool RecognizedPolynomial::is_palindromic() const {
    long n = degree();
    for (long i = 0; i <= n; ++i)
        if (!(coeffs[static_cast<size_t>(i)] == coeffs[static_cast<size_t>(n - i)])) return false;
    return true;
}

RecognizedPolynomial RecognizedPolynomial::conjugated() const {
    RecognizedPolynomial out = *this;
    for (auto& c : out.coeffs) c.q = -c.q;
    if (role == "f") out.role = "ftilde";
    else if (role == "g") out.role = "gtilde";
    else if (role == "h") out.role = "htilde";
    else if (role == "gtilde") out.role = "g";
    else if (role == "htilde") out.role = "h";
    return out;
}

std::vector<Complex> RecognizedPolynomial::complex_coeffs(Prec bits) const {
    std::vector<Complex> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.emplace_back(c.rho1(bits), Real(0, bits));
    return out;
}

std::vector<Real> RecognizedPolynomial::real_coeffs(Prec bits) const {
    std::vector<Real> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(c.rho1(bits));
    return out;
}

Real RecognizedPolynomial::eval_rho1(const Real& x) const {
    Prec bits = x.prec();
    Real acc(0, bits);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i].rho1(bits);
    return acc;
}

void RecognizedPolynomial::save(std::ostream& os) const {
    os << "starksic-poly 1\n";
    os << "d " << d << "\n";
    os << "role " << role << "\n";
    os << "degree " << degree() << "\n";
    os << "radical " << D << "\n";
    for (long i = 0; i <= degree(); ++i) {
        const QuadRational& c = coeffs[static_cast<size_t>(i)];
        os << "c" << i << " " << c.p.get_num() << "/" << c.p.get_den() << " + " << c.q.get_num() << "/"
           << c.q.get_den() << " * sqrt(" << D << ")\n";
    }
}

RecognizedPolynomial RecognizedPolynomial::load(std::istream& is) {
    RecognizedPolynomial out;
    std::string magic, key;
    int version = 0;
    is >> magic >> version;
    if (magic != "starksic-poly" || version != 1)
        throw RecognitionError("polynomial load: bad header '" + magic + "'");
    long degree = -1;
    is >> key >> out.d >> key >> out.role >> key >> degree >> key >> out.D;
    if (degree < 0 || out.D <= 0) throw RecognitionError("polynomial load: bad metadata");
    out.coeffs.resize(static_cast<size_t>(degree) + 1);
    for (long i = 0; i <= degree; ++i) {
        std::string label, pstr, plus, qstr, star, sq;
        is >> label >> pstr >> plus >> qstr >> star >> sq;
        if (!is || plus != "+" || star != "*")
            throw RecognitionError("polynomial load: malformed coefficient line " + std::to_string(i));
        mpq_class p(pstr), q(qstr);
        p.canonicalize();
        q.canonicalize();
        out.coeffs[static_cast<size_t>(i)] = QuadRational(p, q, out.D);
    }
    return out;
}

std::vector<Real> expand_from_roots(const std::vector<Real>& roots, Prec bits) {
    std::vector<Real> c{Real(1, bits)};
    for (const Real& r : roots) {
        std::vector<Real> nc(c.size() + 1, Real(0, bits));
        for (size_t i = 0; i < c.size(); ++i) {
            nc[i + 1] += c[i];
            nc[i] -= r * c[i];
        }
        c = std::move(nc);
    }
    return c;
}

namespace {

// heights of the symmetric functions from the numeric roots, as log10
std::vector<double> coeff_log10_heights(const std::vector<Real>& roots) {
    size_t n = roots.size();
    std::vector<double> lg(n);
    for (size_t i = 0; i < n; ++i) {
        double a = std::fabs(roots[i].to_double());
        lg[i] = a > 1 ? std::log10(a) : 0.0;
    }
    std::sort(lg.rbegin(), lg.rend());
    std::vector<double> out(n + 1, 0.0);
    double acc = 0;
    for (size_t k = 0; k <= n; ++k) {
        // log10 binom(n,k) + sum of k largest positive log-moduli
        double lb = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                    std::lgamma(static_cast<double>(n - k) + 1);
        out[k] = lb / std::log(10.0) + acc;
        if (k < n) acc += lg[k];
    }
    return out;
}

mpz_class pow10_z(long e) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? 0 : e));
    return z;
}

}  // namespace

RecognizedPolynomial build_f(const FieldContext& ctx, const RayClassGroup& G, const ZetaTable& table) {
    long N = G.N;
    long P_eff = table.P + lfun_guard_digits();
    Prec bits = bits_for_digits(P_eff);
    std::vector<Real> roots;
    roots.reserve(static_cast<size_t>(N));
    for (long k = 0; k < N; ++k) roots.push_back(table.alpha[static_cast<size_t>(k)].at_prec(bits));

    std::vector<double> lg = coeff_log10_heights(roots);
    double worst = *std::max_element(lg.begin(), lg.end());
    long needed = static_cast<long>(2 * worst) + 26;
    if (P_eff < needed)
        throw RecognitionError("build_f: coefficient heights ~10^" +
                               std::to_string(static_cast<long>(worst)) + " need P >= " +
                               std::to_string(needed - lfun_guard_digits()) + " (have " +
                               std::to_string(table.P) + ")");

    std::vector<Real> c = expand_from_roots(roots, bits);
    RecognizedPolynomial f;
    f.d = ctx.d;
    f.D = ctx.D;
    f.role = "f";
    f.coeffs.resize(static_cast<size_t>(N) + 1);
    for (long i = 0; i <= N; ++i) {
        long k = N - i;  // elementary-symmetric index for coefficient of x^i
        mpz_class H = pow10_z(static_cast<long>(lg[static_cast<size_t>(k)]) + 3);
        RecognizedQuad r;
        for (long den : {1L, 2L}) {
            r = recognize_quad_known_den(c[static_cast<size_t>(i)], ctx.D, mpz_class(den), H, P_eff);
            if (r.ok) break;
        }
        if (!r.ok)
            throw RecognitionError("build_f: coefficient of x^" + std::to_string(i) +
                                   " did not recognize over K; a higher precision is needed");
        f.coeffs[static_cast<size_t>(i)] = QuadRational(r.p, r.q, ctx.D);
    }
    if (!(f.coeffs[0] == QuadRational::integer(1, ctx.D)))
        throw RecognitionError("build_f: constant term is not 1");
    if (!f.is_palindromic()) throw RecognitionError("build_f: polynomial is not self-reciprocal");
    // every input root satisfies f to tolerance
    Real tol = Real::pow10(15 - P_eff, bits);
    Real scale(0, bits);
    for (const auto& q : f.coeffs) scale += abs(q.rho1(bits));
    for (const Real& r : roots) {
        Real v = abs(f.eval_rho1(r));
        if (!(v < tol * scale))
            throw RecognitionError("build_f: recognized polynomial fails to vanish at an input root");
    }
    return f;
}

namespace {

struct ExpansionCheck {
    bool ok = true;
    std::vector<QuadRational> coeffs;  // ascending, monic
};

// try to recognize every symmetric function of the candidate nu vector
ExpansionCheck recognize_expansion(const FieldContext& ctx, const std::vector<Real>& nus, long P_eff,
                                   Prec bits) {
    long N = static_cast<long>(nus.size());
    std::vector<Real> c = expand_from_roots(nus, bits);
    std::vector<double> lg = coeff_log10_heights(nus);
    ExpansionCheck out;
    out.coeffs.resize(static_cast<size_t>(N) + 1);
    mpz_class dp1(ctx.d + 1);
    for (long i = 0; i <= N; ++i) {
        long k = N - i;
        mpz_class den;
        mpz_pow_ui(den.get_mpz_t(), dp1.get_mpz_t(), static_cast<unsigned long>((k + 1) / 2));
        mpz_class H = pow10_z(static_cast<long>(lg[static_cast<size_t>(k)]) + 3);
        RecognizedQuad r = recognize_quad_known_den(c[static_cast<size_t>(i)], ctx.D, den, H * den, P_eff);
        if (!r.ok) {
            mpz_class den2;
            mpz_pow_ui(den2.get_mpz_t(), dp1.get_mpz_t(), static_cast<unsigned long>(k));
            r = recognize_quad_known_den(c[static_cast<size_t>(i)], ctx.D, den2, H * den2, P_eff);
        }
        if (!r.ok) {
            out.ok = false;
            return out;
        }
        out.coeffs[static_cast<size_t>(i)] = QuadRational(r.p, r.q, ctx.D);
    }
    return out;
}

std::vector<Real> nu_magnitudes(const FieldContext& ctx, const ZetaTable& table, Prec bits) {
    std::vector<Real> out;
    out.reserve(table.alpha.size());
    for (const Real& a : table.alpha) out.push_back(sqrt(a.at_prec(bits) / (ctx.d + 1)));
    return out;
}

}  // namespace

SignAssignment resolve_signs_bruteforce(const FieldContext& ctx, const RayClassGroup& G,
                                        const ZetaTable& table) {
    long N = G.N;
    if (N > 20)
        throw RecognitionError("resolve_signs_bruteforce: 2^" + std::to_string(N - 1) +
                               " candidates is infeasible; use known_g or search");
    long P_eff = table.P + lfun_guard_digits();
    Prec bits = bits_for_digits(P_eff);
    std::vector<Real> mags = nu_magnitudes(ctx, table, bits);

    std::vector<int> winner;
    std::vector<QuadRational> winner_coeffs;
    long found = 0;
    for (unsigned long mask = 0; mask < (1ul << (N - 1)); ++mask) {
        std::vector<Real> nus = mags;
        for (long k = 1; k < N; ++k)
            if ((mask >> (k - 1)) & 1) nus[static_cast<size_t>(k)] = -nus[static_cast<size_t>(k)];
        ExpansionCheck chk = recognize_expansion(ctx, nus, P_eff, bits);
        if (chk.ok) {
            ++found;
            winner.assign(static_cast<size_t>(N), 1);
            for (long k = 1; k < N; ++k)
                if ((mask >> (k - 1)) & 1) winner[static_cast<size_t>(k)] = -1;
            winner_coeffs = std::move(chk.coeffs);
        }
    }
    if (found == 0) throw RecognitionError("resolve_signs_bruteforce: no admissible sign vector");
    if (found > 1)
        throw RecognitionError("resolve_signs_bruteforce: " + std::to_string(found) +
                               " admissible sign vectors (expected exactly one)");
    // pairing consistency: s_A s_{RA} = +1
    for (long k = 0; k < N; ++k)
        if (winner[static_cast<size_t>(k)] !=
            winner[static_cast<size_t>((k + G.R_index) % N)])
            throw RecognitionError("resolve_signs_bruteforce: winner violates the R-pairing");

    SignAssignment out;
    out.signs = winner;
    out.strategy = "bruteforce";
    out.global_sign_fixed = false;
    out.nus = mags;
    for (long k = 0; k < N; ++k)
        if (out.signs[static_cast<size_t>(k)] < 0) out.nus[static_cast<size_t>(k)] = -out.nus[static_cast<size_t>(k)];
    return out;
}

SignAssignment resolve_signs_known_g(const FieldContext& ctx, const RayClassGroup& G,
                                     const ZetaTable& table, const RecognizedPolynomial& g) {
    long N = G.N;
    if (g.degree() != N)
        throw RecognitionError("resolve_signs_known_g: supplied polynomial has degree " +
                               std::to_string(g.degree()) + ", expected " + std::to_string(N));
    long P_eff = table.P + lfun_guard_digits();
    Prec bits = bits_for_digits(P_eff);
    std::vector<Complex> croots = all_roots(g.complex_coeffs(bits), bits);
    Real imag_tol = Real::pow10(10 - P_eff, bits);
    std::vector<Real> roots;
    for (const Complex& z : croots) {
        if (!(abs(z.im) < imag_tol))
            throw RecognitionError("resolve_signs_known_g: supplied polynomial has a non-real root");
        roots.push_back(z.re);
    }
    std::vector<int> used(static_cast<size_t>(N), 0);
    std::vector<Real> nus(static_cast<size_t>(N), Real(0, bits));
    Real match_tol = Real::pow10(10 - table.P, bits);
    for (const Real& r : roots) {
        Real t = r * r * (ctx.d + 1);
        long best = -1;
        Real bestd(0, bits);
        for (long k = 0; k < N; ++k) {
            Real dd = abs(table.alpha[static_cast<size_t>(k)] - t);
            if (best < 0 || dd < bestd) {
                best = k;
                bestd = dd;
            }
        }
        if (!(bestd < match_tol * (abs(t) + 1)))
            throw RecognitionError("resolve_signs_known_g: root does not match any alpha (residual " +
                                   bestd.decimal(5) + ")");
        if (used[static_cast<size_t>(best)]++)
            throw RecognitionError("resolve_signs_known_g: matching is not injective");
        nus[static_cast<size_t>(best)] = r;
    }
    SignAssignment out;
    out.nus = std::move(nus);
    out.signs.assign(static_cast<size_t>(N), 1);
    for (long k = 0; k < N; ++k)
        if (out.nus[static_cast<size_t>(k)].sign() < 0) out.signs[static_cast<size_t>(k)] = -1;
    out.strategy = "known_g";
    out.global_sign_fixed = true;
    return out;
}

SignAssignment resolve_signs_search(const FieldContext& ctx, const RayClassGroup& G,
                                    const ZetaTable& table, const IdempotencyOracle& oracle,
                                    long budget, unsigned seed) {
    long N = G.N;
    long P_eff = table.P + lfun_guard_digits();
    Prec bits = bits_for_digits(P_eff);
    std::vector<Real> mags = nu_magnitudes(ctx, table, bits);
    std::mt19937 rng(seed);
    Real accept = Real::pow10(10 - table.P, bits);

    auto with_signs = [&](const std::vector<int>& s) {
        std::vector<Real> nus = mags;
        for (long k = 0; k < N; ++k)
            if (s[static_cast<size_t>(k)] < 0) nus[static_cast<size_t>(k)] = -nus[static_cast<size_t>(k)];
        return nus;
    };

    long used = 0;
    Real best_err(0, bits);
    bool have_best = false;
    while (used < budget) {
        std::vector<int> s(static_cast<size_t>(N), 1);
        // respect the R-pairing s_A = s_{RA}: flip orbit pairs together
        for (long k = 1; k < N / 2; ++k) {
            int v = (rng() & 1) ? 1 : -1;
            s[static_cast<size_t>(k)] = v;
            s[static_cast<size_t>((k + G.R_index) % N)] = v;
        }
        Real err = oracle(with_signs(s));
        ++used;
        for (long step = 0; step < 4 * N && used < budget; ++step) {
            long k = 1 + static_cast<long>(rng() % static_cast<unsigned long>(N - 1));
            std::vector<int> s2 = s;
            s2[static_cast<size_t>(k)] = -s2[static_cast<size_t>(k)];
            s2[static_cast<size_t>((k + G.R_index) % N)] = s2[static_cast<size_t>(k)];
            Real err2 = oracle(with_signs(s2));
            ++used;
            if (err2 < err) {
                s = std::move(s2);
                err = err2;
            }
            if (err < accept) break;
        }
        if (!have_best || err < best_err) {
            best_err = err;
            have_best = true;
        }
        if (err < accept) {
            SignAssignment out;
            out.signs = s;
            out.nus = with_signs(s);
            out.strategy = "search";
            out.global_sign_fixed = false;
            return out;
        }
    }
    throw RecognitionError("resolve_signs_search: budget " + std::to_string(budget) +
                           " exhausted; best idempotency error " + best_err.decimal(5));
}

RecognizedPolynomial build_g(const FieldContext& ctx, const std::vector<Real>& nus, long P) {
    long N = static_cast<long>(nus.size());
    long P_eff = P + lfun_guard_digits();
    Prec bits = bits_for_digits(P_eff);
    std::vector<Real> at_bits;
    for (const Real& r : nus) at_bits.push_back(r.at_prec(bits));
    ExpansionCheck chk = recognize_expansion(ctx, at_bits, P_eff, bits);
    if (!chk.ok)
        throw RecognitionError("build_g: a symmetric function failed to recognize over K (wrong signs "
                               "or insufficient precision)");
    // clear to integral coefficients: multiply by (d+1)^(N/2)
    mpz_class lead;
    mpz_class dp1(ctx.d + 1);
    mpz_pow_ui(lead.get_mpz_t(), dp1.get_mpz_t(), static_cast<unsigned long>(N / 2));
    RecognizedPolynomial g;
    g.d = ctx.d;
    g.D = ctx.D;
    g.role = "g";
    g.coeffs.resize(static_cast<size_t>(N) + 1);
    for (long i = 0; i <= N; ++i) {
        QuadRational c = chk.coeffs[static_cast<size_t>(i)];
        c.p *= mpq_class(lead);
        c.q *= mpq_class(lead);
        if (c.p.get_den() != 1 || c.q.get_den() != 1)
            throw RecognitionError("build_g: coefficient of x^" + std::to_string(i) +
                                   " is not integral after clearing");
        g.coeffs[static_cast<size_t>(i)] = c;
    }
    // every nu is a root
    Real tol = Real::pow10(15 - P_eff, bits);
    Real scale(0, bits);
    for (const auto& q : g.coeffs) scale += abs(q.rho1(bits));
    for (const Real& r : at_bits)
        if (!(abs(g.eval_rho1(r)) < tol * scale))
            throw RecognitionError("build_g: recognized polynomial fails at an input root");
    return g;
}

RecognizedPolynomial conjugate_poly(const RecognizedPolynomial& p) { return p.conjugated(); }

Real gtilde_root_modulus_deviation(const FieldContext& ctx, const RecognizedPolynomial& gtilde, long P) {
    Prec bits = bits_for_digits(P + lfun_guard_digits());
    std::vector<Complex> roots = all_roots(gtilde.complex_coeffs(bits), bits);
    Real target = 1 / sqrt(Real(ctx.d + 1, bits));
    Real worst(0, bits);
    for (const Complex& z : roots) {
        Real dev = abs(abs(z) - target);
        if (dev > worst) worst = dev;
    }
    return worst;
}

HPolynomials solve_h(const FieldContext& ctx, const RayClassGroup& G, const RecognizedPolynomial& g,
                     const std::vector<Real>& nus, long P) {
    long N = G.N;
    if (static_cast<long>(nus.size()) != N) throw RecognitionError("solve_h: nu vector has wrong length");

    std::vector<long> ladder = {std::max(2 * P, 160L), 420, 1000, 2200, 4800};
    std::string fail_note;
    for (long digits : ladder) {
        if (digits < 2 * P) continue;
        Prec wb = bits_for_digits(digits);
        // refine the nus on the exact g
        std::vector<Complex> gc = g.complex_coeffs(wb);
        std::vector<Real> nu(static_cast<size_t>(N), Real(0, wb));
        for (long k = 0; k < N; ++k) {
            Complex z = newton_polish(gc, Complex(nus[static_cast<size_t>(k)].at_prec(wb), Real(0, wb)), wb);
            nu[static_cast<size_t>(k)] = z.re;
        }

        // Vandermonde solve with partial pivoting: V c = rhs, V[k][j] = nu_k^j
        std::vector<std::vector<Real>> M(static_cast<size_t>(N));
        std::vector<Real> rhs(static_cast<size_t>(N), Real(0, wb));
        for (long k = 0; k < N; ++k) {
            M[static_cast<size_t>(k)].assign(static_cast<size_t>(N), Real(0, wb));
            Real pw(1, wb);
            for (long j = 0; j < N; ++j) {
                M[static_cast<size_t>(k)][static_cast<size_t>(j)] = pw;
                pw *= nu[static_cast<size_t>(k)];
            }
            rhs[static_cast<size_t>(k)] = nu[static_cast<size_t>((k + 1) % N)];
        }
        auto Mcopy = M;
        auto rhs_copy = rhs;
        std::vector<long> piv(static_cast<size_t>(N));
        bool singular = false;
        for (long col = 0; col < N && !singular; ++col) {
            long best = col;
            for (long r = col + 1; r < N; ++r)
                if (abs(M[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                    abs(M[static_cast<size_t>(best)][static_cast<size_t>(col)]))
                    best = r;
            std::swap(M[static_cast<size_t>(col)], M[static_cast<size_t>(best)]);
            std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(best)]);
            if (M[static_cast<size_t>(col)][static_cast<size_t>(col)].is_zero()) {
                singular = true;
                break;
            }
            for (long r = col + 1; r < N; ++r) {
                Real f = M[static_cast<size_t>(r)][static_cast<size_t>(col)] /
                         M[static_cast<size_t>(col)][static_cast<size_t>(col)];
                if (f.is_zero()) continue;
                for (long j = col; j < N; ++j)
                    M[static_cast<size_t>(r)][static_cast<size_t>(j)] -=
                        f * M[static_cast<size_t>(col)][static_cast<size_t>(j)];
                rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
            }
        }
        if (singular) {
            fail_note = "singular Vandermonde (duplicate nu values?)";
            continue;
        }
        std::vector<Real> cvec(static_cast<size_t>(N), Real(0, wb));
        for (long r = N; r-- > 0;) {
            Real acc = rhs[static_cast<size_t>(r)];
            for (long j = r + 1; j < N; ++j)
                acc -= M[static_cast<size_t>(r)][static_cast<size_t>(j)] * cvec[static_cast<size_t>(j)];
            cvec[static_cast<size_t>(r)] = acc / M[static_cast<size_t>(r)][static_cast<size_t>(r)];
        }
        // back-substitution residual
        Real vres(0, wb);
        for (long r = 0; r < N; ++r) {
            Real acc = -rhs_copy[static_cast<size_t>(r)];
            for (long j = 0; j < N; ++j)
                acc += Mcopy[static_cast<size_t>(r)][static_cast<size_t>(j)] * cvec[static_cast<size_t>(j)];
            Real a = abs(acc);
            if (a > vres) vres = a;
        }

        // recognize the c_j over K
        mpz_class H = pow10_z((digits - 30) / 3);
        RecognizedPolynomial h;
        h.d = ctx.d;
        h.D = ctx.D;
        h.role = "h";
        h.coeffs.resize(static_cast<size_t>(N));
        bool ok = true;
        for (long j = 0; j < N && ok; ++j) {
            RecognizedQuad r = recognize_quad(cvec[static_cast<size_t>(j)], ctx.D, H, digits);
            if (!r.ok) {
                ok = false;
                fail_note = "coefficient c_" + std::to_string(j) + " did not recognize at " +
                            std::to_string(digits) + " digits";
                break;
            }
            h.coeffs[static_cast<size_t>(j)] = QuadRational(r.p, r.q, ctx.D);
        }
        if (!ok) continue;

        // validate the orbit action h(nu_k) = nu_{k+1}
        Real ores(0, wb);
        for (long k = 0; k < N; ++k) {
            Real v = h.eval_rho1(nu[static_cast<size_t>(k)]) - nu[static_cast<size_t>((k + 1) % N)];
            Real a = abs(v);
            if (a > ores) ores = a;
        }
        Real otol = Real::pow10(-(digits / 2), wb);
        if (!(ores < otol)) {
            fail_note = "orbit validation failed at " + std::to_string(digits) + " digits";
            continue;
        }

        HPolynomials out;
        out.h = h;
        out.htilde = h.conjugated();
        out.vandermonde_residual = vres;
        out.orbit_residual = ores;
        out.digits_used = digits;
        return out;
    }
    throw RecognitionError("solve_h: " + (fail_note.empty() ? std::string("no ladder step succeeded")
                                                            : fail_note) +
                           "; increase precision");
}

}  // namespace starksic
