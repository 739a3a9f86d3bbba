#include "starksic/lfun.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "starksic/parallel.hpp"

namespace starksic {

DirichletCoeffs class_counts(const FieldContext& ctx, const RayClassGroup& G, long X) {
    if (ctx.class_number != 1)
        throw LfunError("class_counts: class number " + std::to_string(ctx.class_number) + " unsupported");
    if (X < 1) throw LfunError("class_counts: X must be positive");
    DirichletCoeffs dc;
    dc.X = X;
    dc.N = G.N;
    dc.counts.assign(static_cast<size_t>(G.N) * (X + 1), 0);
    for_each_ideal(ctx, X, [&](long n, const QuadRational& g) {
        if (n % ctx.d == 0) return;  // not coprime to the modulus
        long k = G.class_of_element(g);
        dc.counts[static_cast<size_t>(k) * (X + 1) + n]++;
    });
    if (dc.at(0, 1) != 1) throw LfunError("class_counts: identity class must contain exactly the unit ideal");
    return dc;
}

std::vector<std::vector<std::pair<int, int>>> DirichletCoeffs::by_norm() const {
    std::vector<std::vector<std::pair<int, int>>> out(static_cast<size_t>(X) + 1);
    for (long k = 0; k < N; ++k)
        for (long n = 1; n <= X; ++n) {
            int c = at(k, n);
            if (c) out[static_cast<size_t>(n)].emplace_back(static_cast<int>(k), c);
        }
    return out;
}

long default_coeff_bound(long Q, long P) {
    double Pw = static_cast<double>(P + lfun_guard_digits() + 5);
    double Cp = std::sqrt(static_cast<double>(Q)) / (2 * M_PI);
    double x = Cp * Pw * std::log(10.0);
    for (int i = 0; i < 4; ++i)
        x = Cp * (Pw * std::log(10.0) + std::log(3.0 * (x + Cp) * (Cp + 1.0)) + 1.0);
    return static_cast<long>(std::ceil(x)) + 32;
}

KernelTables build_kernel_tables(long Q, long X, long P, int threads) {
    KernelTables K;
    K.Q = Q;
    K.X = X;
    Prec bits = bits_for_digits(P + lfun_guard_digits()) + 24;
    K.bits = bits;
    Real q(Q, bits + 32);
    K.Cprime = (sqrt(q) / (2 * Real::pi(bits + 32))).at_prec(bits);

    auto geometric = [&](const Real& t) {
        // exp(-n t / C') for n = 1..X by iterated multiplication
        std::vector<Real> v(static_cast<size_t>(X) + 1, Real(0, bits));
        Real r = exp(-(t / K.Cprime));
        Real cur(1, bits);
        for (long n = 1; n <= X; ++n) {
            cur *= r;
            v[static_cast<size_t>(n)] = cur;
        }
        return v;
    };

    K.t0 = Real::from_decimal("1.0825", bits);
    K.t1 = Real::from_decimal("1.2103", bits);
    K.t2 = Real::from_decimal("0.8744", bits);
    K.exp1 = geometric(Real(1, bits));
    K.th_t0 = geometric(K.t0);
    K.th_inv_t0 = geometric(1 / K.t0);
    K.th_t1 = geometric(K.t1);
    K.th_inv_t1 = geometric(1 / K.t1);
    K.th_t2 = geometric(K.t2);
    K.th_inv_t2 = geometric(1 / K.t2);

    K.e1.assign(static_cast<size_t>(X) + 1, Real(0, bits));
    parallel_for(static_cast<size_t>(X), threads, [&](size_t i) {
        long n = static_cast<long>(i) + 1;
        Real x = Real(n, bits) / K.Cprime;
        K.e1[static_cast<size_t>(n)] = exp_integral_e1(x, bits);
    });

    K.s0 = Real::pow10(-(P / 2 + 2), bits);
    K.k1_s0.assign(static_cast<size_t>(X) + 1, Real(0, bits));
    K.k2_s0.assign(static_cast<size_t>(X) + 1, Real(0, bits));
    Real one_minus_s0 = 1 - K.s0;
    parallel_for(static_cast<size_t>(X), threads, [&](size_t i) {
        long n = static_cast<long>(i) + 1;
        Real x = Real(n, bits) / K.Cprime;
        Real lx = log(x);
        K.k1_s0[static_cast<size_t>(n)] = exp(-(K.s0 * lx)) * upper_gamma(K.s0, x, bits);
        K.k2_s0[static_cast<size_t>(n)] = exp((K.s0 - 1) * lx) * upper_gamma(one_minus_s0, x, bits);
    });
    return K;
}

namespace {

struct CharSums {
    Complex S1, S2;          // sum a_n E1(n/C'), sum (a_n/n) exp(-n/C')
    Complex T_t0, T_inv_t0;  // theta values at the test points
    Complex T_t1, T_inv_t1;
    Complex T_t2, T_inv_t2;
    Complex K1, K2;          // offset-s kernels for the |L(0)| gate
};

CharSums char_pass(const RayClassGroup& G, long j,
                   const std::vector<std::vector<std::pair<int, int>>>& sparse,
                   const KernelTables& K) {
    Prec bits = K.bits;
    std::vector<Complex> root(static_cast<size_t>(G.N), Complex(bits));
    for (long k = 0; k < G.N; ++k) root[static_cast<size_t>(k)] = G.character_value(j, k, bits);

    CharSums s{Complex(bits), Complex(bits), Complex(bits), Complex(bits), Complex(bits),
               Complex(bits), Complex(bits), Complex(bits), Complex(bits), Complex(bits)};
    Complex a(bits);
    for (long n = 1; n <= K.X; ++n) {
        const auto& row = sparse[static_cast<size_t>(n)];
        if (row.empty()) continue;
        if (row.size() == 1 && row[0].second == 1) {
            a.re = root[static_cast<size_t>(row[0].first)].re;
            a.im = root[static_cast<size_t>(row[0].first)].im;
        } else {
            mpfr_set_zero(a.re.raw(), 1);
            mpfr_set_zero(a.im.raw(), 1);
            for (auto [k, c] : row) a.addmul_si(root[static_cast<size_t>(k)], c);
        }
        size_t un = static_cast<size_t>(n);
        s.S1.addmul_real(a, K.e1[un]);
        s.S2.addmul_real(a, K.exp1[un] / n);
        s.T_t0.addmul_real(a, K.th_t0[un]);
        s.T_inv_t0.addmul_real(a, K.th_inv_t0[un]);
        s.T_t1.addmul_real(a, K.th_t1[un]);
        s.T_inv_t1.addmul_real(a, K.th_inv_t1[un]);
        s.T_t2.addmul_real(a, K.th_t2[un]);
        s.T_inv_t2.addmul_real(a, K.th_inv_t2[un]);
        s.K1.addmul_real(a, K.k1_s0[un]);
        s.K2.addmul_real(a, K.k2_s0[un]);
    }
    return s;
}

Complex solve_w_from_sums(LFunctionSpec& spec, const CharSums& s, const KernelTables& K) {
    // Theta_chibar(t) = conj(Theta_chi(t)): kernels are real, counts integral.
    Real scale = abs(s.T_t0) + abs(s.T_inv_t0);
    if (scale < Real::pow10(-(spec.P / 2), K.bits))
        throw LfunError("solve_root_number: theta value vanishes at the test point");
    Complex W = s.T_inv_t0 / (conj(s.T_t0) * K.t0);
    Real wabs = abs(W);
    spec.w_delta = abs(wabs - 1);
    if (spec.w_delta > Real::pow10(5 - spec.P, K.bits))
        throw LfunError("solve_root_number: |W| deviates from 1 by " + spec.w_delta.decimal(5) +
                        " (wrong conductor or parity)");
    W.re /= wabs;
    W.im /= wabs;
    Real tol = Real::pow10(3 - spec.P, K.bits);
    spec.fe_res1 = abs(s.T_inv_t1 - W * conj(s.T_t1) * K.t1);
    spec.fe_res2 = abs(s.T_inv_t2 - W * conj(s.T_t2) * K.t2);
    if (spec.fe_res1 > tol || spec.fe_res2 > tol)
        throw LfunError("solve_root_number: functional equation residuals " + spec.fe_res1.decimal(5) +
                        ", " + spec.fe_res2.decimal(5) + " above tolerance");
    return W;
}

Complex lprime_from_sums(LFunctionSpec& spec, const CharSums& s, const KernelTables& K, Real* l0_out) {
    Complex lp = s.S1 + spec.W * conj(s.S2) * K.Cprime;
    // |L(0)| gate: L(s0) from the completed-function kernels minus the
    // linear term s0 L'(0).
    Prec bits = K.bits;
    Complex lambda_s0 = s.K1 + spec.W * conj(s.K2);
    Real g(bits);
    mpfr_gamma(g.raw(), K.s0.raw(), MPFR_RNDN);
    Real cpow = exp(K.s0 * log(K.Cprime));
    Real denom = g * cpow;
    Complex l_s0{lambda_s0.re / denom, lambda_s0.im / denom};
    Complex l0 = l_s0 - Complex(lp.re * K.s0, lp.im * K.s0);
    Real l0_abs = abs(l0);
    if (l0_out) *l0_out = l0_abs;
    if (l0_abs > Real::pow10(5 - spec.P, bits))
        throw LfunError("lprime_at_zero: |L(0,chi)| = " + l0_abs.decimal(5) +
                        " is not small (conductor/parity bug)");
    return lp;
}

}  // namespace

Complex solve_root_number(LFunctionSpec& spec, const DirichletCoeffs& coeffs, const KernelTables& K) {
    if (spec.G->character_at_R(spec.j) != -1)
        throw LfunError("solve_root_number: character does not contribute (chi(R) = +1)");
    CharSums s = char_pass(*spec.G, spec.j, coeffs.by_norm(), K);
    spec.W = solve_w_from_sums(spec, s, K);
    return spec.W;
}

Complex lprime_at_zero(LFunctionSpec& spec, const DirichletCoeffs& coeffs, const KernelTables& K,
                       Real* l0_estimate) {
    if (spec.G->character_at_R(spec.j) != -1)
        throw LfunError("lprime_at_zero: character does not contribute (chi(R) = +1)");
    CharSums s = char_pass(*spec.G, spec.j, coeffs.by_norm(), K);
    spec.W = solve_w_from_sums(spec, s, K);
    return lprime_from_sums(spec, s, K, l0_estimate);
}

static uint64_t fnv1a(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ZetaTable zeta_derivative_table(const FieldContext& ctx, const RayClassGroup& G, const LfunOptions& opt) {
    if (ctx.class_number != 1)
        throw LfunError("zeta_derivative_table: requires class number 1");
    long P = opt.P;
    Prec bits = bits_for_digits(P + lfun_guard_digits()) + 24;

    std::vector<long> contributing;
    for (long j = 0; j < G.N; ++j)
        if (G.character_at_R(j) == -1) contributing.push_back(j);

    std::vector<long> q_candidates = {ctx.disc * ctx.d * ctx.d, ctx.disc};
    std::string last_error;
    for (long Q : q_candidates) {
        long X = opt.X_override > 0 ? opt.X_override : default_coeff_bound(Q, P);

        if (!opt.cache_dir.empty()) {
            auto cached = load_zeta_table(ctx.d, P, X, G.N, opt.cache_dir);
            if (cached && cached->Q == Q) return *cached;
        }

        DirichletCoeffs coeffs = class_counts(ctx, G, X);
        auto sparse = coeffs.by_norm();
        KernelTables K = build_kernel_tables(Q, X, P, opt.threads);

        std::vector<LChar> chars(contributing.size());
        std::vector<std::string> errors(contributing.size());
        parallel_for(contributing.size(), opt.threads, [&](size_t i) {
            long j = contributing[i];
            try {
                LFunctionSpec spec;
                spec.G = &G;
                spec.j = j;
                spec.Q = Q;
                spec.P = P;
                CharSums s = char_pass(G, j, sparse, K);
                spec.W = solve_w_from_sums(spec, s, K);
                Real l0(bits);
                Complex lp = lprime_from_sums(spec, s, K, &l0);
                chars[i] = LChar{j, spec.W, lp, spec.w_delta, spec.fe_res1, spec.fe_res2, l0};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
        bool failed = false;
        for (size_t i = 0; i < errors.size(); ++i)
            if (!errors[i].empty()) {
                failed = true;
                last_error = "chi_" + std::to_string(contributing[i]) + ": " + errors[i];
                break;
            }
        if (failed) continue;  // retry with the next conductor candidate

        ZetaTable T;
        T.d = ctx.d;
        T.P = P;
        T.X = X;
        T.N = G.N;
        T.Q = Q;
        T.chars = std::move(chars);
        T.zprime.assign(static_cast<size_t>(G.N), Real(0, bits));
        T.alpha.assign(static_cast<size_t>(G.N), Real(0, bits));
        T.max_imag = Real(0, bits);
        Real imag_tol = Real::pow10(5 - P, bits);
        for (long k = 0; k < G.N; ++k) {
            Complex z(bits);
            for (const LChar& c : T.chars) {
                Complex chbar = conj(G.character_value(c.j, k, bits));
                Complex term = chbar * c.lprime;
                z += term + term;  // factor (1 - chi(R)) = 2 for contributing chi
            }
            z = z / G.N;
            Real ai = abs(z.im);
            if (ai > T.max_imag) T.max_imag = ai;
            if (ai > imag_tol)
                throw LfunError("zeta_derivative_table: Z'_A(0) has imaginary part " + ai.decimal(5));
            T.zprime[static_cast<size_t>(k)] = z.re;
            T.alpha[static_cast<size_t>(k)] = exp(z.re);
        }

        if (!opt.cache_dir.empty()) save_zeta_table(T, opt.cache_dir);
        return T;
    }
    throw LfunError("zeta_derivative_table: no conductor candidate validated; last error: " + last_error);
}

std::string zeta_cache_filename(long d, long P) {
    return "zeta_d" + std::to_string(d) + "_P" + std::to_string(P) + ".txt";
}

static std::string table_payload(const ZetaTable& T, long digits) {
    std::ostringstream os;
    os << "d " << T.d << "\nP " << T.P << "\nX " << T.X << "\nN " << T.N << "\nQ " << T.Q << "\n";
    os << "chars " << T.chars.size() << "\n";
    for (const LChar& c : T.chars)
        os << "J " << c.j << " W " << c.W.re.decimal(digits) << " " << c.W.im.decimal(digits) << " LP "
           << c.lprime.re.decimal(digits) << " " << c.lprime.im.decimal(digits) << "\n";
    for (long k = 0; k < T.N; ++k)
        os << "Z " << k << " " << T.zprime[static_cast<size_t>(k)].decimal(digits) << "\n";
    for (long k = 0; k < T.N; ++k)
        os << "A " << k << " " << T.alpha[static_cast<size_t>(k)].decimal(digits) << "\n";
    return os.str();
}

void save_zeta_table(const ZetaTable& T, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    long digits = T.P + lfun_guard_digits();
    std::string payload = table_payload(T, digits);
    char buf[32];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
    std::ofstream out(fs::path(dir) / zeta_cache_filename(T.d, T.P));
    out << "starksic-zeta-cache 1\n" << "digits " << digits << "\n" << "checksum " << buf << "\n" << payload;
}

std::optional<ZetaTable> load_zeta_table(long d, long P, long X_expected, long N, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path file = fs::path(dir) / zeta_cache_filename(d, P);
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::string magic, tag;
    int version = 0;
    long digits = 0;
    in >> magic >> version >> tag >> digits;
    if (magic != "starksic-zeta-cache" || version != 1 || tag != "digits") return std::nullopt;
    std::string cs_tag, cs_hex;
    in >> cs_tag >> cs_hex;
    if (cs_tag != "checksum") return std::nullopt;
    in.ignore();
    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[32];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
    if (cs_hex != buf) throw LfunError("zeta cache: checksum mismatch in " + file.string());

    ZetaTable T;
    Prec bits = bits_for_digits(P + lfun_guard_digits()) + 24;
    std::istringstream is(payload);
    std::string key;
    long nchars = 0;
    is >> key >> T.d >> key >> T.P >> key >> T.X >> key >> T.N >> key >> T.Q >> key >> nchars;
    if (T.d != d || T.P != P || T.N != N) return std::nullopt;
    if (X_expected > 0 && T.X != X_expected) return std::nullopt;
    T.zprime.assign(static_cast<size_t>(T.N), Real(0, bits));
    T.alpha.assign(static_cast<size_t>(T.N), Real(0, bits));
    T.max_imag = Real(0, bits);
    for (long i = 0; i < nchars; ++i) {
        LChar c;
        std::string wre, wim, lre, lim;
        is >> key >> c.j >> key >> wre >> wim >> key >> lre >> lim;
        c.W = Complex(Real::from_decimal(wre, bits), Real::from_decimal(wim, bits));
        c.lprime = Complex(Real::from_decimal(lre, bits), Real::from_decimal(lim, bits));
        c.w_delta = Real(0, bits);
        c.fe_res1 = Real(0, bits);
        c.fe_res2 = Real(0, bits);
        c.l0_abs = Real(0, bits);
        T.chars.push_back(std::move(c));
    }
    for (long k = 0; k < T.N; ++k) {
        long idx;
        std::string val;
        is >> key >> idx >> val;
        if (key != "Z") return std::nullopt;
        T.zprime[static_cast<size_t>(idx)] = Real::from_decimal(val, bits);
    }
    for (long k = 0; k < T.N; ++k) {
        long idx;
        std::string val;
        is >> key >> idx >> val;
        if (key != "A") return std::nullopt;
        T.alpha[static_cast<size_t>(idx)] = Real::from_decimal(val, bits);
    }
    if (!is) return std::nullopt;
    T.from_cache = true;
    return T;
}

}  // namespace starksic
