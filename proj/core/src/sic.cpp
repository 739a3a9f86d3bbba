#include "starksic/sic.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "starksic/parallel.hpp"

namespace starksic {

BigComplexMatrix BigComplexMatrix::identity(long n, Prec bits) {
    BigComplexMatrix I(n, bits);
    for (long i = 0; i < n; ++i) I.at(i, i) = Complex(1, bits);
    return I;
}

BigComplexMatrix BigComplexMatrix::multiply(const BigComplexMatrix& o) const {
    BigComplexMatrix r(n_, bits_);
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j) {
            Complex acc(bits_);
            for (long k = 0; k < n_; ++k) acc.addmul(at(i, k), o.at(k, j));
            r.at(i, j) = std::move(acc);
        }
    return r;
}

BigComplexMatrix BigComplexMatrix::adjoint() const {
    BigComplexMatrix r(n_, bits_);
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j) r.at(i, j) = conj(at(j, i));
    return r;
}

Real BigComplexMatrix::max_abs_diff(const BigComplexMatrix& o) const {
    Real worst(0, bits_);
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j) {
            Real v = abs(at(i, j) - o.at(i, j));
            if (v > worst) worst = v;
        }
    return worst;
}

Real BigComplexMatrix::max_abs() const {
    Real worst(0, bits_);
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j) {
            Real v = abs(at(i, j));
            if (v > worst) worst = v;
        }
    return worst;
}

Complex BigComplexMatrix::trace() const {
    Complex t(bits_);
    for (long i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

namespace {

// phase table: P[t] = exp(i pi t / d) for t in [0, 2d)
std::vector<Complex> phase_table(long d, Prec bits) {
    std::vector<Complex> P(static_cast<size_t>(2 * d), Complex(bits));
    for (long t = 0; t < 2 * d; ++t) {
        Real ang = Real(t, bits + 16) / Real(d, bits + 16);
        if (ang > Real(1, bits + 16)) ang -= 2;
        P[static_cast<size_t>(t)] = exp_i_pi(ang.at_prec(bits));
    }
    return P;
}

inline long md(long x, long m) { return ((x % m) + m) % m; }

}  // namespace

BigComplexMatrix displacement(long d, long m, long n, Prec bits) {
    if (d < 2 || d % 2 == 0) throw SicError("displacement: d must be odd and > 1");
    m = md(m, d);
    n = md(n, d);
    auto P = phase_table(d, bits);
    BigComplexMatrix D(d, bits);
    // D[j,k] = tau^{mn} zeta^{nk} for j = k+m mod d; tau^t = exp(i pi (d+1) t / d)
    for (long k = 0; k < d; ++k) {
        long e = md((d + 1) * m % (2 * d) * n + 2 * n * k, 2 * d);
        D.at(md(k + m, d), k) = P[static_cast<size_t>(e)];
    }
    return D;
}

BigComplexMatrix build_weighted_displacement_sum(long d, const std::vector<Complex>& nu_mn, long lambda,
                                                 Prec bits) {
    if (static_cast<long>(nu_mn.size()) != d * d)
        throw SicError("build_weighted_displacement_sum: nu table must have d^2 entries");
    auto P = phase_table(d, bits);
    BigComplexMatrix M(d, bits);
    for (long j = 0; j < d; ++j)
        for (long k = 0; k < d; ++k) {
            long m = md(k - j, d);    // D_{-m,*} hits row j from column k when m = k-j
            long mp = md(j - k, d);   // the actual first index of D: -m mod d
            Complex acc(bits);
            for (long n = 0; n < d; ++n) {
                long np = md(-lambda * n, d);
                long e = md((d + 1) * mp % (2 * d) * np + 2 * np * k, 2 * d);
                acc.addmul(nu_mn[static_cast<size_t>(m * d + n)], P[static_cast<size_t>(e)]);
            }
            M.at(j, k) = acc / d;
        }
    return M;
}

MDiagnostics m_diagnostics(const BigComplexMatrix& M) {
    Prec bits = M.prec();
    long d = M.size();
    MDiagnostics out{Real(0, bits), Real(0, bits), Real(0, bits), Real(0, bits)};
    BigComplexMatrix M2 = M.multiply(M);
    out.idem_err = M2.max_abs_diff(M);
    out.herm_err = M.max_abs_diff(M.adjoint());

    // all 2x2 minors
    for (long r1 = 0; r1 < d; ++r1)
        for (long r2 = r1 + 1; r2 < d; ++r2)
            for (long c1 = 0; c1 < d; ++c1)
                for (long c2 = c1 + 1; c2 < d; ++c2) {
                    Complex det = M.at(r1, c1) * M.at(r2, c2) - M.at(r1, c2) * M.at(r2, c1);
                    Real a = abs(det);
                    if (a > out.minor_max) out.minor_max = a;
                }

    // sigma_2 proxy: power iteration on A = M* M, deflating the top vector
    BigComplexMatrix A = M.adjoint().multiply(M);
    auto matvec = [&](const std::vector<Complex>& x) {
        std::vector<Complex> y(static_cast<size_t>(d), Complex(bits));
        for (long i = 0; i < d; ++i) {
            Complex acc(bits);
            for (long k = 0; k < d; ++k) acc.addmul(A.at(i, k), x[static_cast<size_t>(k)]);
            y[static_cast<size_t>(i)] = std::move(acc);
        }
        return y;
    };
    auto normalize = [&](std::vector<Complex>& x) {
        Real n2(0, bits);
        for (const Complex& z : x) n2 += abs2(z);
        Real nn = sqrt(n2);
        if (nn.is_zero()) return nn;
        for (Complex& z : x) z = Complex(z.re / nn, z.im / nn);
        return nn;
    };
    std::vector<Complex> u(static_cast<size_t>(d), Complex(bits));
    for (long i = 0; i < d; ++i) u[static_cast<size_t>(i)] = Complex(Real(1 + i, bits), Real(1, bits) / (2 + i));
    normalize(u);
    Real s1(0, bits);
    for (int it = 0; it < 60; ++it) {
        u = matvec(u);
        s1 = normalize(u);
        if (s1.is_zero()) break;
    }
    std::vector<Complex> w(static_cast<size_t>(d), Complex(bits));
    for (long i = 0; i < d; ++i)
        w[static_cast<size_t>(i)] = Complex(Real(2, bits) / (1 + i), Real(i - 1, bits) / 3);
    auto deflate = [&](std::vector<Complex>& x) {
        Complex ip(bits);
        for (long i = 0; i < d; ++i) ip += conj(u[static_cast<size_t>(i)]) * x[static_cast<size_t>(i)];
        for (long i = 0; i < d; ++i) x[static_cast<size_t>(i)] -= u[static_cast<size_t>(i)] * ip;
    };
    deflate(w);
    normalize(w);
    Real s2(0, bits);
    for (int it = 0; it < 60; ++it) {
        w = matvec(w);
        deflate(w);
        s2 = normalize(w);
        if (s2.is_zero()) break;
    }
    // s2 approximates sigma_2^2
    out.second_singular = sqrt(abs(s2));
    return out;
}

static std::vector<Complex> class_nus_to_mn(const FieldContext& ctx, const RayClassGroup& G,
                                            const std::vector<Complex>& by_class, Prec bits) {
    long d = ctx.d;
    std::vector<Complex> nu_mn(static_cast<size_t>(d * d), Complex(bits));
    nu_mn[0] = Complex(1, bits);
    for (long m = 0; m < d; ++m)
        for (long n = 0; n < d; ++n) {
            if (m == 0 && n == 0) continue;
            long k = G.amn_class(static_cast<int>(m), static_cast<int>(n));
            nu_mn[static_cast<size_t>(m * d + n)] = by_class[static_cast<size_t>(k)].at_prec(bits);
        }
    return nu_mn;
}

MDiagnostics build_M_diagnostics(const FieldContext& ctx, const RayClassGroup& G,
                                 const std::vector<Real>& nus_by_class, Prec bits) {
    std::vector<Complex> by_class;
    by_class.reserve(nus_by_class.size());
    for (const Real& r : nus_by_class) by_class.emplace_back(r.at_prec(bits), Real(0, bits));
    std::vector<Complex> nu_mn = class_nus_to_mn(ctx, G, by_class, bits);
    BigComplexMatrix M = build_weighted_displacement_sum(ctx.d, nu_mn, 1, bits);
    return m_diagnostics(M);
}

Real idempotency_error_for_nus(const FieldContext& ctx, const RayClassGroup& G,
                               const std::vector<Real>& nus_by_class, Prec bits) {
    std::vector<Complex> by_class;
    by_class.reserve(nus_by_class.size());
    for (const Real& r : nus_by_class) by_class.emplace_back(r.at_prec(bits), Real(0, bits));
    std::vector<Complex> nu_mn = class_nus_to_mn(ctx, G, by_class, bits);
    BigComplexMatrix M = build_weighted_displacement_sum(ctx.d, nu_mn, 1, bits);
    BigComplexMatrix M2 = M.multiply(M);
    return M2.max_abs_diff(M);
}

HtildeOrbit compute_htilde_orbit(const FieldContext& ctx, const RayClassGroup& G,
                                 const RecognizedPolynomial& gtilde, const RecognizedPolynomial& htilde,
                                 long P) {
    long N = G.N;
    long d = ctx.d;
    if (gtilde.degree() != N) throw SicError("assign_conjugate_overlaps: gtilde degree mismatch");

    // working precision must absorb the htilde coefficient heights
    long hheight = 0;
    for (const QuadRational& c : htilde.coeffs) {
        long sz = static_cast<long>(mpz_sizeinbase(c.p.get_num().get_mpz_t(), 10)) +
                  static_cast<long>(mpz_sizeinbase(c.p.get_den().get_mpz_t(), 10));
        hheight = std::max(hheight, sz);
        sz = static_cast<long>(mpz_sizeinbase(c.q.get_num().get_mpz_t(), 10)) +
             static_cast<long>(mpz_sizeinbase(c.q.get_den().get_mpz_t(), 10));
        hheight = std::max(hheight, sz);
    }
    long wd = P + lfun_guard_digits() + hheight + 24;
    Prec wb = bits_for_digits(wd);

    std::vector<Complex> gc = gtilde.complex_coeffs(wb);
    std::vector<Complex> hc = htilde.complex_coeffs(wb);
    std::vector<Complex> roots = all_roots(gc, wb);

    // canonical start: largest real part, ties by imaginary part
    size_t canon = 0;
    for (size_t i = 1; i < roots.size(); ++i) {
        if (roots[i].re > roots[canon].re ||
            (roots[i].re == roots[canon].re && roots[i].im > roots[canon].im))
            canon = i;
    }
    HtildeOrbit out;
    out.orbit.reserve(static_cast<size_t>(N));
    out.orbit.push_back(roots[canon]);
    for (long k = 1; k < N; ++k) {
        Complex next = poly_eval(hc, out.orbit.back());
        next = newton_polish(gc, next, wb);
        out.orbit.push_back(std::move(next));
    }

    // orbit must reproduce the root multiset
    out.match_residual = Real(0, wb);
    std::vector<bool> used(roots.size(), false);
    for (const Complex& r : out.orbit) {
        long best = -1;
        Real bestd(0, wb);
        for (size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            Real dd = abs(roots[i] - r);
            if (best < 0 || dd < bestd) {
                best = static_cast<long>(i);
                bestd = dd;
            }
        }
        if (best < 0 || !(bestd < Real::pow10(10 - P, wb)))
            throw SicError("assign_conjugate_overlaps: htilde orbit does not close on the roots of gtilde");
        used[static_cast<size_t>(best)] = true;
        if (bestd > out.match_residual) out.match_residual = bestd;
    }

    Real target = 1 / sqrt(Real(d + 1, wb));
    out.modulus_deviation = Real(0, wb);
    for (const Complex& r : out.orbit) {
        Real dev = abs(abs(r) - target);
        if (dev > out.modulus_deviation) out.modulus_deviation = dev;
    }
    if (!(out.modulus_deviation < Real::pow10(10 - P, wb)))
        throw SicError("assign_conjugate_overlaps: orbit values leave the circle of radius 1/sqrt(d+1)");
    return out;
}

std::vector<Complex> overlaps_from_orbit(const FieldContext& ctx, const RayClassGroup& G,
                                         const HtildeOrbit& orb, long root_index, Prec bits) {
    long N = G.N;
    std::vector<Complex> by_class(static_cast<size_t>(N), Complex(bits));
    for (long k = 0; k < N; ++k)
        by_class[static_cast<size_t>(k)] =
            orb.orbit[static_cast<size_t>(md(root_index + k, N))].at_prec(bits);
    return class_nus_to_mn(ctx, G, by_class, bits);
}

OverlapAssignment assign_conjugate_overlaps(const FieldContext& ctx, const RayClassGroup& G,
                                            const RecognizedPolynomial& gtilde,
                                            const RecognizedPolynomial& htilde, long lambda,
                                            long root_index, long P) {
    HtildeOrbit orb = compute_htilde_orbit(ctx, G, gtilde, htilde, P);
    OverlapAssignment out;
    out.d = ctx.d;
    out.lambda = lambda;
    out.root_index = root_index;
    out.orbit_match_residual = orb.match_residual;
    out.modulus_deviation = orb.modulus_deviation;
    out.nu_mn = overlaps_from_orbit(ctx, G, orb, root_index, bits_for_digits(P + lfun_guard_digits()));
    return out;
}

static FiducialCertificate certify(long d, const std::vector<Complex>& v, long P, Prec bits);

std::optional<std::vector<Complex>> extract_fiducial(const BigComplexMatrix& M, long P, Real* extract_err,
                                                     Real* idem_err) {
    long d = M.size();
    Prec bits = M.prec();
    Real thr = Real::pow10(10 - P, bits);
    BigComplexMatrix M2 = M.multiply(M);
    Real idem = M2.max_abs_diff(M);
    if (idem_err) *idem_err = idem;
    if (!(idem < thr)) return std::nullopt;

    long best_col = 0;
    Real best_norm(0, bits);
    for (long j = 0; j < d; ++j) {
        Real nn(0, bits);
        for (long r = 0; r < d; ++r) nn += abs2(M.at(r, j));
        if (nn > best_norm) {
            best_norm = nn;
            best_col = j;
        }
    }
    std::vector<Complex> v(static_cast<size_t>(d), Complex(bits));
    for (long r = 0; r < d; ++r) v[static_cast<size_t>(r)] = M.at(r, best_col);
    Real n2(0, bits);
    for (const Complex& z : v) n2 += abs2(z);
    if (n2.is_zero()) return std::nullopt;
    Real nn = sqrt(n2);
    for (Complex& z : v) z = Complex(z.re / nn, z.im / nn);
    phase_normalize(v);

    Real ext(0, bits);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) {
            Real diff = abs(v[static_cast<size_t>(r)] * conj(v[static_cast<size_t>(c)]) - M.at(r, c));
            if (diff > ext) ext = diff;
        }
    if (extract_err) *extract_err = ext;
    if (!(ext < thr)) return std::nullopt;
    return v;
}

FiducialCertificate lambda_search_and_extract(const FieldContext& ctx, const RayClassGroup& G,
                                              const RecognizedPolynomial& gtilde,
                                              const RecognizedPolynomial& htilde, long P, int threads,
                                              long lambda_override, std::vector<LambdaOutcome>* outcomes,
                                              long root_index) {
    long d = ctx.d;
    Prec bits = bits_for_digits(P + lfun_guard_digits());
    HtildeOrbit orb = compute_htilde_orbit(ctx, G, gtilde, htilde, P);
    std::vector<Complex> nu_mn = overlaps_from_orbit(ctx, G, orb, root_index, bits);

    std::vector<long> lambdas;
    if (lambda_override > 0)
        lambdas.push_back(lambda_override % d);
    else
        for (long l = 1; l < d; ++l) lambdas.push_back(l);

    Real thr = Real::pow10(10 - P, bits);
    std::vector<FiducialCertificate> certs(lambdas.size());
    std::vector<int> ok(lambdas.size(), 0);
    std::vector<std::string> errs(lambdas.size());

    parallel_for(lambdas.size(), threads, [&](size_t i) {
        long lambda = lambdas[i];
        BigComplexMatrix M = build_weighted_displacement_sum(d, nu_mn, lambda, bits);
        Real idem(bits), ext(bits);
        std::optional<std::vector<Complex>> v = extract_fiducial(M, P, &ext, &idem);
        errs[i] = idem.decimal(5);
        if (!v) return;
        MDiagnostics diag = m_diagnostics(M);
        if (!(diag.herm_err < thr) || !(diag.minor_max < thr) || !(diag.second_singular < thr)) return;

        FiducialCertificate cert = certify(d, *v, P, bits);
        cert.lambda = lambda;
        cert.idem_err = idem;
        cert.herm_err = diag.herm_err;
        cert.minor_max = diag.minor_max;
        cert.second_singular = diag.second_singular;
        cert.extract_err = ext;
        certs[i] = std::move(cert);
        ok[i] = certs[i].valid ? 1 : 0;
    });

    if (outcomes) {
        outcomes->clear();
        for (size_t i = 0; i < lambdas.size(); ++i)
            outcomes->push_back({lambdas[i], ok[i] != 0, errs[i]});
    }
    for (size_t i = 0; i < lambdas.size(); ++i)
        if (ok[i]) return certs[i];

    std::string report = "lambda_search_and_extract: no lambda validated (idempotency errors:";
    for (size_t i = 0; i < lambdas.size(); ++i)
        report += " " + std::to_string(lambdas[i]) + ":" + errs[i];
    report += "); wrong signs, global sign, or htilde";
    throw SicError(report);
}

static FiducialCertificate certify(long d, const std::vector<Complex>& v, long P, Prec bits) {
    FiducialCertificate cert;
    cert.d = d;
    cert.P = P;
    cert.v = v;
    cert.e_max = Real(0, bits);
    cert.norm_err = Real(0, bits);
    cert.idem_err = Real(0, bits);
    cert.herm_err = Real(0, bits);
    cert.minor_max = Real(0, bits);
    cert.second_singular = Real(0, bits);
    cert.extract_err = Real(0, bits);
    cert.gram_min_eig_lower = Real(0, bits);

    Real n2(0, bits);
    for (const Complex& z : v) n2 += abs2(z);
    cert.norm_err = abs(n2 - 1);

    auto P2d = phase_table(d, bits);
    Real inv_dp1 = Real(1, bits) / (d + 1);
    for (long m = 0; m < d; ++m)
        for (long n = 0; n < d; ++n) {
            if (m == 0 && n == 0) continue;
            // <v, D_{m,n} v> = sum_j conj(v_j) tau^{mn} zeta^{n (j-m)} v_{j-m}
            Complex o(bits);
            for (long j = 0; j < d; ++j) {
                long jm = md(j - m, d);
                long e = md((d + 1) * m % (2 * d) * n + 2 * n * jm, 2 * d);
                Complex t = P2d[static_cast<size_t>(e)] * v[static_cast<size_t>(jm)];
                o += conj(v[static_cast<size_t>(j)]) * t;
            }
            Real dev = abs(abs2(o) - inv_dp1);
            if (dev > cert.e_max) cert.e_max = dev;
        }

    // Gram lower bound: d/(d+1) - (d^2-1) e_max
    cert.gram_min_eig_lower = Real(d, bits) / (d + 1) - Real(d * d - 1, bits) * cert.e_max;

    Real thr = Real::pow10(10 - P, bits);
    cert.valid = cert.e_max < thr && cert.norm_err < thr;
    return cert;
}

FiducialCertificate verify_sic(long d, const std::vector<Complex>& v, long P) {
    if (static_cast<long>(v.size()) != d) throw SicError("verify_sic: vector has wrong dimension");
    Prec bits = bits_for_digits(P + lfun_guard_digits());
    std::vector<Complex> vv;
    vv.reserve(v.size());
    for (const Complex& z : v) vv.push_back(z.at_prec(bits));
    return certify(d, vv, P, bits);
}

void phase_normalize(std::vector<Complex>& v) {
    if (v.empty()) return;
    Prec bits = v[0].prec();
    Real floor_mag = Real::pow10(-(digits_for_bits(bits) / 2), bits);
    for (Complex& z : v) {
        Real a = abs(z);
        if (a > floor_mag) {
            Complex ph{z.re / a, z.im / a};
            Complex inv = conj(ph);
            for (Complex& w : v) w = w * inv;
            return;
        }
    }
}

void save_fiducial(std::ostream& os, long d, const std::vector<Complex>& v, long digits) {
    os << "starksic-fiducial 1\n";
    os << "d " << d << "\n";
    for (const Complex& z : v) os << z.re.decimal(digits) << " " << z.im.decimal(digits) << "\n";
}

std::vector<Complex> load_fiducial(std::istream& is, long& d, Prec bits) {
    std::string magic;
    int version = 0;
    std::string tag;
    is >> magic >> version >> tag >> d;
    if (magic != "starksic-fiducial" || version != 1 || tag != "d" || d < 2)
        throw SicError("load_fiducial: bad header");
    std::vector<Complex> v;
    for (long i = 0; i < d; ++i) {
        std::string re, im;
        is >> re >> im;
        if (!is) throw SicError("load_fiducial: truncated file");
        v.emplace_back(Real::from_decimal(re, bits), Real::from_decimal(im, bits));
    }
    return v;
}

}  // namespace starksic
