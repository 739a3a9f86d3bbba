#include "starksic/rayclass.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace starksic {

static long mod_inverse(long a, long m) {
    long old_r = ((a % m) + m) % m, r = m;
    long old_s = 1, s = 0;
    while (r != 0) {
        long q = old_r / r;
        long tr = old_r - q * r; old_r = r; r = tr;
        long ts = old_s - q * s; old_s = s; s = ts;
    }
    if (old_r != 1) throw RayClassError("mod_inverse: not invertible");
    return ((old_s % m) + m) % m;
}

ResiduePair RayClassGroup::mul(const ResiduePair& a, const ResiduePair& b) const {
    long d = ctx->d, D = ctx->D % d;
    long u = ((a.u * static_cast<long>(b.u)) % d + (a.v * static_cast<long>(b.v)) % d * D) % d;
    long v = (a.u * static_cast<long>(b.v) + a.v * static_cast<long>(b.u)) % d;
    return {static_cast<int>(u), static_cast<int>(v), a.sign * b.sign};
}

ResiduePair RayClassGroup::canonical(ResiduePair r) const {
    r.u = static_cast<int>(((r.u % ctx->d) + ctx->d) % ctx->d);
    r.v = static_cast<int>(((r.v % ctx->d) + ctx->d) % ctx->d);
    ResiduePair best = mul(r, unit_image_.front());
    for (const ResiduePair& u : unit_image_) {
        ResiduePair c = mul(r, u);
        if (c < best) best = c;
    }
    return best;
}

long RayClassGroup::dlog(const ResiduePair& r) const {
    ResiduePair c = canonical(r);
    auto it = dlog_.find(encode(c));
    if (it == dlog_.end()) throw RayClassError("dlog: residue pair not in the principal part");
    return it->second;
}

long RayClassGroup::amn_class(int m, int n) const {
    long d = ctx->d;
    m = static_cast<int>(((m % d) + d) % d);
    n = static_cast<int>(((n % d) + d) % d);
    if (m == 0 && n == 0) throw RayClassError("amn_class: (0,0) is not allowed");
    long k = amn_[static_cast<size_t>(m * d + n)];
    if (k < 0) throw RayClassError("amn_class: residue not coprime to d");
    return k;
}

long RayClassGroup::class_of_element(const QuadRational& beta) const {
    long d = ctx->d;
    mpz_class dz(d);
    if (gcd(beta.p.get_den(), dz) != 1 || gcd(beta.q.get_den(), dz) != 1)
        throw RayClassError("class_of_element: denominator not coprime to d");
    if (beta.norm().get_num() % d == 0)
        throw RayClassError("class_of_element: element not coprime to d");
    auto red = [&](const mpq_class& x) -> int {
        long ni = mpz_class(x.get_num() % d).get_si();
        long de = mpz_class(x.get_den() % d).get_si();
        ni = ((ni % d) + d) % d;
        de = ((de % d) + d) % d;
        return static_cast<int>((ni * mod_inverse(de, d)) % d);
    };
    ResiduePair r{red(beta.p), red(beta.q), beta.sign_rho2() >= 0 ? 1 : -1};
    return dlog(r);
}

std::pair<int, int> RayClassGroup::fiber_representative(int m, int n) const {
    long d = ctx->d;
    long two_s = two_s_;
    long inv_two_s = mod_inverse(two_s, d);
    long za = ((ctx->zauner.p.get_num().get_si() % d) + d) % d;
    long zv = ((ctx->half_s % d) + d) % d;  // zauner = za + zv*w in the w basis
    long cu = ((m % d) + d) % d;
    long cv = (((n % d) + d) % d) * two_s % d;
    std::pair<long, long> best{-1, -1};
    for (int i = 0; i < 3; ++i) {
        long nu = (cu * za % d + cv * zv % d * (ctx->D % d)) % d;
        long nv = (cu * zv + cv * za) % d;
        cu = nu; cv = nv;
        std::pair<long, long> lbl{cu, (cv * inv_two_s) % d};
        if (best.first < 0 || lbl < best) best = lbl;
    }
    return {static_cast<int>(best.first), static_cast<int>(best.second)};
}

std::pair<int, int> RayClassGroup::galois_on_mn(int m, int n) const {
    long d = ctx->d;
    long two_s = two_s_;
    long inv_two_s = mod_inverse(two_s, d);
    long u = ((m % d) + d) % d;
    long v = (((n % d) + d) % d) * two_s % d;
    long gu = ((generator_mn.first % d) + d) % d;
    long gv = static_cast<long>(generator_mn.second) * two_s % d;
    long nu = (u * gu % d + v * gv % d * (ctx->D % d)) % d;
    long nv = (u * gv + v * gu) % d;
    return fiber_representative(static_cast<int>(nu), static_cast<int>((nv * inv_two_s) % d));
}

long RayClassGroup::order_of(const ResiduePair& r) const {
    ResiduePair id = canonical({1, 0, 1});
    ResiduePair cur = canonical(r);
    long o = 1;
    while (!(cur == id)) {
        cur = canonical(mul(cur, r));
        ++o;
        if (o > 2 * (ctx->d * ctx->d) + 4) throw RayClassError("order_of: runaway order computation");
    }
    return o;
}

Complex RayClassGroup::character_value(long j, long k, Prec bits) const {
    long t = ((2 * j % (2 * N)) * (k % (2 * N))) % (2 * N);
    t = ((t % (2 * N)) + 2 * N) % (2 * N);  // angle = pi * t / N, t in [0, 2N)
    Real angle = Real(t, bits + 8) / Real(N, bits + 8);
    if (t > N) angle -= 2;
    return exp_i_pi(angle.at_prec(bits));
}

int RayClassGroup::character_at_R(long j) const {
    long t = ((2 * j * R_index) % (2 * N) + 2 * N) % (2 * N);
    if (t == 0) return 1;
    if (t == N) return -1;
    throw RayClassError("character_at_R: R is not 2-torsion");
}

void RayClassGroup::dump_mn_table(std::ostream& os) const {
    long d = ctx->d;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (m == 0 && n == 0) continue;
            os << "{\"m\":" << m << ",\"n\":" << n << ",\"class\":" << amn_[static_cast<size_t>(m * d + n)]
               << "}\n";
        }
}

std::array<long, 4> RayClassGroup::sign_modulus_orders() const {
    long d = ctx->d;
    long card = 0;  // |(O_K/d)^x|
    for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v) {
            long n = ((u * static_cast<long>(u) - static_cast<long>(ctx->D % d) * v % d * v) % d + d) % d;
            if (n != 0) ++card;
        }
    std::array<long, 4> out{};
    for (int mask = 0; mask < 4; ++mask) {
        // closure of the images of -1 and eps0 in (O_K/d)^x x {+-}^S
        using El = std::array<long, 3>;  // residue u*d+v, sign1, sign2
        auto img_of = [&](const QuadRational& w) -> El {
            long pu = ((w.p.get_num().get_si() % d) + d) % d;
            long pv = ((w.q.get_num().get_si() % d) + d) % d;
            long s1 = (mask & 1) ? w.sign_rho1() : 1;
            long s2 = (mask & 2) ? w.sign_rho2() : 1;
            return {pu * d + pv, s1, s2};
        };
        auto elmul = [&](const El& a, const El& b) -> El {
            long au = a[0] / d, av = a[0] % d, bu = b[0] / d, bv = b[0] % d;
            long u = (au * bu % d + av * bv % d * (ctx->D % d)) % d;
            long v = (au * bv + av * bu) % d;
            return {u * d + v, a[1] * b[1], a[2] * b[2]};
        };
        std::set<El> sub{{1 * d + 0, 1, 1}};
        std::vector<El> frontier{img_of(-QuadRational::integer(1, ctx->D)), img_of(ctx->eps0)};
        std::vector<El> gens = frontier;
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<El> cur(sub.begin(), sub.end());
            for (const El& x : cur)
                for (const El& g : gens) {
                    El y = elmul(x, g);
                    if (sub.insert(y).second) grew = true;
                }
        }
        long nsigns = (mask & 1 ? 2 : 1) * (mask & 2 ? 2 : 1);
        out[static_cast<size_t>(mask)] = card * nsigns / static_cast<long>(sub.size());
    }
    // order as (d), (d)inf1, (d)inf2, (d)inf1inf2
    return {out[0], out[1], out[2], out[3]};
}

RayClassGroup build_ray_class_group(const FieldContext& ctx) {
    RayClassGroup G;
    G.ctx = &ctx;
    long d = ctx.d;
    G.two_s_ = static_cast<int>(((2 * ctx.half_s) % d + d) % d);

    // image of the global units <-1, eps0> in (O_K/d)^x x {sign at rho2}
    {
        std::vector<ResiduePair> img;
        QuadRational cur = QuadRational::integer(1, ctx.D);
        for (long k = 0; k <= 6L * d * d; ++k) {
            long pu = ((cur.p.get_num().get_si() % d) + d) % d;
            long pv = ((cur.q.get_num().get_si() % d) + d) % d;
            int sg = cur.sign_rho2() >= 0 ? 1 : -1;
            ResiduePair e{static_cast<int>(pu), static_cast<int>(pv), sg};
            if (k > 0 && e.u == 1 && e.v == 0 && e.sign == 1) break;
            img.push_back(e);
            img.push_back({static_cast<int>((d - pu) % d), static_cast<int>((d - pv) % d), -sg});
            cur = cur * ctx.eps0;
        }
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        G.unit_image_ = std::move(img);
    }

    // principal-part classes
    std::set<int> reps;
    for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v) {
            long n = ((u * static_cast<long>(u) - static_cast<long>(ctx.D % d) * v % d * v) % d + d) % d;
            if (n == 0) continue;
            for (int sg : {1, -1}) reps.insert(G.encode(G.canonical({u, v, sg})));
        }
    G.N = static_cast<long>(reps.size());
    if (detail::is_prime_u64(static_cast<unsigned long long>(d)) && d % 3 == 2) {
        long expected = (d * d - 1) / 3;
        if (G.N != expected)
            throw RayClassError("build_ray_class_group: principal part has order " + std::to_string(G.N) +
                                ", expected " + std::to_string(expected));
    }

    // deterministic generator: smallest (m,n) lexicographically whose class has order N
    long two_s = G.two_s_;
    bool found = false;
    for (int m = 0; m < d && !found; ++m)
        for (int n = 0; n < d && !found; ++n) {
            if (m == 0 && n == 0) continue;
            ResiduePair r{m, static_cast<int>((n * two_s) % d), 1};
            long nrm = ((r.u * static_cast<long>(r.u) - static_cast<long>(ctx.D % d) * r.v % d * r.v) % d + d) % d;
            if (nrm == 0) continue;
            if (G.order_of(r) == G.N) {
                G.generator = G.canonical(r);
                G.generator_mn = {m, n};
                found = true;
            }
        }
    if (!found) throw RayClassError("build_ray_class_group: principal part is not cyclic");

    // dlog table by walking generator powers (multiplying by a sign-positive
    // representative of the generator class, not its canonical rep)
    {
        ResiduePair gen_pos{static_cast<int>(((G.generator_mn.first % d) + d) % d),
                            static_cast<int>((static_cast<long>(G.generator_mn.second) * two_s) % d), 1};
        ResiduePair cur{1, 0, 1};
        for (long k = 0; k < G.N; ++k) {
            G.dlog_[G.encode(G.canonical(cur))] = k;
            cur = G.mul(cur, gen_pos);
        }
        if (static_cast<long>(G.dlog_.size()) != G.N)
            throw RayClassError("build_ray_class_group: dlog table incomplete");
    }

    G.R_index = G.dlog({static_cast<int>(d - 1), 0, 1});
    if (G.R_index == 0 || (2 * G.R_index) % G.N != 0)
        throw RayClassError("build_ray_class_group: class R is not of order 2");

    // (m,n) -> class exponent
    G.amn_.assign(static_cast<size_t>(d * d), -1);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (m == 0 && n == 0) continue;
            ResiduePair r{m, static_cast<int>((n * two_s) % d), 1};
            long nrm = ((r.u * static_cast<long>(r.u) - static_cast<long>(ctx.D % d) * r.v % d * r.v) % d + d) % d;
            if (nrm == 0) continue;
            G.amn_[static_cast<size_t>(m * d + n)] = G.dlog(r);
        }

    // full-group structure
    if (ctx.class_number == 1) {
        G.structure = {G.N};
    } else if (ctx.class_number == 2) {
        // Lift a non-principal ramified prime q, q^2 = (p): the parity of
        // dlog of (p, +) decides whether the Z/2 extension splits.
        long p0 = 0;
        double eps1 = ctx.eps0.rho1(64).to_double();
        for (long p = 2; p <= 4 * ctx.D; ++p) {
            if (!detail::is_prime_u64(static_cast<unsigned long long>(p))) continue;
            if (p == d || !((p == 2) || (ctx.D % p == 0))) continue;
            bool principal = false;
            long ybound = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(p) * eps1 / ctx.D))) + 2;
            for (long y = 0; y <= ybound && !principal; ++y) {
                mpz_class t = mpz_class(ctx.D) * y * y;
                for (long s : {-1L, 1L}) {
                    mpz_class cand = t + s * p;
                    if (cand < 0) continue;
                    mpz_class x = sqrt(cand);
                    if (x * x == cand) { principal = true; break; }
                }
            }
            if (!principal) { p0 = p; break; }
        }
        if (p0 == 0) throw RayClassError("build_ray_class_group: no non-principal ramified prime found");
        long e = G.dlog({static_cast<int>(p0 % d), 0, 1});
        if (e % 2 == 0) G.structure = {2, G.N};
        else G.structure = {2 * G.N};
    } else {
        throw RayClassError("build_ray_class_group: class number " + std::to_string(ctx.class_number) +
                            " unsupported");
    }

    return G;
}

}  // namespace starksic
