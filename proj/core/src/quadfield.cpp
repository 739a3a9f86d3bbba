#include "starksic/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace starksic {

namespace detail {

static unsigned long long mulmod_u64(unsigned long long a, unsigned long long b, unsigned long long m) {
    return static_cast<unsigned long long>((static_cast<__uint128_t>(a) * b) % m);
}

static unsigned long long powmod_u64(unsigned long long a, unsigned long long e, unsigned long long m) {
    unsigned long long r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(unsigned long long n) {
    if (n < 2) return false;
    for (unsigned long long p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    unsigned long long d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (unsigned long long a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        unsigned long long x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

long squarefree_radical(long n, long& square_part) {
    long rad = 1, sq = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (int i = 0; i < e / 2; ++i) sq *= p;
        if (e % 2) rad *= p;
    }
    rad *= n;
    square_part = sq;
    return rad;
}

QuadRational fundamental_unit_by_continued_fraction(long D) {
    // Continued fraction of sqrt(D); convergents h/k give the minimal solution
    // of |h^2 - D k^2| = 1.
    mpz_class a0 = sqrt(mpz_class(D));
    if (a0 * a0 == D) throw FieldError("fundamental unit: D is a perfect square");
    mpz_class m = 0, dd = 1, a = a0;
    mpz_class hprev = 1, h = a0, kprev = 0, k = 1;
    for (int it = 0; it < 100000; ++it) {
        mpz_class t = h * h - D * k * k;
        if (t == 1 || t == -1) {
            return {mpq_class(h), mpq_class(k), D};
        }
        m = dd * a - m;
        dd = (D - m * m) / dd;
        a = (a0 + m) / dd;
        mpz_class hn = a * h + hprev, kn = a * k + kprev;
        hprev = h; h = hn;
        kprev = k; k = kn;
    }
    throw FieldError("fundamental unit: continued fraction did not terminate");
}

}  // namespace detail

QuadRational QuadRational::pow(long e) const {
    QuadRational base = *this;
    if (e < 0) {
        base = base.inverse();
        e = -e;
    }
    QuadRational acc = QuadRational::integer(1, D);
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

int QuadRational::sign_rho1() const {
    int sp = sgn(p), sq = sgn(q);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // opposite signs: compare p^2 vs D q^2
    mpq_class t = p * p - D * q * q;
    int st = sgn(t);
    return st == 0 ? 0 : st * sp;
}

Real QuadRational::rho1(Prec bits) const {
    Prec w = bits + 8;
    Real r(w);
    mpfr_sqrt_ui(r.raw(), static_cast<unsigned long>(D), MPFR_RNDN);
    Real qq = Real::from_mpq(q, w);
    Real pp = Real::from_mpq(p, w);
    pp.addmul(qq, r);
    return pp.at_prec(bits);
}

std::string QuadRational::str() const {
    std::ostringstream os;
    os << p.get_str() << " + " << q.get_str() << " * sqrt(" << D << ")";
    return os.str();
}

static FieldContext make_field_impl(long d, bool strict) {
    if (d < 4) throw FieldError("make_field: d must be at least 5");
    if (strict) {
        if (!detail::is_prime_u64(static_cast<unsigned long long>(d)))
            throw FieldError("make_field: d = " + std::to_string(d) + " is not prime");
        if (d % 3 != 2)
            throw FieldError("make_field: d = " + std::to_string(d) + " is not 2 mod 3");
    }
    if (d % 2 == 0) throw FieldError("make_field: d must be odd");
    FieldContext ctx;
    ctx.d = d;
    ctx.Delta = (d + 1) * (d - 3);
    long sq = 1;
    long rad = detail::squarefree_radical(ctx.Delta, sq);
    if (rad == 1) throw FieldError("make_field: Delta is a perfect square");
    ctx.D = rad;
    if (sq % 2 != 0)
        throw FieldError("make_field: Delta has odd square part; ((d-1)+sqrt(Delta))/2 not integral");
    ctx.half_s = sq / 2;
    if (ctx.D % 4 == 1)
        throw FieldError("make_field: radical D = " + std::to_string(ctx.D) +
                         " is 1 mod 4; half-integer maximal orders are unsupported");
    ctx.disc = 4 * ctx.D;

    ctx.eps0 = detail::fundamental_unit_by_continued_fraction(ctx.D);
    if (ctx.eps0.sign_rho1() < 0) ctx.eps0 = -ctx.eps0;

    ctx.zauner = QuadRational(mpq_class(d - 1) / 2, mpq_class(ctx.half_s), ctx.D);
    if (ctx.zauner.norm() != 1)
        throw FieldError("make_field: Zauner unit norm is not 1");
    if (ctx.zauner.sign_rho1() <= 0 || ctx.zauner.sign_rho2() <= 0)
        throw FieldError("make_field: Zauner unit is not totally positive");

    // zauner = eps0^k
    {
        QuadRational pw = ctx.eps0;
        long k = 1;
        while (!(pw == ctx.zauner)) {
            pw = pw * ctx.eps0;
            ++k;
            if (k > 64) throw FieldError("make_field: Zauner unit is not a power of the fundamental unit");
        }
        ctx.zauner_power = k;
    }

    // eps^3 == 1 mod d*O_K, by exact reduction of eps^3 - 1
    {
        QuadRational c = ctx.zauner.pow(3);
        mpz_class pnum = c.p.get_num() - c.p.get_den();
        if (c.p.get_den() != 1 || c.q.get_den() != 1 || pnum % d != 0 || c.q.get_num() % d != 0)
            throw FieldError("make_field: Zauner unit cube is not 1 mod d");
    }

    long hplus = narrow_class_number_by_forms(ctx.disc);
    bool norm_minus_one = (ctx.eps0.norm() == -1);
    ctx.class_number = norm_minus_one ? hplus : hplus / 2;
    if (ctx.class_number < 1) throw FieldError("make_field: class number computation failed");
    return ctx;
}

FieldContext make_field(long d) { return make_field_impl(d, true); }
FieldContext make_field_relaxed(long d) { return make_field_impl(d, false); }

QuadRational minimal_congruent_unit(const FieldContext& ctx) {
    long bound = 3 * ctx.zauner_power;
    QuadRational pw = QuadRational::integer(1, ctx.D);
    for (long j = 1; j <= bound; ++j) {
        pw = pw * ctx.eps0;
        if (pw.p.get_den() != 1 || pw.q.get_den() != 1) continue;
        mpz_class pm = pw.p.get_num() - 1, qm = pw.q.get_num();
        if (pm % ctx.d == 0 && qm % ctx.d == 0) {
            if (!(pw == ctx.zauner.pow(3)))
                throw FieldError("minimal_congruent_unit: minimal unit differs from zauner^3");
            return pw;
        }
    }
    throw FieldError("minimal_congruent_unit: no unit == 1 mod d found up to eps0^" + std::to_string(bound));
}

QuadRational canonical_associate(const FieldContext& ctx, QuadRational g) {
    if (g.is_zero()) throw FieldError("canonical_associate: zero element");
    mpq_class n = g.norm();
    mpq_class absn = abs(n);
    if (g.sign_rho1() < 0) g = -g;
    QuadRational lower(absn, mpq_class(0), ctx.D);                 // rho1(g)^2 >= |N|
    QuadRational upper = (ctx.eps0 * ctx.eps0) * lower;            // rho1(g)^2 < |N| eps0^2
    QuadRational eps_inv = ctx.eps0.inverse();
    while ((g * g - upper).sign_rho1() >= 0) g = g * eps_inv;
    while ((g * g - lower).sign_rho1() < 0) g = g * ctx.eps0;
    return g;
}

PrincipalIdeal make_ideal(const FieldContext& ctx, const QuadRational& g) {
    QuadRational c = canonical_associate(ctx, g);
    mpq_class n = abs(c.norm());
    if (n.get_den() != 1) throw FieldError("make_ideal: non-integral generator");
    return {c, n.get_num()};
}

bool ideal_equal(const FieldContext&, const PrincipalIdeal& a, const PrincipalIdeal& b) {
    return a.norm == b.norm && a.gen == b.gen;
}

long narrow_class_number_by_forms(long disc) {
    if (disc <= 0) throw FieldError("narrow_class_number_by_forms: discriminant must be positive");
    long f = static_cast<long>(std::sqrt(static_cast<double>(disc)));
    while (f * f > disc) --f;
    while ((f + 1) * (f + 1) <= disc) ++f;
    if (f * f == disc) throw FieldError("narrow_class_number_by_forms: square discriminant");

    struct Form {
        long a, b, c;
        bool operator<(const Form& o) const {
            if (a != o.a) return a < o.a;
            if (b != o.b) return b < o.b;
            return c < o.c;
        }
    };
    auto reduced = [&](long a, long b) {
        // 0 < b < sqrt(disc) and sqrt(disc) - b < 2|a| < sqrt(disc) + b
        if (b <= 0 || b * b >= disc) return false;
        long t = 2 * std::labs(a);
        if (t >= b) {
            if ((t - b) * (t - b) >= disc) return false;  // 2|a| < sqrt(disc)+b
        }
        return disc < (t + b) * (t + b);                  // sqrt(disc)-b < 2|a|
    };

    std::set<Form> forms;
    for (long b = 1; b * b < disc; ++b) {
        if ((disc - b * b) % 4 != 0) continue;
        long n = (disc - b * b) / 4;  // n = -a*c > 0
        for (long a1 = 1; a1 * a1 <= n; ++a1) {
            if (n % a1) continue;
            long c1 = n / a1;
            for (long a : {a1, c1}) {
                long c = -(n / a);
                if (!reduced(a, b)) continue;
                forms.insert({a, b, c});
                forms.insert({-a, b, -c});
            }
        }
    }

    auto rho = [&](const Form& F) -> Form {
        long c = F.c;
        long tc = 2 * std::labs(c);
        long base = ((-F.b) % tc + tc) % tc;
        long r = f - ((f - base) % tc + tc) % tc;  // r == -b mod 2|c|, sqrt(disc)-2|c| < r <= floor(sqrt(disc))
        long cn = (r * r - disc) / (4 * c);
        return {c, r, cn};
    };

    std::set<Form> seen;
    long cycles = 0;
    for (const Form& F : forms) {
        if (seen.count(F)) continue;
        ++cycles;
        Form cur = F;
        for (int guard = 0; guard < 1 << 20; ++guard) {
            if (!seen.insert(cur).second) break;
            cur = rho(cur);
            if (!forms.count(cur))
                throw FieldError("narrow_class_number_by_forms: reduction left the reduced set");
        }
    }
    return cycles;
}

static int legendre_long(long a, long p) {
    mpz_class A = a, P = p;
    return mpz_legendre(A.get_mpz_t(), P.get_mpz_t());
}

std::vector<PrimeIdeal> enumerate_prime_ideals(const FieldContext& ctx, long X) {
    if (ctx.class_number != 1)
        throw FieldError("enumerate_prime_ideals: class number " + std::to_string(ctx.class_number) +
                         " is unsupported (need 1)");
    std::vector<PrimeIdeal> out;
    if (X < 2) return out;

    double eps1 = ctx.eps0.rho1(64).to_double();
    auto find_norm_pm_p = [&](long p) -> QuadRational {
        long ybound = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(p) * eps1 / ctx.D))) + 2;
        for (long y = 0; y <= ybound; ++y) {
            mpz_class t = mpz_class(ctx.D) * y * y;
            for (int s = -1; s <= 1; s += 2) {
                mpz_class cand = t + s * p;
                if (cand < 0) continue;
                mpz_class x = sqrt(cand);
                if (x * x == cand)
                    return {mpq_class(x), mpq_class(y), ctx.D};
            }
        }
        throw FieldError("enumerate_prime_ideals: no generator of norm +-" + std::to_string(p) +
                         " (class number 1 violated?)");
    };

    for (long p = 2; p <= X; ++p) {
        if (!detail::is_prime_u64(static_cast<unsigned long long>(p))) continue;
        bool ramified = (p == 2) || (ctx.D % p == 0);
        if (ramified) {
            PrimeIdeal pi;
            pi.p = p;
            pi.type = PrimeType::Ramified;
            pi.ideal = make_ideal(ctx, find_norm_pm_p(p));
            out.push_back(std::move(pi));
        } else if (legendre_long(ctx.D, p) == 1) {
            QuadRational g = find_norm_pm_p(p);
            PrimeIdeal pi1{make_ideal(ctx, g), p, PrimeType::Split};
            PrimeIdeal pi2{make_ideal(ctx, g.conj()), p, PrimeType::Split};
            if (ideal_equal(ctx, pi1.ideal, pi2.ideal))
                throw FieldError("enumerate_prime_ideals: split prime produced equal conjugates");
            out.push_back(std::move(pi1));
            out.push_back(std::move(pi2));
        } else {
            if (static_cast<double>(p) * p <= static_cast<double>(X)) {
                PrimeIdeal pi;
                pi.p = p;
                pi.type = PrimeType::Inert;
                pi.ideal = make_ideal(ctx, QuadRational::integer(p, ctx.D));
                out.push_back(std::move(pi));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
        if (a.ideal.norm != b.ideal.norm) return a.ideal.norm < b.ideal.norm;
        return a.ideal.gen.q < b.ideal.gen.q;
    });
    return out;
}

void for_each_ideal(const FieldContext& ctx, long X,
                    const std::function<void(long, const QuadRational&)>& visit) {
    if (X < 1) return;
    std::vector<PrimeIdeal> primes = enumerate_prime_ideals(ctx, X);
    // depth-first over prime-power exponents
    std::function<void(size_t, long, QuadRational)> rec = [&](size_t i, long norm, QuadRational gen) {
        if (i == primes.size()) {
            visit(norm, gen);
            return;
        }
        rec(i + 1, norm, gen);
        const PrimeIdeal& pi = primes[i];
        long pn = static_cast<long>(pi.ideal.norm.get_si());
        long n = norm;
        QuadRational g = gen;
        while (n <= X / pn) {
            n *= pn;
            g = canonical_associate(ctx, g * pi.ideal.gen);
            rec(i + 1, n, g);
        }
    };
    rec(0, 1, QuadRational::integer(1, ctx.D));
}

std::map<long, std::vector<PrincipalIdeal>> enumerate_ideals(const FieldContext& ctx, long X) {
    std::map<long, std::vector<PrincipalIdeal>> out;
    for_each_ideal(ctx, X, [&](long n, const QuadRational& g) {
        out[n].push_back(PrincipalIdeal{g, mpz_class(n)});
    });
    return out;
}

std::vector<long> ideal_counts_by_element_enumeration(const FieldContext& ctx, long X) {
    std::vector<long> counts(static_cast<size_t>(X) + 1, 0);
    double eps1 = ctx.eps0.rho1(64).to_double();
    double sx = std::sqrt(static_cast<double>(X));
    long ymax = static_cast<long>(std::ceil(sx * (eps1 + 1) / (2 * std::sqrt(static_cast<double>(ctx.D))))) + 2;
    long xmax = static_cast<long>(std::ceil(sx * (eps1 + 1) / 2)) + 2;
    QuadRational eps_sq = ctx.eps0 * ctx.eps0;
    for (long y = -ymax; y <= ymax; ++y) {
        for (long x = 0; x <= xmax; ++x) {
            if (x == 0 && y == 0) continue;
            mpz_class n = mpz_class(x) * x - mpz_class(ctx.D) * y * y;
            mpz_class an = abs(n);
            if (an == 0 || an > X) continue;
            QuadRational g(mpq_class(x), mpq_class(y), ctx.D);
            if (g.sign_rho1() < 0) continue;
            // canonical window: |N| <= rho1(g)^2 < |N| eps0^2
            QuadRational g2 = g * g;
            QuadRational lower(mpq_class(an), mpq_class(0), ctx.D);
            if ((g2 - lower).sign_rho1() < 0) continue;
            if ((g2 - eps_sq * lower).sign_rho1() >= 0) continue;
            counts[an.get_ui()]++;
        }
    }
    return counts;
}

}  // namespace starksic
