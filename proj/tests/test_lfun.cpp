#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "starksic/lfun.hpp"

using namespace starksic;

namespace {

// coefficients of the printed degree-8 polynomial for d=5 over Z[sqrt3],
// descending powers: x^8 - (8+5r)x^7 + (53+30r)x^6 - ... + 1
const long F5[9][2] = {{1, 0},    {-8, -5},   {53, 30},  {-156, -90}, {225, 130},
                       {-156, -90}, {53, 30}, {-8, -5},  {1, 0}};

std::vector<Real> esym(const std::vector<Real>& roots, Prec bits) {
    // coefficients of prod (x - r), c[i] = coefficient of x^(n-i)
    std::vector<Real> c{Real(1, bits)};
    for (const Real& r : roots) {
        c.push_back(Real(0, bits));
        for (size_t i = c.size() - 1; i >= 1; --i) c[i] = c[i] - r * c[i - 1];
    }
    return c;
}

}  // namespace

TEST_CASE("d=5 zeta table matches the printed degree-8 polynomial" * doctest::timeout(600)) {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    LfunOptions opt;
    opt.P = 50;
    opt.threads = 2;
    ZetaTable T = zeta_derivative_table(ctx, G, opt);
    Prec bits = bits_for_digits(65);
    REQUIRE(T.N == 8);
    CHECK(T.Q == 300);

    // Z'_{RA} = -Z'_A
    Real anti_tol = Real::pow10(-45, bits);
    for (long k = 0; k < 8; ++k) {
        Real s = T.zprime[static_cast<size_t>(k)] + T.zprime[static_cast<size_t>((k + G.R_index) % 8)];
        CHECK(abs(s) < anti_tol);
        CHECK(abs(T.alpha[static_cast<size_t>(k)] *
                  T.alpha[static_cast<size_t>((k + G.R_index) % 8)] - 1) < anti_tol);
    }
    CHECK(T.max_imag < anti_tol);

    // character transcript: |W|=1, conjugate pairing, functional equation, |L(0)| gate
    REQUIRE(T.chars.size() == 4);
    Real wtol = Real::pow10(-40, bits);
    for (const LChar& c : T.chars) {
        CHECK(abs(abs(c.W) - 1) < wtol);
        CHECK(c.w_delta < wtol);
        CHECK(c.fe_res1 < Real::pow10(-47, bits));
        CHECK(c.fe_res2 < Real::pow10(-47, bits));
        CHECK(c.l0_abs < Real::pow10(-45, bits));
    }
    // W(chi_bar) = conj(W(chi)): chars are j = 1,3,5,7 and chi_{N-j} = conj
    for (const LChar& c : T.chars) {
        long jb = (G.N - c.j) % G.N;
        for (const LChar& cb : T.chars)
            if (cb.j == jb) {
                CHECK(abs(cb.W.re - c.W.re) < wtol);
                CHECK(abs(cb.W.im + c.W.im) < wtol);
                CHECK(abs(cb.lprime.re - c.lprime.re) < wtol);
                CHECK(abs(cb.lprime.im + c.lprime.im) < wtol);
            }
    }

    // symmetric functions of the alphas equal the printed coefficients
    Real srt3 = ctx.sqrtD(bits);
    std::vector<Real> alphas;
    for (long k = 0; k < 8; ++k) alphas.push_back(T.alpha[static_cast<size_t>(k)].at_prec(bits));
    std::vector<Real> coeffs = esym(alphas, bits);
    Real ctol = Real::pow10(-40, bits);
    for (int i = 0; i <= 8; ++i) {
        Real want = Real(F5[i][0], bits) + srt3 * F5[i][1];
        CHECK(abs(coeffs[static_cast<size_t>(i)] - want) < ctol);
    }
}

TEST_CASE("class counts: modulus support and identity column") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    DirichletCoeffs dc = class_counts(ctx, G, 200);
    CHECK(dc.at(0, 1) == 1);
    for (long k = 1; k < 8; ++k) CHECK(dc.at(k, 1) == 0);
    // the inert ideal (5) of norm 25 is not coprime to the modulus: excluded
    for (long k = 0; k < 8; ++k) {
        CHECK(dc.at(k, 25) == 0);
        CHECK(dc.at(k, 50) == 0);
    }
    // column sums equal unrestricted ideal counts away from multiples of 5
    std::vector<long> all(static_cast<size_t>(201), 0);
    for_each_ideal(ctx, 200, [&](long n, const QuadRational&) { all[static_cast<size_t>(n)]++; });
    for (long n = 1; n <= 200; ++n) {
        long colsum = 0;
        for (long k = 0; k < 8; ++k) colsum += dc.at(k, n);
        if (n % 5 == 0)
            CHECK(colsum == 0);
        else
            CHECK(colsum == all[static_cast<size_t>(n)]);
    }
}

TEST_CASE("non-contributing characters are rejected") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    DirichletCoeffs dc = class_counts(ctx, G, 50);
    KernelTables K = build_kernel_tables(300, 50, 20, 1);
    LFunctionSpec spec;
    spec.G = &G;
    spec.j = 2;  // chi(R) = +1
    spec.Q = 300;
    spec.P = 20;
    CHECK_THROWS_AS(solve_root_number(spec, dc, K), LfunError);
    CHECK_THROWS_AS(lprime_at_zero(spec, dc, K), LfunError);
}

TEST_CASE("coefficient-bound plateau: doubling X leaves Z' unchanged" * doctest::timeout(600)) {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    LfunOptions a;
    a.P = 30;
    ZetaTable t1 = zeta_derivative_table(ctx, G, a);
    LfunOptions b;
    b.P = 30;
    b.X_override = 2 * t1.X;
    ZetaTable t2 = zeta_derivative_table(ctx, G, b);
    Prec bits = bits_for_digits(45);
    for (long k = 0; k < 8; ++k)
        CHECK(abs(t1.zprime[static_cast<size_t>(k)] - t2.zprime[static_cast<size_t>(k)]) <
              Real::pow10(-25, bits));
}

TEST_CASE("determinism: thread count does not change the decimal output" * doctest::timeout(600)) {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    LfunOptions a;
    a.P = 30;
    a.threads = 1;
    LfunOptions b;
    b.P = 30;
    b.threads = 4;
    ZetaTable t1 = zeta_derivative_table(ctx, G, a);
    ZetaTable t2 = zeta_derivative_table(ctx, G, b);
    for (long k = 0; k < 8; ++k) {
        CHECK(t1.zprime[static_cast<size_t>(k)].decimal(44) == t2.zprime[static_cast<size_t>(k)].decimal(44));
        CHECK(t1.alpha[static_cast<size_t>(k)].decimal(44) == t2.alpha[static_cast<size_t>(k)].decimal(44));
    }
}

TEST_CASE("zeta cache round trip and corruption detection" * doctest::timeout(600)) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "starksic_cache_test";
    fs::remove_all(dir);
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    LfunOptions opt;
    opt.P = 30;
    opt.cache_dir = dir.string();
    ZetaTable t1 = zeta_derivative_table(ctx, G, opt);
    CHECK(!t1.from_cache);
    ZetaTable t2 = zeta_derivative_table(ctx, G, opt);
    CHECK(t2.from_cache);
    for (long k = 0; k < 8; ++k)
        CHECK(abs(t1.zprime[static_cast<size_t>(k)] - t2.zprime[static_cast<size_t>(k)]) <
              Real::pow10(-40, bits_for_digits(45)));

    // corrupt one digit of the payload
    fs::path file = dir / zeta_cache_filename(5, 30);
    std::string text;
    {
        std::ifstream in(file);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    size_t pos = text.find("Z 0 ");
    REQUIRE(pos != std::string::npos);
    text[pos + 5] = text[pos + 5] == '3' ? '4' : '3';
    {
        std::ofstream out(file);
        out << text;
    }
    CHECK_THROWS_AS(load_zeta_table(5, 30, t1.X, 8, dir.string()), LfunError);
    fs::remove_all(dir);
}
