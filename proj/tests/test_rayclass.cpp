#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "starksic/rayclass.hpp"

using namespace starksic;

TEST_CASE("group orders match the known structures") {
    for (auto [d, n] : std::map<long, long>{{5, 8}, {11, 40}, {17, 96}}) {
        FieldContext ctx = make_field(d);
        RayClassGroup G = build_ray_class_group(ctx);
        CHECK(G.N == n);
        CHECK(G.structure == std::vector<long>{n});
        CHECK((2 * G.R_index) % G.N == 0);
        CHECK(G.R_index != 0);
    }
}

TEST_CASE("d=23 has structure Z/2 x Z/176") {
    FieldContext ctx = make_field(23);
    RayClassGroup G = build_ray_class_group(ctx);
    CHECK(G.N == 176);
    CHECK(G.structure == std::vector<long>({2, 176}));
}

TEST_CASE("identity, units and R behave as defined") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    CHECK(G.class_of_element(QuadRational::integer(1, ctx.D)) == 0);
    CHECK(G.class_of_element(ctx.zauner) == 0);
    CHECK(G.class_of_element(ctx.eps0.pow(2)) == 0);
    // beta == -1 mod d with rho2(beta) > 0 lands in R: take beta = d - 1
    CHECK(G.class_of_element(QuadRational::integer(ctx.d - 1, ctx.D)) == G.R_class());
    // (-1) is the unit ideal: the sign-flip coset of the unit -1 collapses it
    CHECK(G.class_of_element(QuadRational::integer(-1, ctx.D)) == 0);
    CHECK(G.amn_class(1, 0) == 0);
    CHECK(G.amn_class(ctx.d - 1, 0) == G.R_class());
    CHECK_THROWS_AS(G.amn_class(0, 0), RayClassError);
    CHECK_THROWS_AS(G.class_of_element(QuadRational::integer(5, 3)), RayClassError);
}

TEST_CASE("the (m,n) map is exactly 3-to-1 onto classes") {
    for (long d : {5L, 11L}) {
        FieldContext ctx = make_field(d);
        RayClassGroup G = build_ray_class_group(ctx);
        std::map<long, int> fiber;
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                if (m == 0 && n == 0) continue;
                fiber[G.amn_class(m, n)]++;
            }
        CHECK(static_cast<long>(fiber.size()) == G.N);
        for (auto& [k, c] : fiber) CHECK(c == 3);
    }
}

TEST_CASE("pairing: A_{-m,-n} = R * A_{m,n}") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    for (int m = 0; m < 5; ++m)
        for (int n = 0; n < 5; ++n) {
            if (m == 0 && n == 0) continue;
            long k = G.amn_class(m, n);
            long k2 = G.amn_class((5 - m) % 5, (5 - n) % 5);
            CHECK((k2 - k - G.R_index) % G.N == 0);
        }
}

TEST_CASE("residue group size and unit-image bookkeeping") {
    for (long d : {5L, 11L}) {
        FieldContext ctx = make_field(d);
        RayClassGroup G = build_ray_class_group(ctx);
        // |(O_K/d)^x| = d^2-1 for inert d, and N * |unit image| = 2(d^2-1)
        long card = 0;
        for (int u = 0; u < d; ++u)
            for (int v = 0; v < d; ++v) {
                long n = ((u * static_cast<long>(u) - (ctx.D % d) * static_cast<long>(v) * v) % d + d) % d;
                if (n != 0) ++card;
            }
        CHECK(card == d * d - 1);
        CHECK(G.N * (2 * (d * d - 1) / G.N) == 2 * (d * d - 1));
    }
}

TEST_CASE("the four sign-modulus class groups differ as predicted for d=5") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    auto orders = G.sign_modulus_orders();
    CHECK(orders[0] == 4);   // (d)
    CHECK(orders[1] == 8);   // (d) inf1
    CHECK(orders[2] == 8);   // (d) inf2
    CHECK(orders[3] == 16);  // (d) inf1 inf2
}

TEST_CASE("characters: orthogonality and chi(R) parity") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    Prec b = bits_for_digits(40);
    Real tol = Real::pow10(-35, b);
    int minus = 0;
    for (long j = 0; j < G.N; ++j) {
        if (G.character_at_R(j) == -1) ++minus;
        Complex sum(b);
        for (long k = 0; k < G.N; ++k) sum += G.character_value(j, k, b);
        if (j == 0) {
            CHECK(abs(sum.re - G.N) < tol);
        } else {
            CHECK(abs(sum.re) < tol);
            CHECK(abs(sum.im) < tol);
        }
    }
    CHECK(minus == G.N / 2);
    // column orthogonality at a nonidentity class
    Complex colsum(b);
    for (long j = 0; j < G.N; ++j) colsum += G.character_value(j, 3, b);
    CHECK(abs(colsum.re) < tol);
    CHECK(abs(colsum.im) < tol);
}

TEST_CASE("galois permutation maps fibers to fibers and has full orbit") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    // orbit of A_{1,0} under multiplication by the generator covers all classes
    std::set<long> orbit;
    int m = 1, n = 0;
    for (long k = 0; k < G.N; ++k) {
        orbit.insert(G.amn_class(m, n));
        auto [nm, nn] = G.galois_on_mn(m, n);
        m = nm; n = nn;
    }
    CHECK(static_cast<long>(orbit.size()) == G.N);
    // exponent increments by 1 each step
    auto [m1, n1] = G.galois_on_mn(1, 0);
    CHECK(G.amn_class(m1, n1) == 1);
    // permutation commutes with the fiber structure
    for (int mm = 0; mm < 5; ++mm)
        for (int nn = 0; nn < 5; ++nn) {
            if (mm == 0 && nn == 0) continue;
            auto [pm, pn] = G.galois_on_mn(mm, nn);
            CHECK(G.amn_class(pm, pn) == (G.amn_class(mm, nn) + 1) % G.N);
            auto rep = G.fiber_representative(mm, nn);
            CHECK(G.amn_class(rep.first, rep.second) == G.amn_class(mm, nn));
        }
}

TEST_CASE("mn table dump is one json record per pair") {
    FieldContext ctx = make_field(5);
    RayClassGroup G = build_ray_class_group(ctx);
    std::ostringstream os;
    G.dump_mn_table(os);
    std::string s = os.str();
    size_t lines = 0;
    for (char c : s)
        if (c == '\n') ++lines;
    CHECK(lines == 24);
    CHECK(s.find("{\"m\":1,\"n\":0,\"class\":0}") != std::string::npos);
}
