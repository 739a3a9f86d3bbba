#include <doctest.h>

#include "starksic/quadfield.hpp"

using namespace starksic;

TEST_CASE("field construction for the paper dimensions") {
    FieldContext c5 = make_field(5);
    CHECK(c5.Delta == 12);
    CHECK(c5.D == 3);
    CHECK(c5.zauner == QuadRational(mpq_class(2), mpq_class(1), 3));
    CHECK(c5.eps0 == c5.zauner);
    CHECK(c5.zauner_power == 1);
    CHECK(c5.class_number == 1);

    FieldContext c11 = make_field(11);
    CHECK(c11.Delta == 96);
    CHECK(c11.D == 6);
    CHECK(c11.zauner == QuadRational(mpq_class(5), mpq_class(2), 6));
    CHECK(c11.zauner_power == 1);
    CHECK(c11.class_number == 1);

    FieldContext c17 = make_field(17);
    CHECK(c17.D == 7);
    CHECK(c17.zauner == QuadRational(mpq_class(8), mpq_class(3), 7));
    CHECK(c17.class_number == 1);

    FieldContext c23 = make_field(23);
    CHECK(c23.D == 30);
    CHECK(c23.zauner == QuadRational(mpq_class(11), mpq_class(2), 30));
    CHECK(c23.class_number == 2);
}

TEST_CASE("invalid dimensions are rejected") {
    CHECK_THROWS_AS(make_field(9), FieldError);    // not prime
    CHECK_THROWS_AS(make_field(7), FieldError);    // 1 mod 3
    CHECK_THROWS_AS(make_field(13), FieldError);   // 1 mod 3
    CHECK_THROWS_AS(make_field(15), FieldError);   // composite (relaxed ctor exists)
}

TEST_CASE("d=15 aside: zauner unit is the square of the fundamental unit") {
    FieldContext c15 = make_field_relaxed(15);
    CHECK(c15.D == 3);
    CHECK(c15.eps0 == QuadRational(mpq_class(2), mpq_class(1), 3));
    CHECK(c15.zauner == c15.eps0 * c15.eps0);
    CHECK(c15.zauner_power == 2);
}

TEST_CASE("minimal congruent unit equals zauner cubed") {
    for (long d : {5L, 11L, 17L, 23L, 29L, 41L}) {
        FieldContext ctx = make_field(d);
        QuadRational eta = minimal_congruent_unit(ctx);
        CHECK(eta == ctx.zauner.pow(3));
        CHECK((eta * eta.inverse()) == QuadRational::integer(1, ctx.D));
    }
}

TEST_CASE("minimal congruent unit explicit value for d=5") {
    FieldContext ctx = make_field(5);
    QuadRational eta = minimal_congruent_unit(ctx);
    CHECK(eta == QuadRational(mpq_class(26), mpq_class(15), 3));  // (2+sqrt3)^3
}

TEST_CASE("quad rational arithmetic is exact and multiplicative") {
    QuadRational a(mpq_class(3, 2), mpq_class(-1, 2), 6);
    QuadRational b(mpq_class(2), mpq_class(5), 6);
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK(a.trace() == mpq_class(3));
    QuadRational i = a.inverse();
    CHECK(a * i == QuadRational::integer(1, 6));
    // sign tests
    CHECK(QuadRational(mpq_class(-3), mpq_class(2), 3).sign_rho1() > 0);   // 2sqrt3 > 3
    CHECK(QuadRational(mpq_class(-4), mpq_class(2), 3).sign_rho1() < 0);   // 2sqrt3 < 4
    CHECK(QuadRational(mpq_class(2), mpq_class(-1), 3).sign_rho1() > 0);
    CHECK(QuadRational(mpq_class(1), mpq_class(-1), 3).sign_rho1() < 0);
}

TEST_CASE("rho embeddings multiply to the norm") {
    Prec b = bits_for_digits(50);
    QuadRational a(mpq_class(7, 3), mpq_class(5, 4), 6);
    Real prod = a.rho1(b) * a.rho2(b);
    Real nrm = Real::from_mpq(a.norm(), b);
    CHECK(abs(prod - nrm) < Real::pow10(-45, b));
}

TEST_CASE("prime ideal enumeration for d=5") {
    FieldContext ctx = make_field(5);
    auto primes = enumerate_prime_ideals(ctx, 10);
    // norms expected up to 10 in Q(sqrt3): 2 (ram), 3 (ram), 4 = no (2 is ramified: only norm-2 prime)
    // split primes p = +-1 mod 12: 11 excluded (>10); inert 5,7 give norms 25,49 > 10
    bool has2 = false, has3 = false;
    for (const auto& pi : primes) {
        if (pi.ideal.norm == 2) { has2 = true; CHECK(pi.type == PrimeType::Ramified); }
        if (pi.ideal.norm == 3) { has3 = true; CHECK(pi.type == PrimeType::Ramified); }
        CHECK(pi.ideal.norm <= 10);
    }
    CHECK(has2);
    CHECK(has3);

    auto primes2 = enumerate_prime_ideals(ctx, 30);
    int n11 = 0, n25 = 0;
    for (const auto& pi : primes2) {
        if (pi.ideal.norm == 11) { ++n11; CHECK(pi.type == PrimeType::Split); }
        if (pi.ideal.norm == 25) { ++n25; CHECK(pi.type == PrimeType::Inert); CHECK(pi.p == 5); }
    }
    CHECK(n11 == 2);  // 11 splits in Q(sqrt3)
    CHECK(n25 == 1);  // 5 inert
}

TEST_CASE("ideal counts match the element-enumeration oracle") {
    for (long d : {5L, 11L, 17L}) {
        FieldContext ctx = make_field(d);
        long X = 500;
        std::vector<long> counts(static_cast<size_t>(X) + 1, 0);
        for_each_ideal(ctx, X, [&](long n, const QuadRational&) { counts[static_cast<size_t>(n)]++; });
        std::vector<long> oracle = ideal_counts_by_element_enumeration(ctx, X);
        for (long n = 1; n <= X; ++n) {
            INFO("d = " << d << ", norm = " << n);
            CHECK(counts[static_cast<size_t>(n)] == oracle[static_cast<size_t>(n)]);
        }
    }
}

TEST_CASE("ideal enumeration small cases") {
    FieldContext ctx = make_field(5);
    auto ideals = enumerate_ideals(ctx, 4);
    CHECK(ideals[1].size() == 1);  // the ring itself
    CHECK(ideals[4].size() == 1);  // square of the ramified prime over 2
    auto none = enumerate_ideals(ctx, 1);
    CHECK(none.size() == 1);
    CHECK(none.count(1) == 1);
}

TEST_CASE("canonical associates detect ideal equality") {
    FieldContext ctx = make_field(5);
    QuadRational g(mpq_class(1), mpq_class(1), 3);  // norm -2
    QuadRational unit_mult = g * ctx.eps0.pow(3);
    QuadRational neg = -g;
    PrincipalIdeal a = make_ideal(ctx, g);
    PrincipalIdeal b = make_ideal(ctx, unit_mult);
    PrincipalIdeal c = make_ideal(ctx, neg);
    CHECK(ideal_equal(ctx, a, b));
    CHECK(ideal_equal(ctx, a, c));
    PrincipalIdeal other = make_ideal(ctx, QuadRational(mpq_class(1), mpq_class(-1), 3));
    CHECK(ideal_equal(ctx, a, other));  // conjugate of the ramified prime is itself
}

TEST_CASE("narrow class numbers by reduced forms") {
    CHECK(narrow_class_number_by_forms(12) == 2);    // Q(sqrt3), h=1, norm +1
    CHECK(narrow_class_number_by_forms(24) == 2);    // Q(sqrt6)
    CHECK(narrow_class_number_by_forms(28) == 2);    // Q(sqrt7)
    CHECK(narrow_class_number_by_forms(120) == 4);   // Q(sqrt30), h=2
    CHECK(narrow_class_number_by_forms(8) == 1);     // Q(sqrt2), norm -1 unit
    CHECK(narrow_class_number_by_forms(40) == 2);    // Q(sqrt10), h=2, norm -1
}
