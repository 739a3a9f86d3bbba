#include <doctest.h>

#include "starksic/bigcomplex.hpp"
#include "starksic/bigfloat.hpp"

using namespace starksic;

TEST_CASE("decimal round trip") {
    Prec b = bits_for_digits(50);
    Real x = Real::from_decimal("3.14159265358979323846264338327950288419716939937510", b);
    std::string s = x.decimal(50);
    Real y = Real::from_decimal(s, b);
    CHECK(abs(x - y) < Real::pow10(-48, b));
    CHECK(Real::from_decimal("0", b).is_zero());
    CHECK(Real(0, b).decimal(10) == "0");
}

TEST_CASE("precision of results follows operands") {
    Real a(1, 64), c(3, 256);
    Real q = a / c;
    CHECK(q.prec() == 256);
    // 1/3 at 256 bits is good to ~77 digits
    Real err = abs(q * 3 - 1);
    CHECK(err < Real::pow10(-70, 256));
}

TEST_CASE("pi and sin_cos_pi") {
    Prec b = bits_for_digits(60);
    Real t = Real(1, b) / 3;  // angle pi/3
    Real s(b), c(b);
    sin_cos_pi(t, s, c);
    CHECK(abs(c - Real::from_decimal("0.5", b)) < Real::pow10(-58, b));
    Real sq = s * s + c * c;
    CHECK(abs(sq - 1) < Real::pow10(-58, b));
}

TEST_CASE("complex algebra") {
    Prec b = bits_for_digits(40);
    Complex z(Real(3, b), Real(4, b));
    CHECK(abs(abs(z) - 5) < Real::pow10(-38, b));
    Complex w = z * conj(z);
    CHECK(abs(w.re - 25) < Real::pow10(-36, b));
    CHECK(abs(w.im) < Real::pow10(-36, b));
    Complex u = exp_i_pi(Real(1, b) / 2);  // i
    CHECK(abs(u.re) < Real::pow10(-38, b));
    CHECK(abs(u.im - 1) < Real::pow10(-38, b));
}

TEST_CASE("addmul accumulators") {
    Prec b = bits_for_digits(40);
    Real acc(1, b);
    acc.addmul(Real(2, b), Real(3, b));
    CHECK(acc == Real(7, b));
    acc.submul(Real(3, b), Real(2, b));
    CHECK(acc == Real(1, b));
    Complex zacc(b);
    zacc.addmul(Complex(Real(1, b), Real(2, b)), Complex(Real(3, b), Real(4, b)));
    CHECK(zacc.re == Real(-5, b));
    CHECK(zacc.im == Real(10, b));
}

TEST_CASE("mpz mpq conversion") {
    Prec b = bits_for_digits(80);
    mpz_class big("123456789012345678901234567890");
    Real r = Real::from_mpz(big, b);
    CHECK(r.to_mpz_round() == big);
    mpq_class q(1, 7);
    Real rq = Real::from_mpq(q, b);
    CHECK(abs(rq * 7 - 1) < Real::pow10(-75, b));
}
