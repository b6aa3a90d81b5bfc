#include <catch2/catch_amalgamated.hpp>

#include "cbkp/scalar.hpp"

using namespace cbkp;

TEST_CASE("rationals normalize to lowest terms with positive denominator") {
    Rational r = rational_from_string("6/-4");
    CHECK(numerator(r) == -3);
    CHECK(denominator(r) == 2);
    CHECK(rational_to_string(r) == "-3/2");
    CHECK(rational_from_string("-7/21") == rational_from_string("-1/3"));
    CHECK(rational_from_string("5") == Rational(5));
    CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
}

TEST_CASE("gaussian rational arithmetic") {
    Scalar a(Rational(1), Rational(2));   // 1 + 2i
    Scalar b(Rational(3), Rational(-1));  // 3 - i
    CHECK(a + b == Scalar(Rational(4), Rational(1)));
    CHECK(a * b == Scalar(Rational(5), Rational(5)));
    CHECK(a - a == Scalar(0));
    CHECK((a / b) * b == a);
    CHECK_THROWS_AS(a / Scalar(0), std::invalid_argument);

    CHECK(Scalar::unit_im() * Scalar::unit_im() == Scalar(-1));
}

TEST_CASE("conjugation is an involutive ring morphism") {
    Scalar a(Rational(2), Rational(-3));
    Scalar b(rational_from_string("1/2"), Rational(5));
    CHECK(a.conj().conj() == a);
    CHECK((a + b).conj() == a.conj() + b.conj());
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK(Scalar(7).conj() == Scalar(7));
}

TEST_CASE("scalar rendering") {
    CHECK(Scalar(3).str() == "3");
    CHECK(Scalar(rational_from_string("-1/2")).str() == "-1/2");
    CHECK(Scalar::unit_im().str() == "i");
    CHECK((-Scalar::unit_im()).str() == "-i");
    CHECK(Scalar(Rational(1), Rational(1)).str() == "1+i");
    CHECK(Scalar(Rational(0), Rational(2)).str() == "2*i");
    CHECK(Scalar(rational_from_string("1/2"), Rational(-3)).str() == "1/2-3*i");
}

TEST_CASE("generalized binomials") {
    CHECK(binomial(4, 2) == Rational(6));
    CHECK(binomial(4, 5) == Rational(0));
    CHECK(binomial(-1, 3) == Rational(-1));
    CHECK(binomial(-2, 1) == Rational(-2));
    CHECK(binomial(-2, 2) == Rational(3));
    CHECK(binomial(-3, 2) == Rational(6));
    CHECK(binomial(0, 0) == Rational(1));
}
