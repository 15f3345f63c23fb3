#include "grforge/rational.h"

#include <doctest.h>

#include <stdexcept>

using grforge::Rational;

TEST_CASE("rational normalises sign and common factors") {
    Rational r(6, -8);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 4);
    CHECK(Rational(0, 5) == Rational(0));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational arithmetic is exact") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 10) * Rational(3) == Rational(3, 10));
    CHECK(Rational(3, 4) / Rational(3, 2) == Rational(1, 2));
    CHECK(Rational(1, 4) - Rational(1, 2) == Rational(-1, 4));
    Rational sum(0);
    for (int i = 0; i < 10; ++i)
        sum += Rational(1, 10);
    CHECK(sum == Rational(1));
}

TEST_CASE("rational ordering compares values") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(7, 10) >= Rational(7, 10));
}

TEST_CASE("rational parse and print") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("1.25") == Rational(5, 4));
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-0.5") == Rational(-1, 2));
    CHECK(Rational(5, 4).to_string() == "1.25");
    CHECK(Rational(1, 3).to_string() == "1/3");
    CHECK(Rational(7).to_string() == "7");
    CHECK_THROWS(Rational::parse("abc"));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK(Rational(1, 8).to_double() == doctest::Approx(0.125));
}
