#include "doctest.h"

#include "propcalc/rational.hpp"

#include <map>

using namespace propcalc;

TEST_SUITE_BEGIN("rational");

TEST_CASE("construction normalizes to lowest terms, positive denominator") {
    CHECK(Rational(2, 6).str() == "1/3");
    CHECK(Rational(-4, 6).str() == "-2/3");
    CHECK(Rational(4, -6).str() == "-2/3");
    CHECK(Rational(-4, -6).str() == "2/3");
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational(7, 1).str() == "7");
    CHECK(Rational(2, 6).den_string() == "3");
    CHECK(Rational(4, -6).den_string() == "3");
}

TEST_CASE("arithmetic stays canonical") {
    Rational a(1, 3), b(1, 6);
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2");
    CHECK((-a).str() == "-1/3");
    CHECK((a - a).is_zero());
    CHECK(Rational(1, 2) + Rational(1, 2) == Rational(1));
}

TEST_CASE("no precision loss on long chains") {
    // sum of 1/k(k+1) telescopes to 1 - 1/(n+1)
    Rational s(0);
    int n = 200;
    for (int k = 1; k <= n; ++k) s += Rational(1, static_cast<long>(k) * (k + 1));
    CHECK(s == Rational(n, n + 1));

    // repeated squaring blows past 64-bit intermediates
    Rational t(3, 7);
    for (int i = 0; i < 7; ++i) t *= t;
    CHECK(t * t == (t * t));
    CHECK(t.num_string().size() > 20);
}

TEST_CASE("division by zero is an error") {
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), math_error);
    CHECK_THROWS_AS(Rational(1, 0), math_error);
}

TEST_CASE("parse round-trips") {
    for (const char* s : {"0", "5", "-5", "1/3", "-22/7", "100000000000000000001/3"}) {
        CHECK(Rational::parse(s).str() == s);
    }
    CHECK(Rational::parse("4/6").str() == "2/3");
    CHECK_THROWS_AS(Rational::parse(""), input_error);
    CHECK_THROWS_AS(Rational::parse("1/"), input_error);
    CHECK_THROWS_AS(Rational::parse("/2"), input_error);
    CHECK_THROWS_AS(Rational::parse("a"), input_error);
    CHECK_THROWS_AS(Rational::parse("1.5"), input_error);
}

TEST_CASE("ordering and map keys") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    std::map<Rational, int> m;
    m[Rational(1, 2)] = 1;
    m[Rational(2, 4)] = 2;
    CHECK(m.size() == 1);
}

TEST_SUITE_END();
