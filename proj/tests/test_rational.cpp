#include <car/rational.hpp>

#include "doctest.h"

#include <random>

using car::BigInt;
using car::Rat;

TEST_CASE("rationals reduce to lowest terms with positive denominator") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, 4) == Rat(-1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4).den() == 2);
    CHECK(Rat(0, 7).num() == 0);
    CHECK(Rat(0, 7).den() == 1); // canonical zero
    CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic is exact over random fractions") {
    std::mt19937_64 rng(20240517);
    std::uniform_int_distribution<long long> num(-1000000000LL, 1000000000LL);
    std::uniform_int_distribution<long long> den(1, 1000000000LL);
    for (int i = 0; i < 1000; ++i) {
        Rat a(num(rng), den(rng));
        Rat b(num(rng), den(rng));
        CHECK((a + b) - b == a);
        CHECK((a - b) + b == a);
        if (!b.is_zero()) CHECK((a * b) / b == a);
    }
}

TEST_CASE("arbitrary precision survives huge components") {
    BigInt big("123456789012345678901234567890123456789");
    Rat a(big, BigInt(7));
    Rat b(1, big);
    CHECK(a * b == Rat(1, 7)); // the big factors cancel exactly
    CHECK((a + b) - b == a);
    CHECK(Rat(big, big) == Rat(1));
    CHECK(Rat(big + 1, big).num() == big + 1); // consecutive integers are coprime
}

TEST_CASE("parsing fractions and integers") {
    CHECK(Rat::parse("3/4") == Rat(3, 4));
    CHECK(Rat::parse("-3/4") == Rat(-3, 4));
    CHECK(Rat::parse("+7") == Rat(7));
    CHECK(Rat::parse("6/4") == Rat(3, 2));
    CHECK_THROWS_AS(Rat::parse("3/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("a/2"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("0.5"), std::invalid_argument); // decimals only via parse_decimal
    CHECK_THROWS_AS(Rat::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("1/2/3"), std::invalid_argument);
}

TEST_CASE("decimal parsing is exact") {
    CHECK(Rat::parse_decimal("0.31831") == Rat(31831, 100000));
    CHECK(Rat::parse_decimal("-2.5") == Rat(-5, 2));
    CHECK(Rat::parse_decimal(".5") == Rat(1, 2));
    CHECK(Rat::parse_decimal("2.") == Rat(2));
    CHECK(Rat::parse_decimal("1/4") == Rat(1, 4));
    CHECK_THROWS_AS(Rat::parse_decimal("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse_decimal("."), std::invalid_argument);
}

TEST_CASE("string form round trips") {
    CHECK(Rat(1, 2).str() == "1/2");
    CHECK(Rat(-3, 7).str() == "-3/7");
    CHECK(Rat(5).str() == "5");
    CHECK(Rat(0).str() == "0");
    for (const char* s : {"17/31", "-2/9", "4", "0"}) CHECK(Rat::parse(s).str() == s);
}

TEST_CASE("ordering") {
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(Rat(-1, 2) < Rat(1, 3));
    CHECK(Rat(1, 2) <= Rat(2, 4));
    CHECK(Rat(2, 3) > Rat(1, 2));
    CHECK(Rat(1, 2).abs() == Rat(-1, 2).abs());
}
