#include <doctest.h>

#include <cmath>
#include <random>

#include "critlab/exactseries/extended_rational.hpp"
#include "test_helpers.hpp"

using critlab::ExtendedRational;
using critlab::testing::random_er;

TEST_CASE("radical products") {
    auto r2 = ExtendedRational::sqrt2(), r3 = ExtendedRational::sqrt3(), r6 = ExtendedRational::sqrt6();
    CHECK(r2 * r3 == r6);
    CHECK(r2 * r6 == 2 * r3);
    CHECK(r3 * r6 == 3 * r2);
    CHECK(r6 * r6 == ExtendedRational(6));
    CHECK(r2 * r2 == ExtendedRational(2));
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto x = random_er(rng), y = random_er(rng), z = random_er(rng);
        CHECK((x * y) * z == x * (y * z));
        CHECK((x + y) + z == x + (y + z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x * y == y * x);
        CHECK(x - x == ExtendedRational());
        if (!x.is_zero()) {
            CHECK(x * x.inverse() == ExtendedRational(1));
            CHECK((y / x) * x == y);
        }
    }
}

TEST_CASE("division by zero throws") { CHECK_THROWS(ExtendedRational().inverse()); }

TEST_CASE("exact sign agrees with floating point away from zero") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        auto x = random_er(rng);
        double v = x.to_double();
        if (std::abs(v) < 1e-9) continue;
        CHECK(x.sign() == (v > 0 ? 1 : -1));
    }
    // nearly cancelling: 99/70 - sqrt2 > 0 and 577/408 - sqrt2 > 0, 1393/985 - sqrt2 < 0
    CHECK((ExtendedRational::fraction(577, 408) - ExtendedRational::sqrt2()).sign() == 1);
    CHECK((ExtendedRational::fraction(1393, 985) - ExtendedRational::sqrt2()).sign() == -1);
    // sqrt2 + sqrt3 vs sqrt6 + 1/1000: 3.1462... vs 2.4505
    CHECK((ExtendedRational::sqrt2() + ExtendedRational::sqrt3() - ExtendedRational::sqrt6()).sign() == 1);
    // 5 - 2*sqrt6 = (sqrt3 - sqrt2)^2 > 0, tiny
    CHECK((ExtendedRational(5) - 2 * ExtendedRational::sqrt6()).sign() == 1);
    CHECK(ExtendedRational().sign() == 0);
}

TEST_CASE("in-field square roots") {
    CHECK(ExtendedRational(223948800).sqrt() == 8640 * ExtendedRational::sqrt3());
    CHECK(ExtendedRational(4320 * 4320).sqrt() == ExtendedRational(4320));
    CHECK(ExtendedRational::fraction(1, 8).sqrt() == ExtendedRational::fraction(1, 4) * ExtendedRational::sqrt2());
    CHECK(ExtendedRational::fraction(3, 2).sqrt() == ExtendedRational::fraction(1, 2) * ExtendedRational::sqrt6());
    CHECK_THROWS(ExtendedRational(5).sqrt());
    CHECK_THROWS(ExtendedRational(-4).sqrt());
    CHECK_THROWS(ExtendedRational::sqrt2().sqrt());
}

TEST_CASE("parse and print") {
    auto x = ExtendedRational::parse("-5/288*sqrt2 + 3 - sqrt6");
    CHECK(x == ExtendedRational(mpq_class(3), mpq_class(-5, 288), 0, -1));
    CHECK(ExtendedRational::parse(x.to_string()) == x);
    CHECK(ExtendedRational::parse("25020/7") == ExtendedRational::fraction(25020, 7));
    CHECK(ExtendedRational::parse("-1/24 sqrt3").c() == mpq_class(-1, 24));
    CHECK_THROWS(ExtendedRational::parse("sqrt5"));
    CHECK_THROWS(ExtendedRational::parse(""));
}
