// Exact arithmetic in Q(w), w a primitive cube root of unity (w^2 = -1 - w).
// Expected values below are frozen by hand from the defining relations.

#include <catch2/catch_amalgamated.hpp>

#include "glq/cyclotomic.hpp"

using namespace glq;

TEST_CASE("rational canonicalization") {
    Rational r(2, 4);
    CHECK(r == Rational(1, 2));
    CHECK(numerator(r) == 1);
    CHECK(denominator(r) == 2);
    Rational s = Rational(3) / Rational(-6);
    CHECK(denominator(s) == 2);
    CHECK(numerator(s) == -1);
}

TEST_CASE("omega satisfies 1 + w + w^2 = 0") {
    CycNum one(1);
    CHECK(one + omega() + omega() * omega() == CycNum(0));
    CHECK(omega() * omega() * omega() == one);
    CHECK(omega() * omega() == CycNum(Rational(-1), Rational(-1)));
}

TEST_CASE("q_power reduces the exponent mod 3") {
    CHECK(q_power(0) == CycNum(1));
    CHECK(q_power(1) == omega());
    CHECK(q_power(2) == CycNum(Rational(-1), Rational(-1)));
    CHECK(q_power(3) == CycNum(1));
    CHECK(q_power(-1) == q_power(2));
    CHECK(q_power(-2) == omega());
    CHECK(q_power(5) == q_power(2));
}

TEST_CASE("multiplication folds w^2 back into the basis") {
    // (1 + 2w)(3 + w) = 3 + 7w + 2w^2 = 1 + 5w
    CycNum x(Rational(1), Rational(2));
    CycNum y(Rational(3), Rational(1));
    CHECK(x * y == CycNum(Rational(1), Rational(5)));
}

TEST_CASE("field inverse via the conjugate, norm a^2 - ab + b^2") {
    CHECK(cyc_inv(CycNum(Rational(1), Rational(1))) == CycNum(Rational(0), Rational(-1)));
    CHECK(cyc_inv(omega()) == q_power(2));
    CHECK(cyc_inv(CycNum(2)) == CycNum(Rational(1, 2)));
    // (q - 1)^{-1} = (-2 - w)/3
    CycNum qm1 = omega() - CycNum(1);
    CHECK(cyc_inv(qm1) == CycNum(Rational(-2, 3), Rational(-1, 3)));
    CHECK(qm1 * cyc_inv(qm1) == CycNum(1));
    CHECK_THROWS_AS(cyc_inv(CycNum(0)), std::domain_error);
}

TEST_CASE("field axioms on a small grid") {
    std::vector<CycNum> grid;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            grid.push_back(CycNum(Rational(a), Rational(b, 2)));
    for (const auto& x : grid)
        for (const auto& y : grid) {
            CHECK(x + y == y + x);
            CHECK(x * y == y * x);
            CHECK(x * (y + CycNum(1)) == x * y + x);
            if (!y.is_zero())
                CHECK(x * y * cyc_inv(y) == x);
        }
}

TEST_CASE("named operation aliases") {
    CycNum x(Rational(1), Rational(2)), y(Rational(3), Rational(1));
    CHECK(cyc_add(x, y) == x + y);
    CHECK(cyc_sub(x, y) == x - y);
    CHECK(cyc_mul(x, y) == x * y);
}

TEST_CASE("pretty rendering") {
    CHECK(pretty(CycNum(0)) == "0");
    CHECK(pretty(CycNum(1)) == "1");
    CHECK(pretty(CycNum(Rational(-1, 2))) == "-1/2");
    CHECK(pretty(omega()) == "q");
    CHECK(pretty(CycNum(0) - omega()) == "-q");
    CHECK(pretty(omega() + omega()) == "2*q");
    CHECK(pretty(q_power(2)) == "q2");
    CHECK(pretty(CycNum(0) - q_power(2)) == "-q2");
    CHECK(pretty(q_power(2) * CycNum(3)) == "3*q2");
    CHECK(pretty(omega() - CycNum(1)) == "q-1");          // q - 1
    CHECK(pretty(CycNum(1) - omega()) == "1-q");          // 1 - q
    CHECK(pretty(omega() + CycNum(2)) == "q+2");          // also equals 1 - q2
    CHECK(pretty(q_power(2) - omega()) == "-1-2*q");      // q2 - q
    CHECK(pretty(CycNum(Rational(0), Rational(1, 2))) == "1/2*q");
}

TEST_CASE("parse accepts q, q2 and w spellings and round-trips pretty") {
    CHECK(parse_cyc("q-1") == omega() - CycNum(1));
    CHECK(parse_cyc("q2") == q_power(2));
    CHECK(parse_cyc("w") == omega());
    CHECK(parse_cyc("-w") == CycNum(0) - omega());
    CHECK(parse_cyc("1/2*q") == CycNum(Rational(0), Rational(1, 2)));
    CHECK(parse_cyc("2") == CycNum(2));
    CHECK(parse_cyc("-2-q") == CycNum(Rational(-2), Rational(-1)));
    CHECK(parse_cyc(" 1 + q ") == CycNum(1) + omega());
    CHECK_THROWS_AS(parse_cyc("qq"), std::invalid_argument);
    CHECK_THROWS_AS(parse_cyc(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_cyc("1//2"), std::invalid_argument);

    std::vector<CycNum> grid;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            grid.push_back(CycNum(Rational(a), Rational(b)));
            grid.push_back(CycNum(Rational(a, 3), Rational(b, 2)));
        }
    for (const auto& x : grid)
        CHECK(parse_cyc(pretty(x)) == x);
}
