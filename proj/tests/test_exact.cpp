#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "su3cg/exact.hpp"

using namespace su3cg;

static ExactReal sqrt_of(long num, long den = 1) {
    return ExactReal::sqrt_rational(frac(num, den));
}

TEST_CASE("canonicalize reduces square parts and merges radicands") {
    // sqrt(8/9) -> (2/3) sqrt(2)
    CHECK(sqrt_of(8, 9) == ExactReal::term(frac(2, 3), 2));
    // sqrt(2) + sqrt(8) -> 3 sqrt(2)
    CHECK(sqrt_of(2) + sqrt_of(8) == ExactReal::term(Rational(3), 2));
    // (1/2) sqrt(2) * sqrt(2) -> 1
    CHECK(ExactReal(frac(1, 2)) * sqrt_of(2) * sqrt_of(2) == ExactReal(1));
    // raw-term-list entry point
    ExactReal c = ExactReal::canonicalize({{Rational(1), frac(8, 9)}, {Rational(2), Rational(2)}});
    CHECK(c == ExactReal::term(frac(2, 3), 2) + ExactReal::term(Rational(2), 2));
}

TEST_CASE("arithmetic: conjugates, rationalization, division") {
    ExactReal a = sqrt_of(2) + sqrt_of(3);
    ExactReal b = sqrt_of(2) - sqrt_of(3);
    CHECK(a * b == ExactReal(-1));

    CHECK(ExactReal(1) / sqrt_of(2) == ExactReal::term(frac(1, 2), 2));

    // (3 sqrt 2) / (sqrt 2 + 1) = 6 - 3 sqrt 2, verified by multiplying back
    ExactReal num = ExactReal(3) * sqrt_of(2);
    ExactReal den = sqrt_of(2) + ExactReal(1);
    ExactReal q = num / den;
    CHECK(q == ExactReal(6) - ExactReal(3) * sqrt_of(2));
    CHECK(q * den == num);

    CHECK_THROWS_AS(num / ExactReal(), DivisionByZero);
}

TEST_CASE("factorial_ratio") {
    CHECK(factorial_ratio({4}, {2, 2}) == Rational(6));
    CHECK(factorial_ratio({0}, {0}) == Rational(1));
    CHECK(factorial_ratio({10, 3}, {7, 6}) == Rational(6));
}

TEST_CASE("canonical uniqueness on random term lists") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> small(1, 30), coef(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<Rational, Rational>> raw;
        double approx = 0.0;
        for (int i = 0; i < 4; ++i) {
            int c = coef(rng);
            int rn = small(rng), rd = small(rng);
            raw.push_back({Rational(c), frac(rn, rd)});
            approx += c * std::sqrt(double(rn) / rd);
        }
        ExactReal x = ExactReal::canonicalize(raw);
        // float screen
        CHECK(std::abs(x.to_double() - approx) < 1e-9 * (1 + std::abs(approx)));
        // exact re-canonicalization: rebuilding from the canonical terms is a no-op
        std::vector<std::pair<Rational, Rational>> back;
        for (const auto& t : x.terms()) back.push_back({t.coeff, Rational(t.rad)});
        CHECK(ExactReal::canonicalize(back) == x);
        // radicands squarefree, sorted, distinct
        for (size_t i = 0; i + 1 < x.terms().size(); ++i)
            CHECK(x.terms()[i].rad < x.terms()[i + 1].rad);
    }
}

TEST_CASE("field laws on random small values") {
    std::mt19937 rng(999);
    std::uniform_int_distribution<int> rad(1, 12), coef(-4, 4);
    auto rand_val = [&] {
        ExactReal v;
        for (int i = 0; i < 2; ++i)
            v += ExactReal(Rational(coef(rng))) * sqrt_of(rad(rng));
        return v;
    };
    for (int trial = 0; trial < 100; ++trial) {
        ExactReal a = rand_val(), b = rand_val(), c = rand_val();
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a + (b + c) == (a + b) + c);
        if (!a.is_zero()) {
            CHECK(a * (ExactReal(1) / a) == ExactReal(1));
            CHECK((a * b) / a == b);
        }
        // single-term squares are rational
        ExactReal s = sqrt_of(rad(rng), rad(rng));
        CHECK((s * s).is_rational());
    }
}

TEST_CASE("text rendering and parsing") {
    ExactReal v = ExactReal::term(frac(-7, 40), 2);
    CHECK(v.to_string() == "-(7/40)*sqrt(2)");
    CHECK(ExactReal().to_string() == "0");
    CHECK(ExactReal(6).to_string() == "6");
    CHECK((ExactReal(6) - ExactReal(3) * sqrt_of(2)).to_string() == "6 - 3*sqrt(2)");
    CHECK(ExactReal::term(frac(1, 3), 6).to_string() == "(1/3)*sqrt(6)");
    CHECK(sqrt_of(2).to_string() == "sqrt(2)");
    CHECK((-sqrt_of(2)).to_string() == "-sqrt(2)");
    CHECK(ExactReal(frac(-2, 3)).to_string() == "-2/3");

    for (const auto& s : {"-(7/40)*sqrt(2)", "0", "6 - 3*sqrt(2)", "(1/3)*sqrt(6)",
                          "sqrt(2)", "-sqrt(2)", "-2/3", "1 + sqrt(2) - (3/2)*sqrt(5)"}) {
        auto parsed = ExactReal::parse(s);
        REQUIRE(parsed.has_value());
        CHECK(parsed->to_string() == s);
    }
}

TEST_CASE("decimal rendering is display-only and plausible") {
    ExactReal v = ExactReal::term(frac(-7, 40), 2);
    CHECK(v.to_decimal(6).substr(0, 9) == "-0.247487");
}

TEST_CASE("sign") {
    CHECK(ExactReal().sign() == 0);
    CHECK(sqrt_of(2).sign() == 1);
    CHECK((-sqrt_of(2)).sign() == -1);
    CHECK((sqrt_of(2) - ExactReal(1)).sign() == 1);
    CHECK((sqrt_of(2) - ExactReal(2)).sign() == -1);
}

TEST_CASE("JSON term rendering") {
    ExactReal v = ExactReal::term(frac(-7, 40), 2) + ExactReal(frac(1, 3));
    CHECK(v.to_json() ==
          "{\"terms\":[{\"num\":1,\"den\":3,\"rad\":1},{\"num\":-7,\"den\":40,\"rad\":2}]}");
    CHECK(ExactReal().to_json() == "{\"terms\":[]}");
}
