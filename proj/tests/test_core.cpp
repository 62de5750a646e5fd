#include <doctest.h>

#include "bell/core.hpp"
#include "bell/families.hpp"
#include "oracles.hpp"

#include <set>

using namespace bell;

namespace {
Functional F(const std::string& s) { return parse_functional(s); }
}

TEST_CASE("scenario counts") {
    Scenario s({3, 2, 2});
    CHECK(s.vertex_count() == 128);
    CHECK(s.correlation_dimension() == 4 * 3 * 3 - 1);
    CHECK(Scenario({2, 2, 2, 2}).correlation_dimension() == 80);
    CHECK_THROWS(Scenario({2, 0}));
}

TEST_CASE("functional keeps no zero coefficients") {
    Functional f(Scenario({2, 2}));
    f.add({1, 1}, Rational(1, 2));
    f.add({1, 1}, Rational(-1, 2));
    CHECK(f.is_zero());
    CHECK_THROWS(f.add({3, 1}, 1));
    CHECK_THROWS(f.add({1}, 1));
}

TEST_CASE("evaluate") {
    Functional c = F("scenario n=2 m=2,2\n+1/2 A1 B1\n+1/2 A1 B2\n+1/2 A2 B1\n-1/2 A2 B2\n");
    Strategy plus{{1, 1}, {1, 1}};
    CHECK(evaluate(c, plus) == 1);
    CHECK(evaluate(c, Strategy{{1, -1}, {1, 1}}) == 1);
    CHECK(evaluate(c, Strategy{{-1, -1}, {1, 1}}) == -1);
    CHECK_THROWS(evaluate(c, Strategy{{1, 1}}));

    // catalog entry 1 at the all-plus point is the sum of its coefficients
    Functional s1 = F("scenario n=3 m=2,2,2\n+1 A1\n+1 B1\n-1 A1B1\n+1 C1\n-1 A1C1\n-1 B1C1\n+1 A1B1C1\n");
    CHECK(evaluate(s1, Strategy{{1, 1}, {1, 1}, {1, 1}}) == 1);
    CHECK(s1 == sliwa(1));
}

TEST_CASE("strategy bits") {
    Scenario s({2, 3});
    for (std::uint64_t b = 0; b < s.vertex_count(); ++b) CHECK(strategy_bits(s, strategy_from_bits(s, b)) == b);
    // party 0 setting 1 is the top bit, set bit means -1
    auto st = strategy_from_bits(s, 1u << 4);
    CHECK(st[0][0] == -1);
    CHECK(st[1][2] == 1);
}

TEST_CASE("text format") {
    Functional f = F("# comment\nscenario n=2 m=2,2\n  +1/2 A1 B1\n-3/4 B2\n+2 1\n1/2 A2B1\n");
    CHECK(f.coeff({1, 1}) == Rational(1, 2));
    CHECK(f.coeff({0, 2}) == Rational(-3, 4));
    CHECK(f.constant() == 2);
    CHECK(f.coeff({2, 1}) == Rational(1, 2));
    CHECK(parse_functional(render(f)) == f);
    CHECK(render(f).find("+2/1 1\n") != std::string::npos);

    // order and whitespace do not matter
    CHECK(F("scenario n=2 m=2,2\n-3/4 B2\n+1/2   A1   B1\n") == F("scenario n=2 m=2,2\n+1/2 A1 B1\n-3/4 B2\n"));

    SUBCASE("errors carry line numbers") {
        auto line_of = [](const std::string& t) {
            try {
                parse_functional(t);
            } catch (const ParseError& e) {
                return e.line;
            }
            return -1;
        };
        CHECK(line_of("scenario n=2 m=2,2\n+1/2 A1 B1\n+1/x A2\n") == 3);
        CHECK(line_of("scenario n=2 m=2,2\n+1/2 A3\n") == 2);
        CHECK(line_of("scenario n=2 m=2,2\n+1/2 C1\n") == 2);
        CHECK(line_of("\n\nscenario n=3 m=2,2\n") == 3);
        CHECK(line_of("scenario n=2 m=2,2\n+1/0 A1\n") == 2);
        CHECK(line_of("scenario n=2 m=2,2\n+1/2 A1 A2\n") == 2);
        CHECK(line_of("") >= 0);
    }
}

TEST_CASE("render round trip on random functionals") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto s = oracle::random_scenario(rng, 4, 3);
        auto f = oracle::random_functional(s, rng, -7, 7, 1 + i % 6);
        CHECK(parse_functional(render(f)) == f);
    }
}

TEST_CASE("evaluate is linear") {
    std::mt19937_64 rng(3);
    Scenario s({2, 3, 2});
    for (int i = 0; i < 50; ++i) {
        auto f = oracle::random_functional(s, rng), g = oracle::random_functional(s, rng);
        Rational a(i - 20, 3), b(7, i + 1);
        a.canonicalize();
        b.canonicalize();
        auto st = strategy_from_bits(s, rng() % s.vertex_count());
        CHECK(evaluate(a * f + b * g, st) == a * evaluate(f, st) + b * evaluate(g, st));
    }
}

TEST_CASE("transforms act as a group") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        Scenario s(i % 2 ? std::vector<int>{2, 2, 2} : std::vector<int>{3, 2, 3});
        auto f = oracle::random_functional(s, rng);
        auto t1 = oracle::random_transform(s, rng), t2 = oracle::random_transform(s, rng);
        CHECK(apply_transform(apply_transform(f, t1), t2) == apply_transform(f, compose(t2, t1)));
        CHECK(apply_transform(apply_transform(f, t1), inverse(t1)) == f);
        CHECK(apply_transform(f, Transform::identity(s)) == f);
        CHECK(compose(inverse(t1), t1) == Transform::identity(s));
    }
}

TEST_CASE("transform expressions") {
    Functional c = chsh();
    // both parties' settings swapped
    Functional swapped = apply_transform(c, parse_transform("perm A 1 2, perm B 1 2", c.scenario()));
    CHECK(swapped == F("scenario n=2 m=2,2\n+1/2 A2B2\n+1/2 A2B1\n+1/2 A1B2\n-1/2 A1B1\n"));

    Functional s1 = sliwa(1);
    Functional flipped = apply_transform(s1, parse_transform("flip C1", s1.scenario()));
    CHECK(flipped == F("scenario n=3 m=2,2,2\n+1 A1\n+1 B1\n-1 A1B1\n-1 C1\n+1 A1C1\n+1 B1C1\n-1 A1B1C1\n"));

    CHECK(apply_transform(c, parse_transform("neg", c.scenario())) == -c);
    CHECK(apply_transform(c, parse_transform("flip A", c.scenario())) == apply_transform(c, parse_transform("flip A1, flip A2", c.scenario())));
    // left to right: swap first, then flip the (new) A1
    Functional g = F("scenario n=2 m=2,2\n+1 A1\n+1 B2\n");
    CHECK(apply_transform(g, parse_transform("swap A B, flip A2", g.scenario())) == F("scenario n=2 m=2,2\n+1 B1\n-1 A2\n"));
    // three-cycle 1 -> 2 -> 3 -> 1
    Functional h = F("scenario n=1 m=3\n+1 A1\n+2 A2\n+3 A3\n");
    CHECK(apply_transform(h, parse_transform("perm A 1 2 3", h.scenario())) == F("scenario n=1 m=3\n+1 A2\n+2 A3\n+3 A1\n"));

    CHECK_THROWS(parse_transform("swap A C", c.scenario()));
    CHECK_THROWS(parse_transform("perm A 1 3", c.scenario()));
    CHECK_THROWS(parse_transform("spin A", c.scenario()));
    CHECK_THROWS(parse_transform("swap A B", Scenario({2, 3})));
}

TEST_CASE("canonical form") {
    // the eight sign/relabel variants of CHSH
    const char* variants[] = {"+1/2 A1B1\n-1/2 A1B2\n-1/2 A2B1\n-1/2 A2B2\n", "-1/2 A1B1\n-1/2 A1B2\n+1/2 A2B1\n-1/2 A2B2\n",
                              "-1/2 A1B1\n+1/2 A1B2\n-1/2 A2B1\n-1/2 A2B2\n", "+1/2 A1B1\n+1/2 A1B2\n+1/2 A2B1\n-1/2 A2B2\n",
                              "-1/2 A1B1\n-1/2 A1B2\n-1/2 A2B1\n+1/2 A2B2\n", "+1/2 A1B1\n-1/2 A1B2\n+1/2 A2B1\n+1/2 A2B2\n",
                              "+1/2 A1B1\n+1/2 A1B2\n-1/2 A2B1\n+1/2 A2B2\n", "-1/2 A1B1\n+1/2 A1B2\n+1/2 A2B1\n+1/2 A2B2\n"};
    std::set<std::string> reps, raw;
    for (auto v : variants) {
        Functional f = F(std::string("scenario n=2 m=2,2\n") + v);
        raw.insert(render(f));
        reps.insert(render(canonical_form(f)));
    }
    CHECK(raw.size() == 8);
    CHECK(reps.size() == 1);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        Scenario s(i % 3 ? std::vector<int>{2, 2, 2} : std::vector<int>{2, 3, 2});
        auto f = oracle::random_functional(s, rng);
        auto c = canonical_form(f);
        CHECK(canonical_form(apply_transform(f, oracle::random_transform(s, rng))) == c);
        CHECK(canonical_form(c) == c);
        CHECK(!lex_less(f, c));
    }
    // different classes stay apart
    CHECK(!(canonical_form(sliwa(1)) == canonical_form(sliwa(2))));
    CHECK_THROWS_AS(canonical_form(mabk(6), 1e3), OrbitTooLarge);
}
