#include <doctest.h>

#include "bell/families.hpp"
#include "bell/local.hpp"
#include "oracles.hpp"

using namespace bell;

TEST_CASE("bound of chsh and the zero functional") {
    auto r = lhv_bound(chsh());
    CHECK(r.lhv_bound == 1);
    CHECK(r.saturating_count == 8);
    CHECK(r.maximizers.size() == 8);
    for (std::size_t i = 0; i < r.maximizers.size(); ++i) CHECK(evaluate(chsh(), r.maximizer(chsh().scenario(), i)) == 1);
    CHECK(std::is_sorted(r.maximizers.begin(), r.maximizers.end()));

    Functional z{Scenario({2, 2, 2})};
    auto rz = lhv_bound(z);
    CHECK(rz.lhv_bound == 0);
    CHECK(rz.saturating_count == 64);
}

TEST_CASE("parallel kernel, serial reference and the naive oracle agree") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 150; ++i) {
        auto s = oracle::random_scenario(rng, 4, 3);
        auto f = oracle::random_functional(s, rng, -5, 5, 1 + i % 4);
        auto a = lhv_bound(f), b = lhv_bound_reference(f);
        CHECK(a.lhv_bound == oracle::naive_lhv(f));
        CHECK(a.lhv_bound == b.lhv_bound);
        CHECK(a.maximizers == b.maximizers);
        CHECK(a.saturating_count == b.saturating_count);
    }
}

TEST_CASE("list cap and size cap") {
    Functional z{Scenario({3, 3, 3})};
    LhvOptions o;
    o.max_listed = 10;
    auto r = lhv_bound(z, o);
    CHECK(r.truncated);
    CHECK(r.saturating_count == 512);
    CHECK(r.maximizers.empty());
    o.max_strategies = 256;
    CHECK_THROWS_AS(lhv_bound(z, o), TooLarge);
    CHECK_THROWS_AS(lhv_bound(Functional{Scenario(std::vector<int>(11, 3))}), TooLarge);
}

TEST_CASE("thread count does not change the result") {
    Functional f = i3322(4);
    LhvOptions one, many;
    one.threads = 1;
    many.threads = 4;
    auto a = lhv_bound(f, one), b = lhv_bound(f, many);
    CHECK(a.lhv_bound == b.lhv_bound);
    CHECK(a.maximizers == b.maximizers);
}

TEST_CASE("correlation coordinates") {
    Scenario s({2, 2});
    auto c = correlation_coordinates(s);
    CHECK(c.size() == 8);
    CHECK(c == oracle::coordinates(s));
    auto v = correlation_vector(s, 0);
    CHECK(std::all_of(v.begin(), v.end(), [](int x) { return x == 1; }));
}

TEST_CASE("ranks against rational elimination") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> e(-2, 2);
    for (int i = 0; i < 60; ++i) {
        int r = 1 + i % 9, c = 1 + (i * 7) % 11;
        std::vector<std::vector<std::int64_t>> a(r, std::vector<std::int64_t>(c));
        std::vector<std::vector<mpz_class>> z(r, std::vector<mpz_class>(c));
        std::vector<std::vector<Rational>> q(r, std::vector<Rational>(c));
        for (int x = 0; x < r; ++x)
            for (int y = 0; y < c; ++y) {
                // low-rank structure now and then
                int v = (i % 3 == 0 && x > 0) ? static_cast<int>(a[0][y]) * (x % 2 ? 1 : -1) : e(rng);
                a[x][y] = v;
                z[x][y] = v;
                q[x][y] = v;
            }
        int want = oracle::rational_rank(q);
        CHECK(rank_exact(z) == want);
        CHECK(rank_mod_p(a) <= want);
    }
}

TEST_CASE("facet test") {
    auto t = is_tight(chsh());
    CHECK(t.dimension == 8);
    CHECK(t.affine_rank == 7);
    CHECK(t.is_facet);
    int r = 0;
    CHECK(oracle::naive_facet(chsh(), &r));
    CHECK(r == 7);

    // a trivially valid but lower-dimensional face
    Functional f = parse_functional("scenario n=2 m=2,2\n+1/2 A1 B1\n+1/2 A2 B2\n");
    auto tf = is_tight(f);
    CHECK(!tf.is_facet);
    CHECK(tf.lhv_bound == 1);
    CHECK(oracle::naive_facet(f, &r) == false);
    CHECK(tf.affine_rank == r);

    // A1 <= 1 is not a facet (A1B1 = B1 on all its vertices), p(++|11) >= 0 is
    CHECK(!is_tight(parse_functional("scenario n=2 m=2,2\n+1 A1\n")).is_facet);
    Functional pos = parse_functional("scenario n=2 m=2,2\n-1 A1\n-1 B1\n-1 A1 B1\n");
    CHECK(is_tight(pos).is_facet);
    CHECK(oracle::naive_facet(pos));
}

TEST_CASE("facet test against the brute-force oracle") {
    std::mt19937_64 rng(23);
    int facets = 0;
    for (int k = 1; k <= 46; k += 3) {
        auto f = sliwa(k);
        CHECK(is_tight(f).is_facet == oracle::naive_facet(f));
        ++facets;
    }
    for (int i = 0; i < 40; ++i) {
        Scenario s(i % 2 ? std::vector<int>{2, 2} : std::vector<int>{2, 2, 2});
        auto f = oracle::random_functional(s, rng, -1, 1, 1, 0.3);
        if (f.is_zero()) continue;
        int r = 0;
        bool want = oracle::naive_facet(f, &r);
        auto t = is_tight(f);
        CHECK(t.is_facet == want);
        CHECK(t.affine_rank == r);
    }
    CHECK(facets > 0);
}

TEST_CASE("counterexample is not a facet") {
    auto t = is_tight(counterexample());
    CHECK(t.lhv_bound == 1);
    CHECK(t.dimension == 80);
    CHECK(!t.is_facet);
    CHECK(t.affine_rank < 79);
}
