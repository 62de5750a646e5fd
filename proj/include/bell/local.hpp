#pragma once

#include "bell/core.hpp"

#include <cstdint>
#include <vector>

namespace bell {

struct LhvOptions {
    std::uint64_t max_strategies = std::uint64_t(1) << 30;
    std::uint64_t max_listed = 1000000;  // above this only the count is kept
    int threads = 0;                     // 0: OpenMP default
};

struct VertexReport {
    Rational lhv_bound;
    std::vector<std::uint64_t> maximizers;  // strategy bit patterns, ascending
    std::uint64_t saturating_count = 0;
    bool truncated = false;                 // list dropped, count only

    Strategy maximizer(const Scenario& s, std::size_t i) const { return strategy_from_bits(s, maximizers[i]); }
};

struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// parallel Gray-code enumeration
VertexReport lhv_bound(const Functional& f, const LhvOptions& opt = {});
// plain serial loop, one full evaluation per strategy
VertexReport lhv_bound_reference(const Functional& f, const LhvOptions& opt = {});

struct TightnessReport {
    std::int64_t dimension = 0;
    std::int64_t affine_rank = 0;
    bool is_facet = false;
    Rational lhv_bound;
    std::uint64_t saturating_count = 0;
    bool exact_fallback = false;  // true when the mod-p shortcut was inconclusive
};

TightnessReport is_tight(const Functional& f, const LhvOptions& opt = {});

// correlation vector over all non-constant monomials of the scenario, in canonical order
std::vector<int> correlation_vector(const Scenario& s, std::uint64_t strategy);
std::vector<Monomial> correlation_coordinates(const Scenario& s);

// ranks of integer matrices
int rank_mod_p(std::vector<std::vector<std::int64_t>> rows);
int rank_exact(std::vector<std::vector<mpz_class>> rows);

}  // namespace bell
