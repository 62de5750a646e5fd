#pragma once

#include "bell/core.hpp"
#include "bell/iterate.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bell {

Functional chsh();
Functional mabk(int n);
Functional caf(int n);
Functional emabk(int n);
Functional i3322(int n);
Functional wbz();

// setting relabel 1 -> 3, 2 -> t on every party, used by emabk
Functional emabk_partner(const Functional& mabk_over_bigger, int t);
// replaces each setting X_j of the last party by X_j Y_j for a new party Y
Functional split_last(const Functional& f);

struct QTarget {
    std::string expr;
    double value = 0;
    int decimals = -1;  // -1: closed form
};

struct ExtensionEntry {
    int base = 0;     // catalog index; 0 for the five-partite table
    int row = 0;
    int parties = 4;
    std::map<std::string, std::string> recipes;  // "+-", "-+", "--" -> transform expression
    std::optional<std::string> explicit_text;
    std::optional<QTarget> q;
    std::string remark;
    bool antisymmetric = false;  // table states B(-+) = -B(+-)
    bool recipes_disagree = false;  // printed polynomial and printed recipes give different functionals
};

int sliwa_count();
Functional sliwa(int k);
std::optional<QTarget> sliwa_q(int k);
const std::vector<ExtensionEntry>& extension_table();
const ExtensionEntry& extension_entry(int base, int row);

Functional extension_base(const ExtensionEntry& e);
// iterate_2m over the base and its two recipe images
Functional build_from_recipes(const ExtensionEntry& e);
bool has_recipe_build(const ExtensionEntry& e);
Functional extension(const ExtensionEntry& e);  // explicit polynomial when printed, else recipes
Functional sliwa4(int k, int row);
Functional sliwa5(int row);

IterationInput counterexample_pieces();
Functional counterexample();
Functional eq13();

}  // namespace bell
