#pragma once

#include "bell/core.hpp"

#include <stdexcept>
#include <vector>

namespace bell {

using SignVector = std::vector<int>;

// all 2^m sign vectors, + before -, first entry slowest: ++, +-, -+, --
std::vector<SignVector> sign_vectors(int m);
std::string sign_label(const SignVector& s);
SignVector parse_sign_label(const std::string& label);

struct IterationInput {
    int m = 0;
    std::vector<SignVector> keys;      // in sign_vectors(m) order
    std::vector<Functional> pieces;

    const Functional& at(const SignVector& s) const;
};

IterationInput make_input(const std::vector<Functional>& pieces_in_order);

Functional restrict_last(const Functional& f, const SignVector& s);
IterationInput decompose(const Functional& f);

// f times (sum_j poly[j] X_j) for a new last party with m settings; poly[0] is the identity
Functional attach_party(const Functional& f, int m, const std::vector<Rational>& poly);

bool check_constraints(const IterationInput& in);

struct ConstraintViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Functional iterate(const IterationInput& in);
Functional iterate_2m(const Functional& bpp, const Functional& bpm, const Functional& bmp);
Functional iterate_sym(const Functional& bpp, const Functional& bpm);
Functional iterate_3m(const Functional& bppp, const Functional& bppm, const Functional& bpmp, const Functional& bmmm);

// the full piece sets implied by the specialised formulas
IterationInput complete_2m(const Functional& bpp, const Functional& bpm, const Functional& bmp);
IterationInput complete_3m(const Functional& bppp, const Functional& bppm, const Functional& bpmp, const Functional& bmmm);

}  // namespace bell
