#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bell {

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

struct Scenario {
    std::vector<int> settings;

    Scenario() = default;
    explicit Scenario(std::vector<int> m);

    int parties() const { return static_cast<int>(settings.size()); }
    int total_settings() const;
    // 2^(sum m_i); saturates at UINT64_MAX
    std::uint64_t vertex_count() const;
    std::int64_t correlation_dimension() const;
    bool operator==(const Scenario&) const = default;
};

// slot value 0 is the identity, j >= 1 is setting j
using Monomial = std::vector<std::uint8_t>;

// +1 / -1 per setting, per party
using Strategy = std::vector<std::vector<int>>;

class Functional {
public:
    Functional() = default;
    explicit Functional(Scenario s) : scen_(std::move(s)) {}

    const Scenario& scenario() const { return scen_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    void add(const Monomial& m, const Rational& c);
    Rational coeff(const Monomial& m) const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // same terms over a scenario with at least as many settings per party
    Functional with_settings(const Scenario& bigger) const;

    Functional& operator+=(const Functional& g);
    Functional& operator-=(const Functional& g);
    Functional& operator*=(const Rational& a);
    friend Functional operator+(Functional f, const Functional& g) { return f += g; }
    friend Functional operator-(Functional f, const Functional& g) { return f -= g; }
    friend Functional operator*(const Rational& a, Functional f) { return f *= a; }
    Functional operator-() const;
    bool operator==(const Functional& g) const;

    Rational constant() const;
    Rational algebraic_bound() const;   // sum |coeff|
    bool full_correlation() const;      // no identity slot anywhere

private:
    void check(const Monomial& m) const;
    Scenario scen_;
    std::map<Monomial, Rational> terms_;
};

// lexicographic order on the canonical term lists
bool lex_less(const Functional& f, const Functional& g);

Functional constant_functional(const Scenario& s, const Rational& c);
Functional product(const Functional& f, const Functional& g);  // party-wise concatenation (tensor)

Rational evaluate(const Functional& f, const Strategy& s);
Strategy strategy_from_bits(const Scenario& s, std::uint64_t bits);
std::uint64_t strategy_bits(const Scenario& s, const Strategy& st);

// text format

struct ParseError : std::runtime_error {
    int line;
    ParseError(int l, const std::string& msg);
};

std::string render(const Functional& f);
Functional parse_functional(const std::string& text);
// reads one functional starting at the current position; stops at a line "end"
// or at end of input. line is advanced for error reporting.
Functional read_functional(std::istream& in, int& line);
std::string party_name(int p);
std::string monomial_name(const Monomial& m);

// symmetry group

struct Transform {
    std::vector<int> party_perm;                 // party i goes to party_perm[i]
    std::vector<std::vector<int>> setting_perms; // 0-based, setting j of party i goes to setting_perms[i][j]
    std::vector<std::vector<int>> sign_flips;    // indexed by source party/setting
    int global_sign = 1;

    static Transform identity(const Scenario& s);
    bool conforms(const Scenario& s) const;
    bool operator==(const Transform&) const = default;
};

// (then(first))(f) == apply(apply(f, first), then)
Transform compose(const Transform& then, const Transform& first);
Transform inverse(const Transform& t);
Functional apply_transform(const Functional& f, const Transform& t);

// atoms separated by commas, applied left to right:
//   swap A B | perm A 1 2 [3 ...] (cycle) | flip C1 | flip C | neg
Transform parse_transform(const std::string& expr, const Scenario& s);

struct OrbitTooLarge : std::runtime_error {
    double group_size;
    explicit OrbitTooLarge(double size);
};

double group_size(const Scenario& s);
Functional canonical_form(const Functional& f, double cap = 1e7);

}  // namespace bell
