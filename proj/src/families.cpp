#include "bell/families.hpp"

#include <nlohmann/json.hpp>

#include <mutex>
#include <sstream>

namespace bell {

extern const char* const kSliwaCatalogText;
extern const char* const kSliwaTablesJson;

Functional chsh() {
    return parse_functional(
        "scenario n=2 m=2,2\n"
        "+1/2 A1 B1\n+1/2 A1 B2\n+1/2 A2 B1\n-1/2 A2 B2\n");
}

Functional mabk(int n) {
    if (n < 2) throw std::invalid_argument("mabk needs n >= 2");
    Functional f = chsh();
    for (int k = 3; k <= n; ++k) {
        Transform t = Transform::identity(f.scenario());
        for (auto& p : t.setting_perms) std::swap(p[0], p[1]);
        f = iterate_sym(f, apply_transform(f, t));
    }
    return f;
}

Functional caf(int n) {
    if (n < 3) throw std::invalid_argument("caf needs n >= 3");
    Functional b = mabk(n - 1);
    return iterate_sym(b, constant_functional(b.scenario(), 1));
}

Functional emabk_partner(const Functional& f, int t) {
    Functional g(f.scenario());
    for (auto& [m, c] : f.terms()) {
        Monomial k = m;
        for (auto& v : k) {
            if (v == 1) v = 3;
            else if (v == 2) v = static_cast<std::uint8_t>(t);
            else if (v != 0) throw std::invalid_argument("emabk partner expects settings 1 and 2 only");
        }
        g.add(k, c);
    }
    return g;
}

Functional emabk(int n) {
    if (n < 3) throw std::invalid_argument("emabk needs n >= 3");
    const int k = n - 1;  // parties of the seed
    const int t = k % 2 ? 1 : 4;
    const int m = k % 2 ? 3 : 4;
    Functional b = mabk(k).with_settings(Scenario(std::vector<int>(k, m)));
    return iterate_sym(b, emabk_partner(b, t));
}

Functional split_last(const Functional& f) {
    std::vector<int> m = f.scenario().settings;
    m.push_back(m.back());
    Functional g{Scenario(m)};
    for (auto& [k, c] : f.terms()) {
        Monomial r = k;
        r.push_back(k.back());
        g.add(r, c);
    }
    return g;
}

Functional i3322(int n) {
    if (n < 2) throw std::invalid_argument("i3322 needs n >= 2");
    Functional b2 = parse_functional(
        "scenario n=2 m=3,3\n"
        "+1/4 A1\n-1/4 A2\n+1/4 B1\n-1/4 B2\n"
        "-1/4 A1 B1\n+1/4 A1 B2\n+1/4 A2 B1\n-1/4 A2 B2\n"
        "+1/4 A1 B3\n+1/4 A2 B3\n+1/4 A3 B1\n+1/4 A3 B2\n");
    if (n == 2) return b2;
    const Scenario& s = b2.scenario();
    Functional ppm = apply_transform(b2, parse_transform("flip B3", s));
    Functional pmp = apply_transform(b2, parse_transform("flip A3", s));
    Functional mmm = apply_transform(b2, parse_transform("flip A", s));
    Functional f = iterate_3m(b2, ppm, pmp, mmm);
    for (int k = 4; k <= n; ++k) f = split_last(f);
    return f;
}

Functional wbz() {
    Functional c = chsh().with_settings(Scenario({3, 3}));
    const Scenario& s = c.scenario();
    // B1 -> B3 is a relabel of one setting; realised as the 1<->3 swap since B3 is absent
    Functional ppm = apply_transform(c, parse_transform("perm B 1 3, swap A B", s));
    Functional pmp = apply_transform(c, parse_transform("perm A 2 3, perm B 1 3", s));
    return iterate_3m(c, ppm, pmp, -c);
}

// ---------------------------------------------------------------- catalog

namespace {

struct Catalog {
    std::vector<Functional> sliwa;
    std::vector<std::optional<QTarget>> q;
    std::vector<ExtensionEntry> ext;
};

std::optional<QTarget> read_q(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    QTarget q;
    q.expr = j.at("expr").get<std::string>();
    q.value = j.at("value").get<double>();
    q.decimals = j.at("decimals").is_null() ? -1 : j.at("decimals").get<int>();
    return q;
}

const Catalog& catalog() {
    static Catalog c;
    static std::once_flag once;
    std::call_once(once, [] {
        std::istringstream in(kSliwaCatalogText);
        std::string line, block;
        int current = 0;
        auto flush = [&] {
            if (current) {
                if (current != static_cast<int>(c.sliwa.size()) + 1) throw std::runtime_error("catalog out of order");
                c.sliwa.push_back(parse_functional(block));
            }
            block.clear();
        };
        while (std::getline(in, line)) {
            if (line.rfind("# sliwa ", 0) == 0) {
                flush();
                current = std::stoi(line.substr(8));
            } else {
                block += line + "\n";
            }
        }
        flush();
        auto j = nlohmann::json::parse(kSliwaTablesJson);
        c.q.resize(c.sliwa.size());
        for (auto& h : j.at("sliwa")) c.q.at(h.at("k").get<int>() - 1) = read_q(h.at("q"));
        for (auto& e : j.at("extensions")) {
            ExtensionEntry x;
            x.base = e.at("base").get<int>();
            x.row = e.at("row").get<int>();
            x.parties = e.at("parties").get<int>();
            for (auto& [lab, r] : e.at("recipes").items()) x.recipes[lab] = r.get<std::string>();
            if (e.contains("explicit")) x.explicit_text = e.at("explicit").get<std::string>();
            x.q = read_q(e.at("q"));
            if (e.contains("remark")) x.remark = e.at("remark").get<std::string>();
            x.antisymmetric = e.value("antisymmetric_pieces", false);
            x.recipes_disagree = e.value("recipes_disagree", false);
            c.ext.push_back(std::move(x));
        }
    });
    return c;
}

}  // namespace

int sliwa_count() { return static_cast<int>(catalog().sliwa.size()); }

Functional sliwa(int k) {
    const auto& c = catalog();
    if (k < 1 || k > static_cast<int>(c.sliwa.size())) throw std::out_of_range("sliwa index must be in 1.." + std::to_string(c.sliwa.size()));
    return c.sliwa[k - 1];
}

std::optional<QTarget> sliwa_q(int k) {
    sliwa(k);
    return catalog().q[k - 1];
}

const std::vector<ExtensionEntry>& extension_table() { return catalog().ext; }

const ExtensionEntry& extension_entry(int base, int row) {
    for (auto& e : catalog().ext)
        if (e.base == base && e.row == row) return e;
    throw std::out_of_range("no table row " + std::to_string(row) + " for " +
                            (base ? "sliwa " + std::to_string(base) : std::string("the five-partite table")));
}

Functional extension_base(const ExtensionEntry& e) {
    return e.base == 0 ? sliwa4(3, 3) : sliwa(e.base);
}

bool has_recipe_build(const ExtensionEntry& e) {
    return e.recipes.count("+-") && e.recipes.count("-+");
}

Functional build_from_recipes(const ExtensionEntry& e) {
    if (!has_recipe_build(e)) throw std::runtime_error("table row lacks usable recipes");
    Functional b = extension_base(e);
    Functional pm = apply_transform(b, parse_transform(e.recipes.at("+-"), b.scenario()));
    Functional mp = apply_transform(b, parse_transform(e.recipes.at("-+"), b.scenario()));
    return iterate_2m(b, pm, mp);
}

Functional extension(const ExtensionEntry& e) {
    if (e.explicit_text) return parse_functional(*e.explicit_text);
    return build_from_recipes(e);
}

Functional sliwa4(int k, int row) {
    if (k < 1) throw std::out_of_range("sliwa4 index must be >= 1");
    return extension(extension_entry(k, row));
}

Functional sliwa5(int row) { return extension(extension_entry(0, row)); }

IterationInput counterexample_pieces() {
    Functional s1 = sliwa(1);
    Functional s1m = apply_transform(s1, parse_transform("flip C1", s1.scenario()));
    return make_input({s1, s1, s1m, s1m});
}

Functional counterexample() { return iterate(counterexample_pieces()); }

Functional eq13() { return sliwa4(1, 1); }

}  // namespace bell
