#include "bell/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace bell {

Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Scenario::Scenario(std::vector<int> m) : settings(std::move(m)) {
    if (settings.empty()) throw std::invalid_argument("scenario needs at least one party");
    for (int mi : settings)
        if (mi < 1 || mi > 255) throw std::invalid_argument("setting count out of range");
}

int Scenario::total_settings() const {
    return std::accumulate(settings.begin(), settings.end(), 0);
}

std::uint64_t Scenario::vertex_count() const {
    int t = total_settings();
    if (t >= 64) return std::numeric_limits<std::uint64_t>::max();
    return std::uint64_t(1) << t;
}

std::int64_t Scenario::correlation_dimension() const {
    std::int64_t d = 1;
    for (int mi : settings) d *= (mi + 1);
    return d - 1;
}

void Functional::check(const Monomial& m) const {
    if (m.size() != static_cast<std::size_t>(scen_.parties()))
        throw std::invalid_argument("monomial length does not match scenario");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > scen_.settings[i])
            throw std::invalid_argument("setting index exceeds scenario");
}

void Functional::add(const Monomial& m, const Rational& c0) {
    check(m);
    Rational c = c0;
    c.canonicalize();  // callers may hand in e.g. 4/2
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational Functional::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Functional Functional::with_settings(const Scenario& bigger) const {
    if (bigger.parties() != scen_.parties())
        throw std::invalid_argument("party count differs");
    for (int i = 0; i < scen_.parties(); ++i)
        if (bigger.settings[i] < scen_.settings[i])
            throw std::invalid_argument("target scenario has fewer settings");
    Functional g(bigger);
    g.terms_ = terms_;
    return g;
}

Functional& Functional::operator+=(const Functional& g) {
    if (!(g.scen_ == scen_)) throw std::invalid_argument("scenario mismatch");
    for (auto& [m, c] : g.terms_) add(m, c);
    return *this;
}

Functional& Functional::operator-=(const Functional& g) {
    if (!(g.scen_ == scen_)) throw std::invalid_argument("scenario mismatch");
    for (auto& [m, c] : g.terms_) add(m, -c);
    return *this;
}

Functional& Functional::operator*=(const Rational& a) {
    if (a == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= a;
    return *this;
}

Functional Functional::operator-() const {
    Functional g = *this;
    for (auto& [m, c] : g.terms_) c = -c;
    return g;
}

bool Functional::operator==(const Functional& g) const {
    return scen_ == g.scen_ && terms_ == g.terms_;
}

Rational Functional::constant() const {
    return coeff(Monomial(scen_.parties(), 0));
}

Rational Functional::algebraic_bound() const {
    Rational s = 0;
    for (auto& [m, c] : terms_) s += abs(c);
    return s;
}

bool Functional::full_correlation() const {
    for (auto& [m, c] : terms_)
        for (auto v : m)
            if (v == 0) return false;
    return true;
}

bool lex_less(const Functional& f, const Functional& g) {
    auto a = f.terms().begin(), ae = f.terms().end();
    auto b = g.terms().begin(), be = g.terms().end();
    for (; a != ae && b != be; ++a, ++b) {
        if (a->first != b->first) return a->first < b->first;
        if (a->second != b->second) return a->second < b->second;
    }
    return a == ae && b != be;
}

Functional constant_functional(const Scenario& s, const Rational& c) {
    Functional f(s);
    f.add(Monomial(s.parties(), 0), c);
    return f;
}

Functional product(const Functional& f, const Functional& g) {
    std::vector<int> m = f.scenario().settings;
    m.insert(m.end(), g.scenario().settings.begin(), g.scenario().settings.end());
    Functional r{Scenario(m)};
    for (auto& [a, ca] : f.terms())
        for (auto& [b, cb] : g.terms()) {
            Monomial k = a;
            k.insert(k.end(), b.begin(), b.end());
            r.add(k, ca * cb);
        }
    return r;
}

Rational evaluate(const Functional& f, const Strategy& s) {
    const auto& sc = f.scenario();
    if (static_cast<int>(s.size()) != sc.parties()) throw std::invalid_argument("strategy party count mismatch");
    for (int i = 0; i < sc.parties(); ++i)
        if (static_cast<int>(s[i].size()) != sc.settings[i])
            throw std::invalid_argument("strategy setting count mismatch");
    Rational tot = 0;
    for (auto& [m, c] : f.terms()) {
        int sign = 1;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) sign *= s[i][m[i] - 1];
        if (sign > 0) tot += c;
        else tot -= c;
    }
    return tot;
}

// party 0, setting 1 is the most significant bit; a set bit means -1
Strategy strategy_from_bits(const Scenario& s, std::uint64_t bits) {
    Strategy st(s.parties());
    int pos = s.total_settings();
    for (int i = 0; i < s.parties(); ++i) {
        st[i].resize(s.settings[i]);
        for (int j = 0; j < s.settings[i]; ++j) {
            --pos;
            st[i][j] = (bits >> pos) & 1 ? -1 : 1;
        }
    }
    return st;
}

std::uint64_t strategy_bits(const Scenario& s, const Strategy& st) {
    std::uint64_t bits = 0;
    for (int i = 0; i < s.parties(); ++i)
        for (int j = 0; j < s.settings[i]; ++j) bits = (bits << 1) | (st[i][j] < 0 ? 1u : 0u);
    return bits;
}

// ---------------------------------------------------------------- text

ParseError::ParseError(int l, const std::string& msg)
    : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}

std::string party_name(int p) {
    if (p < 0 || p >= 26) throw std::invalid_argument("too many parties for letter names");
    return std::string(1, char('A' + p));
}

std::string monomial_name(const Monomial& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!out.empty()) out += ' ';
        out += party_name(static_cast<int>(i)) + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

std::string render(const Functional& f) {
    std::ostringstream os;
    os << "scenario n=" << f.scenario().parties() << " m=";
    for (int i = 0; i < f.scenario().parties(); ++i) os << (i ? "," : "") << f.scenario().settings[i];
    os << '\n';
    for (auto& [m, c] : f.terms()) {
        Rational a = abs(c);
        os << (c > 0 ? '+' : '-') << a.get_num().get_str() << '/' << a.get_den().get_str() << ' '
           << monomial_name(m) << '\n';
    }
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Scenario parse_header(const std::string& l, int line) {
    std::istringstream is(l);
    std::string word;
    is >> word;
    if (word != "scenario") throw ParseError(line, "expected 'scenario n=<n> m=<m1>,...'");
    int n = -1;
    std::vector<int> m;
    std::string tok;
    while (is >> tok) {
        if (tok.rfind("n=", 0) == 0) {
            try {
                n = std::stoi(tok.substr(2));
            } catch (...) {
                throw ParseError(line, "bad party count '" + tok + "'");
            }
        } else if (tok.rfind("m=", 0) == 0) {
            std::stringstream ms(tok.substr(2));
            std::string part;
            while (std::getline(ms, part, ',')) {
                try {
                    std::size_t used = 0;
                    int v = std::stoi(part, &used);
                    if (used != part.size()) throw 0;
                    m.push_back(v);
                } catch (...) {
                    throw ParseError(line, "bad setting count '" + part + "'");
                }
            }
        } else {
            throw ParseError(line, "unexpected token '" + tok + "' in header");
        }
    }
    if (n < 1) throw ParseError(line, "missing or invalid n=");
    if (static_cast<int>(m.size()) != n) throw ParseError(line, "m= lists " + std::to_string(m.size()) + " parties, n=" + std::to_string(n));
    for (int v : m)
        if (v < 1 || v > 255) throw ParseError(line, "setting count out of range");
    return Scenario(m);
}

Rational parse_coeff(const std::string& tok, int line) {
    std::string t = tok;
    int sign = 1;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        sign = t[0] == '-' ? -1 : 1;
        t = t.substr(1);
    }
    if (t.empty()) return Rational(sign);
    auto slash = t.find('/');
    auto digits = [&](const std::string& d) {
        if (d.empty() || !std::all_of(d.begin(), d.end(), [](unsigned char ch) { return std::isdigit(ch); }))
            throw ParseError(line, "bad coefficient '" + tok + "'");
    };
    std::string num = t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    digits(num);
    digits(den);
    mpz_class zn(num), zd(den);
    if (zd == 0) throw ParseError(line, "zero denominator");
    Rational r(zn, zd);
    r.canonicalize();
    return sign > 0 ? r : Rational(-r);
}

void parse_term(Functional& f, const std::string& l, int line) {
    std::istringstream is(l);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    // glue a lone sign to the next token
    if (toks.size() >= 2 && (toks[0] == "+" || toks[0] == "-")) {
        toks[1] = toks[0] + toks[1];
        toks.erase(toks.begin());
    }
    std::string first = toks[0];
    std::size_t k = 0;
    while (k < first.size() && (first[k] == '+' || first[k] == '-')) ++k;
    Rational c;
    std::string slots;
    if (k < first.size() && std::isalpha(static_cast<unsigned char>(first[k]))) {
        c = parse_coeff(first.substr(0, k), line);
        slots = first.substr(k);
    } else {
        c = parse_coeff(first, line);
    }
    for (std::size_t i = 1; i < toks.size(); ++i) slots += toks[i];
    const int n = f.scenario().parties();
    Monomial mono(n, 0);
    if (slots.empty() || slots == "1") {
        f.add(mono, c);
        return;
    }
    std::size_t p = 0;
    int last_party = -1;
    while (p < slots.size()) {
        char L = slots[p];
        if (!std::isupper(static_cast<unsigned char>(L))) throw ParseError(line, "bad slot near '" + slots.substr(p) + "'");
        int party = L - 'A';
        ++p;
        std::size_t q = p;
        while (q < slots.size() && std::isdigit(static_cast<unsigned char>(slots[q]))) ++q;
        if (q == p) throw ParseError(line, std::string("missing setting index after ") + L);
        int j = std::stoi(slots.substr(p, q - p));
        p = q;
        if (party >= n) throw ParseError(line, std::string("party ") + L + " not in scenario");
        if (j < 1 || j > f.scenario().settings[party])
            throw ParseError(line, std::string("setting ") + L + std::to_string(j) + " out of range");
        if (mono[party]) throw ParseError(line, std::string("party ") + L + " appears twice in one term");
        if (party < last_party) throw ParseError(line, "parties must appear in order A, B, C, ...");
        last_party = party;
        mono[party] = static_cast<std::uint8_t>(j);
    }
    f.add(mono, c);
}

}  // namespace

Functional read_functional(std::istream& in, int& line) {
    std::string raw;
    bool have_header = false;
    Functional f;
    while (std::getline(in, raw)) {
        ++line;
        std::string l = trim(raw);
        if (l.empty() || l[0] == '#') continue;
        if (!have_header) {
            f = Functional(parse_header(l, line));
            have_header = true;
            continue;
        }
        if (l == "end") return f;
        parse_term(f, l, line);
    }
    if (!have_header) throw ParseError(line, "no scenario header found");
    return f;
}

Functional parse_functional(const std::string& text) {
    std::istringstream is(text);
    int line = 0;
    return read_functional(is, line);
}

// ---------------------------------------------------------------- group

Transform Transform::identity(const Scenario& s) {
    Transform t;
    const int n = s.parties();
    t.party_perm.resize(n);
    std::iota(t.party_perm.begin(), t.party_perm.end(), 0);
    t.setting_perms.resize(n);
    t.sign_flips.resize(n);
    for (int i = 0; i < n; ++i) {
        t.setting_perms[i].resize(s.settings[i]);
        std::iota(t.setting_perms[i].begin(), t.setting_perms[i].end(), 0);
        t.sign_flips[i].assign(s.settings[i], 1);
    }
    return t;
}

bool Transform::conforms(const Scenario& s) const {
    const int n = s.parties();
    if (static_cast<int>(party_perm.size()) != n || static_cast<int>(setting_perms.size()) != n ||
        static_cast<int>(sign_flips.size()) != n)
        return false;
    std::vector<int> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        int p = party_perm[i];
        if (p < 0 || p >= n || seen[p]++) return false;
        if (s.settings[p] != s.settings[i]) return false;
        const int m = s.settings[i];
        if (static_cast<int>(setting_perms[i].size()) != m || static_cast<int>(sign_flips[i].size()) != m) return false;
        std::vector<int> hit(m, 0);
        for (int j = 0; j < m; ++j) {
            int q = setting_perms[i][j];
            if (q < 0 || q >= m || hit[q]++) return false;
            if (sign_flips[i][j] != 1 && sign_flips[i][j] != -1) return false;
        }
    }
    return global_sign == 1 || global_sign == -1;
}

Transform compose(const Transform& t2, const Transform& t1) {
    Transform r = t1;
    const int n = static_cast<int>(t1.party_perm.size());
    for (int i = 0; i < n; ++i) {
        int p = t1.party_perm[i];
        r.party_perm[i] = t2.party_perm[p];
        for (std::size_t j = 0; j < t1.setting_perms[i].size(); ++j) {
            int q = t1.setting_perms[i][j];
            r.setting_perms[i][j] = t2.setting_perms[p][q];
            r.sign_flips[i][j] = t1.sign_flips[i][j] * t2.sign_flips[p][q];
        }
    }
    r.global_sign = t1.global_sign * t2.global_sign;
    return r;
}

Transform inverse(const Transform& t) {
    Transform r = t;
    const int n = static_cast<int>(t.party_perm.size());
    for (int i = 0; i < n; ++i) {
        int p = t.party_perm[i];
        r.party_perm[p] = i;
        r.setting_perms[p].assign(t.setting_perms[i].size(), 0);
        r.sign_flips[p].assign(t.setting_perms[i].size(), 1);
    }
    for (int i = 0; i < n; ++i) {
        int p = t.party_perm[i];
        for (std::size_t j = 0; j < t.setting_perms[i].size(); ++j) {
            int q = t.setting_perms[i][j];
            r.setting_perms[p][q] = static_cast<int>(j);
            r.sign_flips[p][q] = t.sign_flips[i][j];
        }
    }
    return r;
}

Functional apply_transform(const Functional& f, const Transform& t) {
    const auto& s = f.scenario();
    if (!t.conforms(s)) throw std::invalid_argument("transform does not conform to scenario");
    Functional g(s);
    const int n = s.parties();
    Monomial k(n);
    for (auto& [m, c] : f.terms()) {
        int sign = t.global_sign;
        for (int i = 0; i < n; ++i) {
            int p = t.party_perm[i];
            if (m[i]) {
                k[p] = static_cast<std::uint8_t>(t.setting_perms[i][m[i] - 1] + 1);
                sign *= t.sign_flips[i][m[i] - 1];
            } else {
                k[p] = 0;
            }
        }
        g.add(k, sign > 0 ? c : Rational(-c));
    }
    return g;
}

namespace {

int party_index(const std::string& tok, const Scenario& s, const std::string& atom) {
    if (tok.size() != 1 || !std::isupper(static_cast<unsigned char>(tok[0])) || tok[0] - 'A' >= s.parties())
        throw std::invalid_argument("unknown party '" + tok + "' in '" + atom + "'");
    return tok[0] - 'A';
}

Transform parse_atom(const std::string& atom, const Scenario& s) {
    std::istringstream is(atom);
    std::vector<std::string> w;
    std::string x;
    while (is >> x) w.push_back(x);
    if (w.empty()) throw std::invalid_argument("empty transform atom");
    Transform t = Transform::identity(s);
    if (w[0] == "neg" && w.size() == 1) {
        t.global_sign = -1;
    } else if (w[0] == "swap" && w.size() == 3) {
        int a = party_index(w[1], s, atom), b = party_index(w[2], s, atom);
        if (s.settings[a] != s.settings[b]) throw std::invalid_argument("swap between parties with different setting counts");
        std::swap(t.party_perm[a], t.party_perm[b]);
    } else if (w[0] == "perm" && w.size() >= 4) {
        int p = party_index(w[1], s, atom);
        std::vector<int> cyc;
        for (std::size_t i = 2; i < w.size(); ++i) {
            int j;
            try {
                j = std::stoi(w[i]);
            } catch (...) {
                throw std::invalid_argument("bad setting '" + w[i] + "' in '" + atom + "'");
            }
            if (j < 1 || j > s.settings[p]) throw std::invalid_argument("setting out of range in '" + atom + "'");
            if (std::find(cyc.begin(), cyc.end(), j - 1) != cyc.end()) throw std::invalid_argument("repeated setting in '" + atom + "'");
            cyc.push_back(j - 1);
        }
        for (std::size_t i = 0; i < cyc.size(); ++i) t.setting_perms[p][cyc[i]] = cyc[(i + 1) % cyc.size()];
    } else if (w[0] == "flip" && w.size() == 2) {
        const std::string& a = w[1];
        int p = party_index(a.substr(0, 1), s, atom);
        if (a.size() == 1) {
            t.sign_flips[p].assign(s.settings[p], -1);
        } else {
            int j;
            try {
                std::size_t used = 0;
                j = std::stoi(a.substr(1), &used);
                if (used != a.size() - 1) throw 0;
            } catch (...) {
                throw std::invalid_argument("bad flip target '" + a + "'");
            }
            if (j < 1 || j > s.settings[p]) throw std::invalid_argument("setting out of range in '" + atom + "'");
            t.sign_flips[p][j - 1] = -1;
        }
    } else {
        throw std::invalid_argument("cannot parse transform atom '" + atom + "'");
    }
    return t;
}

}  // namespace

Transform parse_transform(const std::string& expr, const Scenario& s) {
    Transform t = Transform::identity(s);
    std::stringstream ss(expr);
    std::string atom;
    bool any = false;
    while (std::getline(ss, atom, ',')) {
        if (trim(atom).empty()) continue;
        t = compose(parse_atom(atom, s), t);
        any = true;
    }
    if (!any) throw std::invalid_argument("empty transform expression");
    return t;
}

OrbitTooLarge::OrbitTooLarge(double size)
    : std::runtime_error("transform group too large for canonical form (" + std::to_string(size) + " elements)"),
      group_size(size) {}

double group_size(const Scenario& s) {
    // party permutations among equal setting counts
    std::map<int, int> mult;
    for (int m : s.settings) ++mult[m];
    double g = 2.0;
    for (auto [m, k] : mult) g *= std::tgamma(k + 1.0);
    for (int m : s.settings) g *= std::tgamma(m + 1.0) * std::ldexp(1.0, m);
    return g;
}

Functional canonical_form(const Functional& f, double cap) {
    const auto& s = f.scenario();
    double size = group_size(s);
    if (size > cap) throw OrbitTooLarge(size);
    const int n = s.parties();

    std::vector<std::vector<int>> party_perms;
    {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        do {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) ok = s.settings[p[i]] == s.settings[i];
            if (ok) party_perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    // per-party lists of (setting permutation, sign flips)
    std::vector<std::vector<std::pair<std::vector<int>, std::vector<int>>>> local(n);
    for (int i = 0; i < n; ++i) {
        const int m = s.settings[i];
        std::vector<int> sp(m);
        std::iota(sp.begin(), sp.end(), 0);
        do {
            for (int mask = 0; mask < (1 << m); ++mask) {
                std::vector<int> sf(m);
                for (int j = 0; j < m; ++j) sf[j] = (mask >> j) & 1 ? -1 : 1;
                local[i].emplace_back(sp, sf);
            }
        } while (std::next_permutation(sp.begin(), sp.end()));
    }

    Functional best = f;
    Transform t = Transform::identity(s);
    std::vector<std::size_t> idx(n, 0);
    for (auto& pp : party_perms) {
        t.party_perm = pp;
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (int i = 0; i < n; ++i) {
                t.setting_perms[i] = local[i][idx[i]].first;
                t.sign_flips[i] = local[i][idx[i]].second;
            }
            for (int g : {1, -1}) {
                t.global_sign = g;
                Functional h = apply_transform(f, t);
                if (lex_less(h, best)) best = std::move(h);
            }
            int i = 0;
            while (i < n && ++idx[i] == local[i].size()) idx[i++] = 0;
            if (i == n) break;
        }
    }
    return best;
}

}  // namespace bell
