#include "bell/iterate.hpp"

namespace bell {

std::vector<SignVector> sign_vectors(int m) {
    std::vector<SignVector> out;
    for (int x = 0; x < (1 << m); ++x) {
        SignVector s(m);
        for (int k = 0; k < m; ++k) s[k] = (x >> (m - 1 - k)) & 1 ? -1 : 1;
        out.push_back(s);
    }
    return out;
}

std::string sign_label(const SignVector& s) {
    std::string out;
    for (int v : s) out += v > 0 ? '+' : '-';
    return out;
}

SignVector parse_sign_label(const std::string& label) {
    SignVector s;
    for (char c : label) {
        if (c == '+') s.push_back(1);
        else if (c == '-') s.push_back(-1);
        else throw std::invalid_argument("bad sign vector '" + label + "'");
    }
    if (s.empty()) throw std::invalid_argument("empty sign vector");
    return s;
}

const Functional& IterationInput::at(const SignVector& s) const {
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (keys[i] == s) return pieces[i];
    throw std::out_of_range("no piece for sign vector " + sign_label(s));
}

IterationInput make_input(const std::vector<Functional>& p) {
    int m = 0;
    while ((std::size_t(1) << m) < p.size()) ++m;
    if ((std::size_t(1) << m) != p.size() || m == 0) throw std::invalid_argument("piece count must be 2^m");
    IterationInput in;
    in.m = m;
    in.keys = sign_vectors(m);
    in.pieces = p;
    for (auto& f : p)
        if (!(f.scenario() == p[0].scenario())) throw std::invalid_argument("pieces over different scenarios");
    return in;
}

Functional restrict_last(const Functional& f, const SignVector& s) {
    const auto& sc = f.scenario();
    const int n = sc.parties();
    if (static_cast<int>(s.size()) != sc.settings[n - 1]) throw std::invalid_argument("sign vector length mismatch");
    if (n < 2) throw std::invalid_argument("cannot restrict a single-party functional");
    std::vector<int> m(sc.settings.begin(), sc.settings.end() - 1);
    Functional g{Scenario(m)};
    for (auto& [k, c] : f.terms()) {
        Monomial r(k.begin(), k.end() - 1);
        int last = k.back();
        g.add(r, last && s[last - 1] < 0 ? Rational(-c) : c);
    }
    return g;
}

IterationInput decompose(const Functional& f) {
    const int m = f.scenario().settings.back();
    IterationInput in;
    in.m = m;
    in.keys = sign_vectors(m);
    for (auto& s : in.keys) in.pieces.push_back(restrict_last(f, s));
    return in;
}

Functional attach_party(const Functional& f, int m, const std::vector<Rational>& poly) {
    if (static_cast<int>(poly.size()) != m + 1) throw std::invalid_argument("attach_party needs m+1 coefficients");
    std::vector<int> st = f.scenario().settings;
    st.push_back(m);
    Functional g{Scenario(st)};
    for (auto& [k, c] : f.terms())
        for (int j = 0; j <= m; ++j) {
            if (poly[j] == 0) continue;
            Monomial r = k;
            r.push_back(static_cast<std::uint8_t>(j));
            g.add(r, c * poly[j]);
        }
    return g;
}

bool check_constraints(const IterationInput& in) {
    const int m = in.m;
    if (in.pieces.size() != (std::size_t(1) << m)) return false;
    for (int K = 0; K < (1 << m); ++K) {
        if (__builtin_popcount(K) < 2) continue;
        Functional sum(in.pieces[0].scenario());
        for (std::size_t i = 0; i < in.keys.size(); ++i) {
            int sign = 1;
            for (int k = 0; k < m; ++k)
                if ((K >> k) & 1) sign *= in.keys[i][k];
            if (sign > 0) sum += in.pieces[i];
            else sum -= in.pieces[i];
        }
        if (!sum.is_zero()) return false;
    }
    return true;
}

Functional iterate(const IterationInput& in) {
    if (!check_constraints(in)) throw ConstraintViolation("pieces violate the linear constraints for |K| >= 2");
    const int m = in.m;
    const Rational w = Rational(1, mpz_class(1) << m);
    Functional out;
    bool first = true;
    for (std::size_t i = 0; i < in.pieces.size(); ++i) {
        std::vector<Rational> poly(m + 1, w);
        for (int k = 0; k < m; ++k) poly[k + 1] = in.keys[i][k] > 0 ? w : Rational(-w);
        Functional t = attach_party(in.pieces[i], m, poly);
        if (first) {
            out = t;
            first = false;
        } else {
            out += t;
        }
    }
    return out;
}

namespace {
const Rational half(1, 2);
}

IterationInput complete_2m(const Functional& bpp, const Functional& bpm, const Functional& bmp) {
    return make_input({bpp, bpm, bmp, bpm + bmp - bpp});
}

Functional iterate_2m(const Functional& bpp, const Functional& bpm, const Functional& bmp) {
    Functional r = attach_party(bpp, 2, {0, half, half});
    r += attach_party(bpm, 2, {half, 0, -half});
    r += attach_party(bmp, 2, {half, -half, 0});
    return r;
}

Functional iterate_sym(const Functional& bpp, const Functional& bpm) {
    Functional r = attach_party(bpp, 2, {0, half, half});
    r += attach_party(bpm, 2, {0, half, -half});
    return r;
}

IterationInput complete_3m(const Functional& ppp, const Functional& ppm, const Functional& pmp, const Functional& mmm) {
    // order: +++ ++- +-+ +-- -++ -+- --+ ---
    Functional pmm = ppm + pmp - ppp;
    Functional mpp = 2 * ppp - ppm - pmp + mmm;
    Functional mpm = ppp - pmp + mmm;
    Functional mmp = ppp - ppm + mmm;
    return make_input({ppp, ppm, pmp, pmm, mpp, mpm, mmp, mmm});
}

Functional iterate_3m(const Functional& ppp, const Functional& ppm, const Functional& pmp, const Functional& mmm) {
    Functional r = attach_party(ppp, 3, {half, -half, half, half});
    r += attach_party(ppm, 3, {0, half, 0, -half});
    r += attach_party(pmp, 3, {0, half, -half, 0});
    r += attach_party(mmm, 3, {half, -half, 0, 0});
    return r;
}

}  // namespace bell
