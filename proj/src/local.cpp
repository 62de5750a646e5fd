#include "bell/local.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bell {

namespace {

struct Kernel {
    std::vector<std::uint64_t> mask;   // strategy bits touched by each term
    std::vector<std::int64_t> coef;    // coefficient times lcm of denominators
    mpz_class scale;
    int bits = 0;
};

Kernel prepare(const Functional& f, const LhvOptions& opt) {
    const auto& s = f.scenario();
    Kernel k;
    k.bits = s.total_settings();
    if (k.bits > 63 || s.vertex_count() > opt.max_strategies)
        throw TooLarge("scenario has " + std::to_string(k.bits) + " settings in total; strategy enumeration over the cap");
    std::vector<int> prefix(s.parties(), 0);
    for (int i = 1; i < s.parties(); ++i) prefix[i] = prefix[i - 1] + s.settings[i - 1];

    mpz_class L = 1;
    for (auto& [m, c] : f.terms()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.get_den().get_mpz_t());
    k.scale = L;
    mpz_class total = 0;
    const mpz_class limit = mpz_class(1) << 62;
    for (auto& [m, c] : f.terms()) {
        std::uint64_t mask = 0;
        for (int i = 0; i < s.parties(); ++i)
            if (m[i]) mask |= std::uint64_t(1) << (k.bits - 1 - (prefix[i] + m[i] - 1));
        mpz_class z = c.get_num() * (L / c.get_den());
        total += abs(z);
        if (total >= limit) throw TooLarge("scaled coefficients exceed 64-bit range");
        k.mask.push_back(mask);
        k.coef.push_back(z.get_si());
    }
    return k;
}

struct Partial {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::uint64_t count = 0;
    std::vector<std::uint64_t> list;

    void offer(std::int64_t v, std::uint64_t x, std::uint64_t cap) {
        if (v > best) {
            best = v;
            count = 0;
            list.clear();
        }
        if (v == best) {
            ++count;
            if (list.size() <= cap) list.push_back(x);
        }
    }
};

VertexReport finish(std::vector<Partial>& parts, const Kernel& k, std::uint64_t cap) {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (auto& p : parts)
        if (p.count) best = std::max(best, p.best);
    VertexReport r;
    for (auto& p : parts) {
        if (!p.count || p.best != best) continue;
        r.saturating_count += p.count;
        r.maximizers.insert(r.maximizers.end(), p.list.begin(), p.list.end());
    }
    if (r.saturating_count > cap) {
        r.truncated = true;
        r.maximizers.clear();
    } else {
        std::sort(r.maximizers.begin(), r.maximizers.end());
    }
    Rational b(mpz_class(static_cast<long>(best)), k.scale);
    b.canonicalize();
    r.lhv_bound = b;
    return r;
}

}  // namespace

VertexReport lhv_bound_reference(const Functional& f, const LhvOptions& opt) {
    Kernel k = prepare(f, opt);
    const std::uint64_t N = std::uint64_t(1) << k.bits;
    std::vector<Partial> parts(1);
    for (std::uint64_t x = 0; x < N; ++x) {
        std::int64_t v = 0;
        for (std::size_t t = 0; t < k.mask.size(); ++t)
            v += (std::popcount(k.mask[t] & x) & 1) ? -k.coef[t] : k.coef[t];
        parts[0].offer(v, x, opt.max_listed);
    }
    return finish(parts, k, opt.max_listed);
}

VertexReport lhv_bound(const Functional& f, const LhvOptions& opt) {
    Kernel k = prepare(f, opt);
    const std::uint64_t N = std::uint64_t(1) << k.bits;
    const std::size_t T = k.mask.size();

    // terms touched by each bit
    std::vector<std::vector<std::size_t>> by_bit(std::max(k.bits, 1));
    for (std::size_t t = 0; t < T; ++t)
        for (int b = 0; b < k.bits; ++b)
            if ((k.mask[t] >> b) & 1) by_bit[b].push_back(t);

    const std::uint64_t chunk = std::max<std::uint64_t>(std::uint64_t(1) << 12, N / 256);
    const std::int64_t nchunks = static_cast<std::int64_t>((N + chunk - 1) / chunk);
    std::vector<Partial> parts(nchunks);

    int threads = opt.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
        const std::uint64_t hi = std::min(N, lo + chunk);
        std::vector<signed char> sign(T);
        std::uint64_t g = lo ^ (lo >> 1);
        std::int64_t v = 0;
        for (std::size_t t = 0; t < T; ++t) {
            sign[t] = (std::popcount(k.mask[t] & g) & 1) ? -1 : 1;
            v += sign[t] * k.coef[t];
        }
        Partial& p = parts[c];
        p.offer(v, g, opt.max_listed);
        for (std::uint64_t i = lo + 1; i < hi; ++i) {
            int b = std::countr_zero(i);
            g ^= std::uint64_t(1) << b;
            for (std::size_t t : by_bit[b]) {
                sign[t] = -sign[t];
                v += 2 * sign[t] * k.coef[t];
            }
            p.offer(v, g, opt.max_listed);
        }
    }
    (void)threads;
    return finish(parts, k, opt.max_listed);
}

std::vector<Monomial> correlation_coordinates(const Scenario& s) {
    std::vector<Monomial> out;
    const int n = s.parties();
    Monomial m(n, 0);
    while (true) {
        int i = n - 1;
        while (i >= 0 && m[i] == s.settings[i]) m[i--] = 0;
        if (i < 0) break;
        ++m[i];
        out.push_back(m);
    }
    return out;
}

std::vector<int> correlation_vector(const Scenario& s, std::uint64_t strategy) {
    Strategy st = strategy_from_bits(s, strategy);
    auto coords = correlation_coordinates(s);
    std::vector<int> v;
    v.reserve(coords.size());
    for (auto& m : coords) {
        int sign = 1;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) sign *= st[i][m[i] - 1];
        v.push_back(sign);
    }
    return v;
}

namespace {

constexpr std::uint64_t P = (std::uint64_t(1) << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(z & P), hi = static_cast<std::uint64_t>(z >> 61);
    std::uint64_t r = lo + hi;
    return r >= P ? r - P : r;
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

}  // namespace

int rank_mod_p(std::vector<std::vector<std::int64_t>> rows) {
    if (rows.empty()) return 0;
    const std::size_t n = rows[0].size();
    std::vector<std::vector<std::uint64_t>> a(rows.size(), std::vector<std::uint64_t>(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t x = rows[i][j] % static_cast<std::int64_t>(P);
            a[i][j] = x < 0 ? static_cast<std::uint64_t>(x + static_cast<std::int64_t>(P)) : static_cast<std::uint64_t>(x);
        }
    int r = 0;
    for (std::size_t c = 0; c < n && r < static_cast<int>(a.size()); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[r]);
        std::uint64_t inv = powmod(a[r][c], P - 2);
        for (std::size_t j = c; j < n; ++j) a[r][j] = mulmod(a[r][j], inv);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            std::uint64_t f = a[i][c];
            if (!f) continue;
            for (std::size_t j = c; j < n; ++j) {
                std::uint64_t t = mulmod(f, a[r][j]);
                a[i][j] = a[i][j] >= t ? a[i][j] - t : a[i][j] + P - t;
            }
        }
        ++r;
    }
    return r;
}

// fraction-free (Bareiss) elimination
int rank_exact(std::vector<std::vector<mpz_class>> a) {
    if (a.empty()) return 0;
    const std::size_t n = a[0].size();
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < a.size(); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[r]);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                mpz_class t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return static_cast<int>(r);
}

TightnessReport is_tight(const Functional& f, const LhvOptions& opt) {
    VertexReport v = lhv_bound(f, opt);
    if (v.truncated) throw TooLarge("too many saturating vertices for the rank test");
    if (v.saturating_count == 0) throw std::runtime_error("no saturating vertex");
    const auto& s = f.scenario();
    TightnessReport r;
    r.dimension = s.correlation_dimension();
    r.lhv_bound = v.lhv_bound;
    r.saturating_count = v.saturating_count;

    std::vector<int> base = correlation_vector(s, v.maximizers[0]);
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 1; i < v.maximizers.size(); ++i) {
        std::vector<int> x = correlation_vector(s, v.maximizers[i]);
        std::vector<std::int64_t> d(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) d[j] = x[j] - base[j];
        rows.push_back(std::move(d));
    }
    const bool nonconstant = !(f.size() == 0 || (f.size() == 1 && f.constant() != 0));
    int rp = rank_mod_p(rows);
    if (nonconstant && rp == r.dimension - 1) {
        r.affine_rank = rp;
    } else {
        std::vector<std::vector<mpz_class>> z(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (auto x : rows[i]) z[i].emplace_back(static_cast<long>(x));
        r.affine_rank = rank_exact(std::move(z));
        r.exact_fallback = true;
    }
    r.is_facet = r.affine_rank == r.dimension - 1;
    return r;
}

}  // namespace bell
