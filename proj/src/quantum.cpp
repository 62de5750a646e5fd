#include "bell/quantum.hpp"

#include "bell/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bell {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

struct Term {
    double c;
    std::vector<int> slot;  // 0 identity, j setting
};

std::vector<Term> terms_of(const Functional& f) {
    std::vector<Term> out;
    for (auto& [m, c] : f.terms()) out.push_back({c.get_d(), std::vector<int>(m.begin(), m.end())});
    return out;
}

long ipow(int d, int n) {
    long r = 1;
    while (n--) r *= d;
    return r;
}

// v <- (I x .. x O x .. x I) v with O acting on party p
void apply_party(const Mat& O, Vec& v, int p, int n, int d, Vec& buf) {
    const long right = ipow(d, n - 1 - p);
    const long left = ipow(d, p);
    buf.resize(v.size());
    for (long l = 0; l < left; ++l)
        for (long r = 0; r < right; ++r)
            for (int a = 0; a < d; ++a) {
                cplx s = 0;
                for (int b = 0; b < d; ++b) s += O(a, b) * v[(l * d + b) * right + r];
                buf[(l * d + a) * right + r] = s;
            }
    v.swap(buf);
}

// sum over terms of c * (tensor of observables, skipping party skip) |psi>, restricted to terms whose slot at skip equals j
Vec contract(const std::vector<Term>& T, const std::vector<std::vector<Mat>>& obs, const Vec& psi, int n, int d, int skip, int j) {
    Vec acc = Vec::Zero(psi.size());
    Vec w, buf;
    for (auto& t : T) {
        if (skip >= 0 && t.slot[skip] != j) continue;
        w = psi;
        for (int p = 0; p < n; ++p) {
            if (p == skip || t.slot[p] == 0) continue;
            apply_party(obs[p][t.slot[p] - 1], w, p, n, d, buf);
        }
        acc += t.c * w;
    }
    return acc;
}

// M[a', a] = sum_{l,r} phi[l,a',r] conj(psi[l,a,r])
Mat reduced(const Vec& phi, const Vec& psi, int p, int n, int d) {
    const long right = ipow(d, n - 1 - p);
    const long left = ipow(d, p);
    Mat M = Mat::Zero(d, d);
    for (long l = 0; l < left; ++l)
        for (long r = 0; r < right; ++r)
            for (int a = 0; a < d; ++a) {
                cplx ps = std::conj(psi[(l * d + a) * right + r]);
                for (int b = 0; b < d; ++b) M(b, a) += phi[(l * d + b) * right + r] * ps;
            }
    return M;
}

Mat hermitian_part(const Mat& M) { return 0.5 * (M + M.adjoint()); }

Mat sign_of(const Mat& H) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Eigen::VectorXd s = es.eigenvalues();
    for (int i = 0; i < s.size(); ++i) s[i] = s[i] < 0 ? -1.0 : 1.0;
    return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = {g(rng), g(rng), g(rng)};
    } while (v.norm() < 1e-12);
    return v.normalized();
}

Mat haar_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cplx ph = r(i, i) / std::abs(r(i, i));
        q.col(i) *= ph;
    }
    return q;
}

Mat from_bloch(const Eigen::Vector3d& v) { return v[0] * pauli_x() + v[1] * pauli_y() + v[2] * pauli_z(); }

double real_checked(cplx z, double scale) {
    if (std::abs(z.imag()) > 1e-9 * std::max(1.0, scale)) throw std::runtime_error("expectation has a non-negligible imaginary part");
    return z.real();
}

}  // namespace

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Mat pauli_y() {
    Mat m(2, 2);
    m << 0, -I, I, 0;
    return m;
}
Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat bloch(double theta, double phi) {
    Mat m(2, 2);
    m << std::cos(theta), std::sin(theta) * std::exp(-I * phi), std::sin(theta) * std::exp(I * phi), -std::cos(theta);
    return m;
}

Mat xy_observable(double phi) { return bloch(pi / 2, phi); }
Mat xz_observable(double t) { return bloch(t, 0); }

Vec gghz(int n, double theta, int d) {
    Vec v = Vec::Zero(ipow(d, n));
    long ones = 0;
    for (int i = 0; i < n; ++i) ones = ones * d + 1;
    v[0] = std::cos(theta);
    v[ones] += std::sin(theta);
    return v;
}

double expectation(const Functional& f, const QuantumModel& q) {
    const int n = f.scenario().parties();
    if (static_cast<int>(q.obs.size()) != n) throw std::invalid_argument("model party count mismatch");
    for (int p = 0; p < n; ++p)
        if (static_cast<int>(q.obs[p].size()) < f.scenario().settings[p]) throw std::invalid_argument("model lacks observables");
    if (q.state.size() != ipow(q.d, n)) throw std::invalid_argument("state dimension mismatch");
    auto T = terms_of(f);
    Vec phi = contract(T, q.obs, q.state, n, q.d, -1, 0);
    return real_checked(q.state.dot(phi), f.algebraic_bound().get_d());
}

Mat bell_operator(const Functional& f, const std::vector<std::vector<Mat>>& obs) {
    const int n = f.scenario().parties();
    const int d = static_cast<int>(obs.at(0).at(0).rows());
    const long D = ipow(d, n);
    Mat B = Mat::Zero(D, D);
    Mat id = Mat::Identity(d, d);
    for (auto& [m, c] : f.terms()) {
        Mat k = Mat::Identity(1, 1);
        for (int p = 0; p < n; ++p) k = kron(k, m[p] ? obs[p][m[p] - 1] : id);
        B += c.get_d() * k;
    }
    return B;
}

QuantumModel random_model(const Scenario& s, int d, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix(seed));
    QuantumModel q;
    q.d = d;
    q.obs.resize(s.parties());
    for (int p = 0; p < s.parties(); ++p)
        for (int j = 0; j < s.settings[p]; ++j) {
            if (d == 2) {
                q.obs[p].push_back(from_bloch(random_unit(rng)));
            } else {
                Mat U = haar_unitary(d, rng);
                Eigen::VectorXd t(d);
                for (int i = 0; i < d; ++i) t[i] = i < d / 2 ? -1.0 : 1.0;
                q.obs[p].push_back(U * t.cast<cplx>().asDiagonal() * U.adjoint());
            }
        }
    // random state; replaced at the first state update
    std::normal_distribution<double> g(0.0, 1.0);
    q.state = Vec(ipow(d, s.parties()));
    for (long i = 0; i < q.state.size(); ++i) q.state[i] = cplx(g(rng), g(rng));
    q.state.normalize();
    return q;
}

namespace {

struct Runner {
    const Functional& f;
    std::vector<Term> T;
    int n;
    double shift;
    const SeesawOptions& opt;

    Runner(const Functional& fn, const SeesawOptions& o)
        : f(fn), T(terms_of(fn)), n(fn.scenario().parties()), shift(fn.algebraic_bound().get_d()), opt(o) {}

    double value(const QuantumModel& q) const {
        Vec phi = contract(T, q.obs, q.state, n, q.d, -1, 0);
        return real_checked(q.state.dot(phi), shift);
    }

    void update_state(QuantumModel& q) const {
        const long D = q.state.size();
        if (D <= opt.dense_limit) {
            Mat B = bell_operator(f, q.obs);
            Eigen::SelfAdjointEigenSolver<Mat> es(B);
            q.state = es.eigenvectors().col(D - 1);
            return;
        }
        // power iteration on B + shift; the Rayleigh quotient never decreases for a PSD operator
        double last = -1e300;
        for (int it = 0; it < 5000; ++it) {
            Vec w = contract(T, q.obs, q.state, n, q.d, -1, 0) + shift * q.state;
            double rq = real_checked(q.state.dot(w), shift);
            q.state = w.normalized();
            if (rq - last < 1e-14) break;
            last = rq;
        }
    }

    SeesawResult run(QuantumModel q) const {
        SeesawResult r;
        update_state(q);
        double v = value(q);
        if (opt.keep_trace) r.trace.push_back(v);
        int round = 0;
        for (; round < opt.max_rounds; ++round) {
            const double start = v;
            for (int p = 0; p < n; ++p)
                for (int j = 1; j <= f.scenario().settings[p]; ++j) {
                    Vec phi = contract(T, q.obs, q.state, n, q.d, p, j);
                    Mat H = hermitian_part(reduced(phi, q.state, p, n, q.d));
                    double old_part = (q.obs[p][j - 1] * H).trace().real();
                    q.obs[p][j - 1] = sign_of(H);
                    double new_part = (q.obs[p][j - 1] * H).trace().real();
                    double nv = v - old_part + new_part;
                    if (nv < v - 1e-9) r.monotone = false;
                    v = nv;
                    if (opt.keep_trace) r.trace.push_back(v);
                }
            update_state(q);
            double nv = value(q);
            if (nv < v - 1e-9) r.monotone = false;
            v = nv;
            if (opt.keep_trace) r.trace.push_back(v);
            if (v - start < opt.tol) {
                ++round;
                break;
            }
        }
        r.value = v;
        r.rounds = round;
        r.model = std::move(q);
        return r;
    }
};

SeesawResult pick(std::vector<SeesawResult>& all) {
    std::size_t best = 0;
    bool mono = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        mono = mono && all[i].monotone;
        if (all[i].value > all[best].value) best = i;
    }
    SeesawResult r = std::move(all[best]);
    r.best_restart = static_cast<int>(best);
    r.monotone = mono;
    return r;
}

void check_d(int d) {
    if (d < 2 || d > 4) throw std::invalid_argument("dimension must be 2, 3 or 4");
}

}  // namespace

SeesawResult seesaw_from(const Functional& f, QuantumModel start, const SeesawOptions& opt) {
    Runner run(f, opt);
    return run.run(std::move(start));
}

SeesawResult seesaw(const Functional& f, int d, const SeesawOptions& opt) {
    check_d(d);
    if (opt.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    Runner run(f, opt);
    std::vector<SeesawResult> all(opt.restarts);
    int threads = opt.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int r = 0; r < opt.restarts; ++r)
        all[r] = run.run(random_model(f.scenario(), d, opt.seed * 1000003ULL + static_cast<std::uint64_t>(r)));
    (void)threads;
    return pick(all);
}

SeesawResult seesaw_serial(const Functional& f, int d, const SeesawOptions& opt) {
    check_d(d);
    if (opt.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    Runner run(f, opt);
    std::vector<SeesawResult> all(opt.restarts);
    for (int r = 0; r < opt.restarts; ++r)
        all[r] = run.run(random_model(f.scenario(), d, opt.seed * 1000003ULL + static_cast<std::uint64_t>(r)));
    return pick(all);
}

// ---------------------------------------------------------------- GGHZ sweep

std::vector<double> interior_grid(int k) {
    std::vector<double> g;
    for (int i = 1; i <= k; ++i) g.push_back(i * (pi / 2) / (k + 1));
    return g;
}

namespace {

using Bloch = std::vector<std::vector<Eigen::Vector3d>>;

struct SweepRunner {
    const Functional& f;
    std::vector<Term> T;
    int n;
    const SweepOptions& opt;

    SweepRunner(const Functional& fn, const SweepOptions& o) : f(fn), T(terms_of(fn)), n(fn.scenario().parties()), opt(o) {}

    std::vector<std::vector<Mat>> mats(const Bloch& b) const {
        std::vector<std::vector<Mat>> obs(n);
        for (int p = 0; p < n; ++p)
            for (auto& v : b[p]) obs[p].push_back(from_bloch(v));
        return obs;
    }

    double optimise(Bloch& b, const Vec& psi) const {
        auto obs = mats(b);
        auto val = [&] { return real_checked(psi.dot(contract(T, obs, psi, n, 2, -1, 0)), 1.0); };
        double v = val();
        const Mat sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
        for (int round = 0; round < opt.max_rounds; ++round) {
            const double start = v;
            for (int p = 0; p < n; ++p)
                for (int j = 1; j <= f.scenario().settings[p]; ++j) {
                    Vec phi = contract(T, obs, psi, n, 2, p, j);
                    Mat H = hermitian_part(reduced(phi, psi, p, n, 2));
                    Eigen::Vector3d h((sx * H).trace().real(), (sy * H).trace().real(), (sz * H).trace().real());
                    if (h.norm() < 1e-14) continue;
                    b[p][j - 1] = h.normalized();
                    obs[p][j - 1] = from_bloch(b[p][j - 1]);
                }
            v = val();
            if (v - start < opt.tol) break;
        }
        return v;
    }

    Bloch random_start(std::mt19937_64& rng) const {
        Bloch b(n);
        for (int p = 0; p < n; ++p)
            for (int j = 0; j < f.scenario().settings[p]; ++j) b[p].push_back(random_unit(rng));
        return b;
    }

    SweepPoint cold(double theta, std::size_t idx) const {
        Vec psi = gghz(n, theta);
        std::mt19937_64 rng(splitmix(opt.seed * 7919ULL + idx));
        SweepPoint best;
        best.theta = theta;
        best.value = -1e300;
        for (int r = 0; r < opt.restarts; ++r) {
            Bloch b = random_start(rng);
            double v = optimise(b, psi);
            if (v > best.value) {
                best.value = v;
                best.bloch = b;
            }
        }
        return best;
    }

    SweepPoint warm(const std::vector<SweepPoint>& prev, std::size_t i) const {
        SweepPoint best = prev[i];
        Vec psi = gghz(n, best.theta);
        for (std::size_t k : {i - 1, i + 1}) {
            if (k >= prev.size()) continue;  // wraps for i == 0
            Bloch b = prev[k].bloch;
            double v = optimise(b, psi);
            if (v > best.value + 1e-13) {
                best.value = v;
                best.bloch = b;
            }
        }
        return best;
    }
};

std::vector<SweepPoint> sweep_impl(const Functional& f, const std::vector<double>& grid, const SweepOptions& opt, bool parallel) {
    if (f.scenario().parties() > 12) throw std::invalid_argument("sweep limited to 12 qubits");
    SweepRunner run(f, opt);
    const std::int64_t N = static_cast<std::int64_t>(grid.size());
    std::vector<SweepPoint> pts(N);
    int threads = opt.threads;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
    if (!parallel) threads = 1;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < N; ++i) pts[i] = run.cold(grid[i], static_cast<std::size_t>(i));
    if (opt.warm_start) {
        for (int pass = 0; pass < 8; ++pass) {
            std::vector<SweepPoint> next(N);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
            for (std::int64_t i = 0; i < N; ++i) next[i] = run.warm(pts, static_cast<std::size_t>(i));
            bool changed = false;
            for (std::int64_t i = 0; i < N; ++i) changed = changed || next[i].value > pts[i].value + 1e-12;
            pts.swap(next);
            if (!changed) break;
        }
    }
    (void)threads;
    (void)parallel;
    return pts;
}

}  // namespace

std::vector<SweepPoint> ghz_sweep(const Functional& f, const std::vector<double>& grid, const SweepOptions& opt) {
    return sweep_impl(f, grid, opt, true);
}

std::vector<SweepPoint> ghz_sweep_serial(const Functional& f, const std::vector<double>& grid, const SweepOptions& opt) {
    return sweep_impl(f, grid, opt, false);
}

SweepSummary summarize(const std::vector<SweepPoint>& pts, double eps) {
    SweepSummary s;
    s.max_value = -1e300;
    bool in = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].value > s.max_value) {
            s.max_value = pts[i].value;
            s.argmax = pts[i].theta;
        }
        bool v = pts[i].value > 1 + eps;
        if (v && !in) s.violated.push_back({pts[i].theta, pts[i].theta});
        if (v) s.violated.back().second = pts[i].theta;
        in = v;
    }
    return s;
}

// ---------------------------------------------------------------- closed forms

double emabk_closed_form(int n, double theta, double a) {
    if (n < 3) throw std::invalid_argument("n >= 3");
    const double amp = std::pow(2.0, (n - 2) / 2.0);
    if (n % 2 == 0) return std::cos(a) - std::sin(2 * theta) / amp * std::sin(a);
    const double sgn = ((n + 1) / 2) % 2 ? -1.0 : 1.0;
    return std::cos(2 * theta) * std::cos(a) + sgn * amp * std::sin(2 * theta) * std::sin(a);
}

double emabk_optimal_angle(int n, double theta) {
    const double amp = std::pow(2.0, (n - 2) / 2.0);
    if (n % 2 == 0) return std::atan2(-std::sin(2 * theta) / amp, 1.0);
    const double sgn = ((n + 1) / 2) % 2 ? -1.0 : 1.0;
    return std::atan2(sgn * amp * std::sin(2 * theta), std::cos(2 * theta));
}

std::vector<std::vector<Mat>> mabk_settings(int n) {
    std::vector<std::vector<Mat>> obs;
    obs.push_back({xy_observable(0), xy_observable(pi / 2)});
    for (int p = 1; p < n; ++p) obs.push_back({xy_observable(-pi / 4), xy_observable(pi / 4)});
    return obs;
}

std::vector<std::vector<Mat>> emabk_max_settings(int n) {
    std::vector<std::vector<Mat>> obs;
    const Mat a = xy_observable(0), b = xy_observable(pi / 2), m = xy_observable(-pi / 4), p = xy_observable(pi / 4);
    if (n % 2 == 0) {
        obs.push_back({a, b, b});
        for (int k = 1; k < n - 1; ++k) obs.push_back({m, p, p});
    } else {
        obs.push_back({a, b, b, a});
        for (int k = 1; k < n - 1; ++k) obs.push_back({m, p, p, m});
    }
    obs.push_back({m, p});
    return obs;
}

std::vector<std::vector<Mat>> emabk_range_settings(int n, double a) {
    std::vector<std::vector<Mat>> obs;
    const double c = std::cos(a), s = std::sin(a);
    if (n % 2 == 0) {
        obs.push_back({pauli_x(), pauli_x(), pauli_z()});
        for (int k = 1; k < n - 1; ++k) obs.push_back({pauli_z(), pauli_x(), pauli_z()});
        Mat d2(2, 2);
        d2 << -c, s, s, c;
        obs.push_back({xz_observable(a), d2});
    } else {
        for (int k = 0; k < n - 1; ++k) obs.push_back({pauli_z(), pauli_z(), pauli_x(), pauli_y()});
        const double sg = ((n - 1) / 2) % 2 ? -1.0 : 1.0;
        const cplx up = s * (1.0 - I * sg) / std::sqrt(2.0), lo = s * (1.0 + I * sg) / std::sqrt(2.0);
        Mat e1(2, 2), e2(2, 2);
        e1 << c, up, lo, -c;
        e2 << c, -up, -lo, -c;
        obs.push_back({e1, e2});
    }
    return obs;
}

DualUseReport verify_dual_use(int n, std::uint64_t seed) {
    if (n < 3 || n > 6) throw std::invalid_argument("dual-use check covers 3 <= n <= 6");
    DualUseReport r;
    r.n = n;
    Functional f = emabk(n);
    QuantumModel q{2, emabk_max_settings(n), gghz(n, pi / 4)};
    r.value_at_pi4 = expectation(f, q);
    r.target = std::pow(2.0, (n - 1) / 2.0);
    r.max_ok = std::abs(r.value_at_pi4 - r.target) <= 1e-9;

    r.min_grid_value = 1e300;
    for (int i = 1; i <= 999; ++i) {
        double th = i * (pi / 2) / 1000;
        double v = emabk_closed_form(n, th, emabk_optimal_angle(n, th));
        if (v < r.min_grid_value) {
            r.min_grid_value = v;
            r.worst_theta = th;
        }
    }
    r.grid_ok = r.min_grid_value > 1;

    std::mt19937_64 rng(splitmix(seed));
    std::uniform_real_distribution<double> ut(0, pi / 2), ua(-pi, pi);
    for (int k = 0; k < 25; ++k) {
        double th = ut(rng), a = ua(rng);
        QuantumModel m{2, emabk_range_settings(n, a), gghz(n, th)};
        r.max_closed_form_error = std::max(r.max_closed_form_error, std::abs(expectation(f, m) - emabk_closed_form(n, th, a)));
    }
    r.closed_form_ok = r.max_closed_form_error <= 1e-12;
    return r;
}

bool mabk_matrix_check(int n, double tol, double* max_err) {
    Mat B = bell_operator(mabk(n), mabk_settings(n));
    const long D = B.rows();
    Mat T = Mat::Zero(D, D);
    T(0, D - 1) = T(D - 1, 0) = std::pow(2.0, (n - 1) / 2.0);
    double err = (B - T).cwiseAbs().maxCoeff();
    if (max_err) *max_err = err;
    return err <= tol;
}

}  // namespace bell
