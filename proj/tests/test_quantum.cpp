#include <doctest.h>

#include "bell/families.hpp"
#include "bell/local.hpp"
#include "bell/quantum.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace bell;

namespace {
constexpr double pi = std::numbers::pi;

Mat random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = cplx(g(rng), g(rng));
    return Eigen::HouseholderQR<Mat>(z).householderQ();
}

Mat kron_all(const std::vector<Mat>& ms) {
    Mat r = Mat::Identity(1, 1);
    for (auto& m : ms) {
        Mat k(r.rows() * m.rows(), r.cols() * m.cols());
        for (int i = 0; i < r.rows(); ++i)
            for (int j = 0; j < r.cols(); ++j) k.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = r(i, j) * m;
        r = k;
    }
    return r;
}
}  // namespace

TEST_CASE("observables") {
    for (double t : {0.0, 0.3, 1.2})
        for (double p : {0.0, 0.7, -2.0}) {
            Mat o = bloch(t, p);
            CHECK((o - o.adjoint()).norm() < 1e-12);
            CHECK((o * o - Mat::Identity(2, 2)).norm() < 1e-10);
        }
    CHECK((xy_observable(0) - pauli_x()).norm() < 1e-15);
    CHECK((xy_observable(pi / 2) - pauli_y()).norm() < 1e-15);
    CHECK((xz_observable(0) - pauli_z()).norm() < 1e-15);
    Vec g = gghz(3, 0.4);
    CHECK(std::abs(g.norm() - 1) < 1e-12);
    CHECK(std::abs(g[0] - std::cos(0.4)) < 1e-15);
    CHECK(std::abs(g[7] - std::sin(0.4)) < 1e-15);
    CHECK(std::abs(gghz(2, 0.4, 3)[4] - std::sin(0.4)) < 1e-15);
}

TEST_CASE("known settings on the GHZ state") {
    for (int n = 2; n <= 6; ++n) {
        QuantumModel q{2, mabk_settings(n), gghz(n, pi / 4)};
        CHECK(std::abs(expectation(mabk(n), q) - std::pow(2.0, (n - 1) / 2.0)) < 1e-10);
        double err = 1;
        CHECK(mabk_matrix_check(n, 1e-10, &err));
        CHECK(err < 1e-10);
    }
}

TEST_CASE("factored contraction agrees with the dense operator") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        Scenario s(i % 2 ? std::vector<int>{2, 3, 2} : std::vector<int>{2, 2});
        int d = 2 + i % 3;
        auto f = oracle::random_functional(s, rng);
        auto q = random_model(s, d, 100 + i);
        Mat B = bell_operator(f, q.obs);
        double dense = (q.state.adjoint() * B * q.state)(0, 0).real();
        CHECK(std::abs(expectation(f, q) - dense) < 1e-10);
        // the operator is a sum of tensor products built independently here
        Mat T = Mat::Zero(B.rows(), B.cols());
        for (auto& [m, c] : f.terms()) {
            std::vector<Mat> fac;
            for (int p = 0; p < s.parties(); ++p) fac.push_back(m[p] ? q.obs[p][m[p] - 1] : Mat::Identity(d, d));
            T += c.get_d() * kron_all(fac);
        }
        CHECK((T - B).norm() < 1e-10);
    }
}

TEST_CASE("unitary invariance") {
    std::mt19937_64 rng(8);
    Scenario s({2, 2, 2});
    for (int i = 0; i < 10; ++i) {
        auto f = oracle::random_functional(s, rng);
        auto q = random_model(s, 2, i);
        double v = expectation(f, q);
        std::vector<Mat> us;
        for (int p = 0; p < 3; ++p) us.push_back(random_unitary(2, rng));
        QuantumModel r = q;
        for (int p = 0; p < 3; ++p)
            for (auto& o : r.obs[p]) o = us[p] * o * us[p].adjoint();
        r.state = kron_all(us) * q.state;
        CHECK(std::abs(expectation(f, r) - v) < 1e-10);
    }
}

TEST_CASE("classical embedding") {
    std::mt19937_64 rng(12);
    Scenario s({2, 3, 2});
    for (int i = 0; i < 20; ++i) {
        auto f = oracle::random_functional(s, rng);
        auto st = strategy_from_bits(s, rng() % s.vertex_count());
        QuantumModel q;
        q.d = 2;
        q.obs.resize(3);
        for (int p = 0; p < 3; ++p)
            for (int v : st[p]) q.obs[p].push_back(v * Mat::Identity(2, 2));
        q.state = Vec::Zero(8);
        q.state[5] = 1;
        CHECK(std::abs(expectation(f, q) - evaluate(f, st).get_d()) < 1e-12);
    }
}

TEST_CASE("see-saw values") {
    SeesawOptions o;
    CHECK(std::abs(seesaw(chsh(), 2, o).value - std::sqrt(2.0)) < 1e-6);
    CHECK(std::abs(seesaw(sliwa(7), 2, o).value - 5.0 / 3) < 1e-4);
    o.restarts = 1;
    CHECK(std::abs(seesaw(Functional(Scenario({2, 2})), 2, o).value) < 1e-12);
    auto r = seesaw(chsh(), 3, o);
    CHECK(r.value <= std::sqrt(2.0) + 1e-9);
    CHECK(r.value >= 1 - 1e-9);
    CHECK_THROWS(seesaw(chsh(), 5, o));
    o.restarts = 0;
    CHECK_THROWS(seesaw(chsh(), 2, o));
}

TEST_CASE("see-saw is reproducible and thread independent") {
    SeesawOptions o;
    o.restarts = 12;
    auto a = seesaw(sliwa(9), 2, o);
    auto b = seesaw_serial(sliwa(9), 2, o);
    o.threads = 1;
    auto c = seesaw(sliwa(9), 2, o);
    CHECK(a.value == b.value);
    CHECK(a.value == c.value);
    CHECK(a.best_restart == b.best_restart);
    o.seed = 1;
    auto d = seesaw(sliwa(9), 2, o);
    CHECK(std::abs(d.value - a.value) < 1e-3);
}

TEST_CASE("see-saw trace is monotone and sits between the bounds") {
    std::mt19937_64 rng(31);
    SeesawOptions o;
    o.restarts = 3;
    o.keep_trace = true;
    for (int i = 0; i < 10; ++i) {
        Scenario s(i % 2 ? std::vector<int>{2, 2, 2} : std::vector<int>{3, 2});
        auto f = oracle::random_functional(s, rng);
        auto r = seesaw(f, 2, o);
        CHECK(r.monotone);
        for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] >= r.trace[k - 1] - 1e-9);
        CHECK(r.value <= f.algebraic_bound().get_d() + 1e-9);
        CHECK(r.value >= lhv_bound(f).lhv_bound.get_d() - 1e-6);
    }
}

TEST_CASE("power-iteration branch") {
    SeesawOptions o;
    o.restarts = 8;
    o.dense_limit = 4;
    CHECK(std::abs(seesaw(mabk(3), 2, o).value - 2) < 1e-4);
}

TEST_CASE("iterated functional is at least as violated as its pieces") {
    SeesawOptions o;
    o.restarts = 20;
    auto in = decompose(sliwa4(4, 1));
    double best = 0;
    for (auto& p : in.pieces) best = std::max(best, seesaw(p, 2, o).value);
    CHECK(seesaw(iterate(in), 2, o).value >= best - 1e-6);
}

TEST_CASE("closed forms") {
    // even: cos a - sin(2t)/2^{(n-2)/2} sin a; optimum sqrt(1 + sin^2(2t)/2^{n-2})
    double t = pi / 4;
    CHECK(std::abs(emabk_closed_form(4, t, emabk_optimal_angle(4, t)) - std::sqrt(5.0) / 2) < 1e-12);
    CHECK(std::abs(emabk_closed_form(3, t, pi / 2) - std::sqrt(2.0)) < 1e-12);
    // five parties: the sine term carries a minus sign
    CHECK(std::abs(emabk_closed_form(5, 0.3, 0.4) - (std::cos(0.6) * std::cos(0.4) - 2 * std::sqrt(2.0) * std::sin(0.6) * std::sin(0.4))) < 1e-12);
    CHECK(emabk_closed_form(4, 1e-9, 0.0) <= 1);
    for (int n = 3; n <= 6; ++n) CHECK(emabk_closed_form(n, 0.5, emabk_optimal_angle(n, 0.5)) > 1);
}

TEST_CASE("dual-use checks") {
    for (int n = 3; n <= 6; ++n) {
        auto r = verify_dual_use(n);
        CHECK(r.max_ok);
        CHECK(r.grid_ok);
        CHECK(r.closed_form_ok);
        CHECK(std::abs(r.target - std::pow(2.0, (n - 1) / 2.0)) < 1e-15);
    }
    CHECK_THROWS(verify_dual_use(7));
}

TEST_CASE("sweeps") {
    auto grid = interior_grid(9);
    CHECK(grid.size() == 9);
    CHECK(std::abs(grid[4] - pi / 4) < 1e-15);
    SweepOptions o;
    o.restarts = 6;
    for (int n = 2; n <= 5; ++n) {
        auto pts = ghz_sweep(mabk(n), {pi / 4}, o);
        CHECK(pts[0].value >= std::pow(2.0, (n - 1) / 2.0) - 1e-4);
    }
    auto a = ghz_sweep(caf(3), grid, o);
    auto b = ghz_sweep_serial(caf(3), grid, o);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i].value == b[i].value);
    auto s = summarize(a);
    CHECK(s.violated.size() == 1);
    CHECK(std::abs(s.max_value - std::sqrt(2.0)) < 1e-6);

    std::vector<SweepPoint> fake(5);
    double vals[] = {0.5, 1.2, 1.3, 0.9, 1.1};
    for (int i = 0; i < 5; ++i) fake[i] = {double(i), vals[i], {}};
    auto fs = summarize(fake);
    CHECK(fs.violated.size() == 2);
    CHECK(fs.violated[0] == std::pair<double, double>{1, 2});
    CHECK(fs.argmax == 2);
}
