#pragma once

#include "bell/core.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace bell {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct QuantumModel {
    int d = 2;
    std::vector<std::vector<Mat>> obs;  // obs[party][setting]
    Vec state;
};

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
// sigma . (sin t cos p, sin t sin p, cos t)
Mat bloch(double theta, double phi);
Mat xy_observable(double phi);  // theta = pi/2
Mat xz_observable(double t);    // phi = 0

Vec gghz(int n, double theta, int d = 2);

// <psi| B |psi> by factored contraction
double expectation(const Functional& f, const QuantumModel& q);
// dense Bell operator (testing and small systems)
Mat bell_operator(const Functional& f, const std::vector<std::vector<Mat>>& obs);

struct SeesawOptions {
    int restarts = 50;
    std::uint64_t seed = 20240601;
    int max_rounds = 500;
    double tol = 1e-10;
    int threads = 0;
    int dense_limit = 256;  // d^n at or below which the state is an exact top eigenvector
    bool keep_trace = false;
};

struct SeesawResult {
    double value = 0;
    QuantumModel model;
    int best_restart = -1;
    int rounds = 0;
    std::vector<double> trace;  // objective after every single update of the best restart
    bool monotone = true;       // every update of every restart was non-decreasing (1e-9 slack)
};

SeesawResult seesaw(const Functional& f, int d, const SeesawOptions& opt = {});
SeesawResult seesaw_serial(const Functional& f, int d, const SeesawOptions& opt = {});
// one run from a given model; the state is replaced before the first round
SeesawResult seesaw_from(const Functional& f, QuantumModel start, const SeesawOptions& opt);
QuantumModel random_model(const Scenario& s, int d, std::uint64_t seed);

struct SweepPoint {
    double theta = 0;
    double value = 0;
    std::vector<std::vector<Eigen::Vector3d>> bloch;  // optimal Bloch vectors
};

struct SweepOptions {
    int restarts = 12;
    std::uint64_t seed = 20240601;
    int max_rounds = 500;
    double tol = 1e-12;
    int threads = 0;
    bool warm_start = true;
};

// GGHZ state fixed, traceless qubit observables optimised
std::vector<SweepPoint> ghz_sweep(const Functional& f, const std::vector<double>& grid, const SweepOptions& opt = {});
std::vector<SweepPoint> ghz_sweep_serial(const Functional& f, const std::vector<double>& grid, const SweepOptions& opt = {});
// grid of k points strictly inside (0, pi/2): theta_i = i * (pi/2) / (k+1)
std::vector<double> interior_grid(int k);

struct SweepSummary {
    double max_value = 0;
    double argmax = 0;
    std::vector<std::pair<double, double>> violated;  // maximal runs of consecutive grid points with value > 1 + eps
};
SweepSummary summarize(const std::vector<SweepPoint>& pts, double eps = 1e-6);

// closed forms for the whole-range settings of the extended family; n = party count
double emabk_closed_form(int n, double theta, double last_angle);
double emabk_optimal_angle(int n, double theta);
// settings reaching 2^{(n-1)/2} on the GHZ state
std::vector<std::vector<Mat>> emabk_max_settings(int n);
// settings whose value on GGHZ(theta) is the closed form in last_angle
std::vector<std::vector<Mat>> emabk_range_settings(int n, double last_angle);
std::vector<std::vector<Mat>> mabk_settings(int n);

struct DualUseReport {
    int n = 0;
    double value_at_pi4 = 0;
    double target = 0;
    bool max_ok = false;
    double min_grid_value = 0;
    double worst_theta = 0;
    bool grid_ok = false;
    double max_closed_form_error = 0;
    bool closed_form_ok = false;
    bool ok() const { return max_ok && grid_ok && closed_form_ok; }
};
DualUseReport verify_dual_use(int n, std::uint64_t seed = 7);

bool mabk_matrix_check(int n, double tol = 1e-10, double* max_err = nullptr);

}  // namespace bell
