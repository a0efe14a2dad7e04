#pragma once

#include "extremegaps/linalg.hpp"

#include <cstdint>
#include <vector>

namespace extremegaps::toda {

struct TodaRhs {
    Eigen::VectorXd da;  // 2 (b_i^2 - b_{i-1}^2)
    Eigen::VectorXd db;  // b_i (a_{i+1} - a_i)
};

// raw Lax commutator S T - T S for the skew form S = tridiag(b, 0, -b)
TodaRhs toda_rhs(const linalg::TridiagonalMatrix& t);

struct IntegrationControls {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double drift_abort = 1e-6;     // relative spectral drift that aborts the run
    int drift_check_stride = 100;  // accepted steps between spectral checks
    bool check_every_step = false;
    bool record_offdiag_history = false;
    double max_time = 1e10;
    long max_steps = 100000000;
};

struct TodaDiagnostics {
    double max_spectral_drift = 0.0;  // relative to the spectral radius of T0
    double trace_drift = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
    double final_max_offdiag = 0.0;
    std::vector<double> offdiag_history;  // max |b| after each accepted step
};

struct TodaState {
    linalg::TridiagonalMatrix t;
    double time = 0.0;
    Eigen::VectorXd initial_spectrum;  // sorted reference for drift checks
};

struct TodaResult {
    double t_conv = 0.0;
    TodaState state;
    TodaDiagnostics diagnostics;
};

// Integrate the isospectral flow dT/dt = (1/2)(S T - T S) with an embedded
// Dormand-Prince 5(4) pair until max_k |b_k| < eps; the first-crossing time is
// located by bisection over the final step. Under this time normalization
// each b_k decays like exp((lambda_k - lambda_{k+1}) t / 2) with lambda sorted
// ascending, so convergence is governed by half the minimal spectral gap.
TodaResult integrate_toda(const linalg::TridiagonalMatrix& t0, double eps,
                          const IntegrationControls& controls = {});

// leading-order convergence-time estimate 2 log(1/eps) / min_k gap_k
double predicted_convergence_time(const Eigen::VectorXd& spectrum, double eps);

struct ExponentFit {
    double exponent = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap 95% interval
};

struct ScalingResult {
    std::vector<int> n_list;
    std::vector<double> median_tconv;    // median t_conv / log(1/eps)
    std::vector<double> median_min_gap;
    ExponentFit tconv_fit;
    ExponentFit min_gap_fit;
    double max_spectral_drift = 0.0;  // worst relative drift over all runs
};

// Median convergence time and minimal gap across random spectra, with log-log
// exponent fits. rescale_sqrt_n switches to the convention where the matrix is
// multiplied by sqrt(n) (bulk support grows like sqrt(n); minimal gap scales
// as n^{-5/6} instead of n^{-4/3}).
ScalingResult scaling_experiment(const std::vector<int>& n_list, int trials, double eps,
                                 std::uint64_t seed, bool rescale_sqrt_n, int workers);

}  // namespace extremegaps::toda
