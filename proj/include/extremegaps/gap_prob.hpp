#pragma once

#include "extremegaps/kernels.hpp"

#include <utility>
#include <vector>

namespace extremegaps::gap_prob {

// Fourier coefficient of the arc-complement indicator:
// c_0 = 1 - alpha/pi, c_m = -sin(m alpha)/(pi m)
double toeplitz_symbol_coeff(double alpha, int m);

struct LogDet {
    double log_value;  // natural log of the determinant
    int digits;        // working precision that produced it
};

// log of the probability that an arc of length 2*alpha is free of eigenangles,
// as an n x n Toeplitz determinant. Evaluated by an LDL^T factorization in
// adaptive extended precision; values down past 1e-300 keep full log accuracy.
LogDet log_gap_probability_cue(int n, double alpha);

double gap_probability_cue(int n, double alpha);

// leading asymptotics of log D_n(alpha) with the additive constant supplied
double log_gap_asymptotic(int n, double alpha, double c0);

// asymptotics of d/dalpha log D_n(alpha)
double dlog_gap_asymptotic(int n, double alpha);

// d/dalpha log D_n(alpha) by Richardson-extrapolated central differences of
// the exact determinant (step alpha * 1e-4, one halving)
double dlog_gap_exact(int n, double alpha);

struct C0Fit {
    double c0 = 0.0;
    double stderr_ = 0.0;
    int points = 0;
};

// fit the additive constant of the log-determinant asymptotics on a grid of
// arc half-lengths (residual mean and its spread)
C0Fit fit_c0(int n, const std::vector<double>& alphas);

struct GapCount {
    double value = 0.0;
    bool underflow = false;  // determinant below representable range
};

// expected number of circular gaps exceeding u, from the derivative of the
// arc-vacuum probability: -pi * D_n'(u/2). The 2*pi/n mean density factor is
// included so the n = 2 case matches the direct two-point computation.
GapCount expected_large_gap_count(int n, double u);

using Interval = std::pair<double, double>;

// Fredholm determinant det(Id - K) restricted to a union of disjoint
// intervals, by symmetrized Nystrom discretization on Gauss-Legendre panels.
// The order doubles until the value moves less than `tol`.
double fredholm_det(const kernels::KernelHandle& h, const std::vector<Interval>& domain,
                    int m_start = 16, double tol = 1e-8, int m_max = 512);

// fixed-order variant (no refinement); used where smooth dependence on the
// domain endpoints matters more than the last digits
double fredholm_det_fixed(const kernels::KernelHandle& h,
                          const std::vector<Interval>& domain, int m);

// sine-kernel spacing density on the unit-mean-spacing scale: second
// derivative of the vacuum probability of (0, pi s), Richardson-extrapolated
// central second difference with base step 1e-3
double spacing_density_p2(double s);

// vacuum probability of an interval inside the bulk for the n-point Hermite
// kernel ensemble
double vacuum_prob_gue(int n, Interval interval, double epsilon0 = 0.05);

// P(both empty) - P(I1 empty) P(I2 empty); nonpositive up to quadrature error
// for these kernels
double negative_correlation_margin(const kernels::KernelHandle& h, Interval i1, Interval i2);

}  // namespace extremegaps::gap_prob
