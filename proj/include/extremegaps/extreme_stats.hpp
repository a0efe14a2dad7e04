#pragma once

#include "extremegaps/ensembles.hpp"

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace extremegaps::stats {

struct GapSample {
    double value;     // spacing, nonnegative
    double location;  // left endpoint of the gap
    bool circular;
};

// all n circular gaps, including the wrap-around one; values sum to 2 pi
std::vector<GapSample> circular_gaps(const ensembles::EigenangleSet& e);

// gaps lambda_{i+1} - lambda_i for eigenvalues with lambda_i in [a, b]
// (the right neighbor may lie outside)
std::vector<GapSample> bulk_gaps(const ensembles::Spectrum& s, double a, double b);

// one realization of the marked small-gap point pattern:
// (n^{4/3} * gap, left endpoint)
using MarkedPoint = std::pair<double, double>;
using MarkedPointPattern = std::vector<MarkedPoint>;

MarkedPointPattern marked_pattern_cue(const ensembles::EigenangleSet& e);
MarkedPointPattern marked_pattern_gue(const ensembles::Spectrum& s, double epsilon0 = 0.05);

// tau = n^{4/3} (72 pi)^{-1/3} t
double normalize_smallest_cue(double t, int n);

// int_a^b (4 - x^2)^2 dx in closed form
double gue_interval_weight(double a, double b);

// tau~ = n^{4/3} (int_I (4-x^2)^2 dx / (144 pi^2))^{1/3} t
double normalize_smallest_gue(double t, int n, double a, double b);

// limiting law of the k-th smallest normalized gap:
// P(tau_k <= x) = P(Gamma(k) <= x^3)
double kth_smallest_limit_cdf(int k, double x);

struct Box {
    double lo, hi;
};

// limiting joint probability that the k smallest normalized gaps fall in the
// interlacing boxes: (e^{-x_k^3} - e^{-y_k^3}) prod_{l<k} (y_l^3 - x_l^3)
double joint_smallest_probability(const std::vector<Box>& boxes);

// sup distance between the empirical CDF of `samples` and `cdf`
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// closed-form box intensities of the limiting Poisson processes
double cue_box_intensity(Box gap_box, double theta_lo, double theta_hi);
double gue_box_intensity(Box gap_box, double x_lo, double x_hi);

struct BoxSpec {
    Box gap;           // normalized-gap interval A
    double loc_lo, loc_hi;  // location interval I
};

struct PoissonBoxReport {
    double mu = 0.0;
    double mean = 0.0, mean_se = 0.0;
    std::array<double, 3> factorial_moment{};  // E N, E N(N-1), E N(N-1)(N-2)
    std::array<double, 3> factorial_se{};
    double chi_square = 0.0;
    int chi_square_dof = 0;
    double chi_square_p = 1.0;
    std::size_t patterns = 0;
};

// count statistics of the marked pattern in one box against Poisson(mu)
PoissonBoxReport poisson_box_test(const std::vector<MarkedPointPattern>& patterns,
                                  const BoxSpec& box, double mu);

struct CrossBoxReport {
    double covariance = 0.0;
    double se = 0.0;
    double correlation = 0.0;
};

// covariance of counts in two disjoint boxes (should vanish in the limit)
CrossBoxReport cross_box_covariance(const std::vector<MarkedPointPattern>& patterns,
                                    const BoxSpec& b1, const BoxSpec& b2);

// ell-th largest gap value scaled by n / sqrt(32 log n); for gaps collected in
// a GUE bulk interval, the inf_I sqrt(4 - x^2) prefactor is applied
double largest_gap_statistic(const std::vector<GapSample>& gaps, int ell, int n,
                             std::optional<std::pair<double, double>> gue_interval = {});

struct ChiSquareReport {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double mean = 0.0, mean_se = 0.0;
};

// histogram of smallest-gap locations against the (4-x^2)^2 density on [a, b]
ChiSquareReport location_density_test(const std::vector<double>& locations,
                                      double a, double b, int bins = 16);

}  // namespace extremegaps::stats
