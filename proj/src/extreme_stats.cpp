#include "extremegaps/extreme_stats.hpp"

#include "extremegaps/common.hpp"
#include "extremegaps/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace extremegaps::stats {

std::vector<GapSample> circular_gaps(const ensembles::EigenangleSet& e) {
    const int n = e.n();
    if (n < 2) throw ValidationError("circular_gaps: need at least two angles");
    std::vector<GapSample> gaps;
    gaps.reserve(n);
    for (int i = 0; i + 1 < n; ++i)
        gaps.push_back({e.angles(i + 1) - e.angles(i), e.angles(i), true});
    gaps.push_back({TWO_PI - e.angles(n - 1) + e.angles(0), e.angles(n - 1), true});
    return gaps;
}

std::vector<GapSample> bulk_gaps(const ensembles::Spectrum& s, double a, double b) {
    if (!(a < b) || a <= -2.0 || b >= 2.0)
        throw ValidationError("bulk_gaps: interval must satisfy -2 < a < b < 2");
    const int n = s.n();
    std::vector<GapSample> gaps;
    for (int i = 0; i + 1 < n; ++i) {
        double x = s.values(i);
        if (x >= a && x <= b)
            gaps.push_back({s.values(i + 1) - x, x, false});
    }
    return gaps;
}

MarkedPointPattern marked_pattern_cue(const ensembles::EigenangleSet& e) {
    const double scale = std::pow(static_cast<double>(e.n()), 4.0 / 3.0);
    MarkedPointPattern p;
    p.reserve(e.n());
    for (const auto& g : circular_gaps(e)) p.emplace_back(scale * g.value, g.location);
    return p;
}

MarkedPointPattern marked_pattern_gue(const ensembles::Spectrum& s, double epsilon0) {
    const double scale = std::pow(static_cast<double>(s.n()), 4.0 / 3.0);
    const double cut = 2.0 - epsilon0;
    MarkedPointPattern p;
    for (int i = 0; i + 1 < s.n(); ++i) {
        double x = s.values(i);
        if (std::fabs(x) < cut)
            p.emplace_back(scale * (s.values(i + 1) - x), x);
    }
    return p;
}

double normalize_smallest_cue(double t, int n) {
    if (t < 0.0) throw ValidationError("normalize_smallest_cue: negative gap");
    constexpr double c = 72.0 * PI;
    return std::pow(static_cast<double>(n), 4.0 / 3.0) * t / std::cbrt(c);
}

double gue_interval_weight(double a, double b) {
    auto f = [](double x) { return 16.0 * x - 8.0 * x * x * x / 3.0 + std::pow(x, 5.0) / 5.0; };
    return f(b) - f(a);
}

double normalize_smallest_gue(double t, int n, double a, double b) {
    if (t < 0.0) throw ValidationError("normalize_smallest_gue: negative gap");
    double w = gue_interval_weight(a, b) / (144.0 * PI * PI);
    return std::pow(static_cast<double>(n), 4.0 / 3.0) * std::cbrt(w) * t;
}

double kth_smallest_limit_cdf(int k, double x) {
    if (k < 1) throw ValidationError("kth_smallest_limit_cdf: k must be >= 1");
    if (x <= 0.0) return 0.0;
    return sf::gamma_p(static_cast<double>(k), x * x * x);
}

double joint_smallest_probability(const std::vector<Box>& boxes) {
    const std::size_t k = boxes.size();
    if (k == 0) throw ValidationError("joint_smallest_probability: no boxes");
    double prev = -1.0;
    for (const auto& b : boxes) {
        if (!(prev < b.lo && b.lo < b.hi))
            throw ValidationError("joint_smallest_probability: boxes must interlace");
        prev = b.hi;
    }
    if (boxes[0].lo < 0.0) throw ValidationError("joint_smallest_probability: negative box");
    double p = std::exp(-std::pow(boxes[k - 1].lo, 3.0)) -
               std::exp(-std::pow(boxes[k - 1].hi, 3.0));
    for (std::size_t l = 0; l + 1 < k; ++l)
        p *= std::pow(boxes[l].hi, 3.0) - std::pow(boxes[l].lo, 3.0);
    return p;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    const std::size_t n = samples.size();
    if (n < 100) throw ValidationError("ks_statistic: need at least 100 samples");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double cue_box_intensity(Box gap_box, double theta_lo, double theta_hi) {
    double a3 = std::pow(gap_box.hi, 3.0) - std::pow(gap_box.lo, 3.0);
    return a3 / 3.0 / (24.0 * PI) * (theta_hi - theta_lo) / TWO_PI;
}

double gue_box_intensity(Box gap_box, double x_lo, double x_hi) {
    double a3 = std::pow(gap_box.hi, 3.0) - std::pow(gap_box.lo, 3.0);
    return a3 / 3.0 / (48.0 * PI * PI) * gue_interval_weight(x_lo, x_hi);
}

namespace {

int box_count(const MarkedPointPattern& p, const BoxSpec& b) {
    int c = 0;
    for (const auto& [u, loc] : p)
        if (u > b.gap.lo && u < b.gap.hi && loc > b.loc_lo && loc < b.loc_hi) ++c;
    return c;
}

struct MeanSe {
    double mean, se;
};

MeanSe mean_se(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= (xs.size() - 1);
    return {m, std::sqrt(v / xs.size())};
}

}  // namespace

PoissonBoxReport poisson_box_test(const std::vector<MarkedPointPattern>& patterns,
                                  const BoxSpec& box, double mu) {
    if (patterns.size() < 1000)
        throw ValidationError("poisson_box_test: need at least 1000 patterns");
    const std::size_t t = patterns.size();
    std::vector<int> counts(t);
    for (std::size_t i = 0; i < t; ++i) counts[i] = box_count(patterns[i], box);

    PoissonBoxReport rep;
    rep.mu = mu;
    rep.patterns = t;
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> xs(t);
        for (std::size_t i = 0; i < t; ++i) {
            double x = 1.0;
            for (int j = 0; j < k; ++j) x *= counts[i] - j;
            xs[i] = std::max(x, 0.0);
        }
        auto ms = mean_se(xs);
        rep.factorial_moment[k - 1] = ms.mean;
        rep.factorial_se[k - 1] = ms.se;
    }
    rep.mean = rep.factorial_moment[0];
    rep.mean_se = rep.factorial_se[0];

    // histogram against Poisson(mu), tail bins merged to expected >= 5
    int cmax = *std::max_element(counts.begin(), counts.end());
    std::vector<double> observed(cmax + 2, 0.0);
    for (int c : counts) ++observed[c];
    std::vector<double> expected(cmax + 2, 0.0);
    double pmf = std::exp(-mu);
    double tail = static_cast<double>(t);
    for (int k = 0; k <= cmax; ++k) {
        expected[k] = t * pmf;
        tail -= t * pmf;
        pmf *= mu / (k + 1);
    }
    expected[cmax + 1] = std::max(tail, 0.0);
    // merge from the right until every used bin has expectation >= 5
    int last = cmax + 1;
    while (last > 0 && expected[last] < 5.0) {
        expected[last - 1] += expected[last];
        observed[last - 1] += observed[last];
        --last;
    }
    double chi2 = 0.0;
    int bins = 0;
    for (int k = 0; k <= last; ++k) {
        if (expected[k] <= 0.0) continue;
        double d = observed[k] - expected[k];
        chi2 += d * d / expected[k];
        ++bins;
    }
    rep.chi_square = chi2;
    rep.chi_square_dof = std::max(1, bins - 1);
    rep.chi_square_p = sf::chi_square_pvalue(chi2, rep.chi_square_dof);
    return rep;
}

CrossBoxReport cross_box_covariance(const std::vector<MarkedPointPattern>& patterns,
                                    const BoxSpec& b1, const BoxSpec& b2) {
    if (patterns.size() < 1000)
        throw ValidationError("cross_box_covariance: need at least 1000 patterns");
    const std::size_t t = patterns.size();
    std::vector<double> n1(t), n2(t);
    for (std::size_t i = 0; i < t; ++i) {
        n1[i] = box_count(patterns[i], b1);
        n2[i] = box_count(patterns[i], b2);
    }
    auto m1 = mean_se(n1), m2 = mean_se(n2);
    std::vector<double> prod(t);
    for (std::size_t i = 0; i < t; ++i) prod[i] = (n1[i] - m1.mean) * (n2[i] - m2.mean);
    auto mp = mean_se(prod);
    CrossBoxReport rep;
    rep.covariance = mp.mean;
    rep.se = mp.se;
    double s1 = m1.se * std::sqrt(static_cast<double>(t));
    double s2 = m2.se * std::sqrt(static_cast<double>(t));
    rep.correlation = (s1 > 0 && s2 > 0) ? mp.mean / (s1 * s2) : 0.0;
    return rep;
}

double largest_gap_statistic(const std::vector<GapSample>& gaps, int ell, int n,
                             std::optional<std::pair<double, double>> gue_interval) {
    if (ell < 1 || ell > static_cast<int>(gaps.size()))
        throw ValidationError("largest_gap_statistic: ell out of range");
    std::vector<double> values(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) values[i] = gaps[i].value;
    std::nth_element(values.begin(), values.begin() + (ell - 1), values.end(),
                     std::greater<double>());
    double v = values[ell - 1];
    double stat = v * n / std::sqrt(32.0 * std::log(static_cast<double>(n)));
    if (gue_interval) {
        auto [a, b] = *gue_interval;
        double edge = std::max(a * a, b * b);
        stat *= std::sqrt(4.0 - edge);
    }
    return stat;
}

ChiSquareReport location_density_test(const std::vector<double>& locations,
                                      double a, double b, int bins) {
    if (locations.size() < 1000)
        throw ValidationError("location_density_test: need at least 1000 locations");
    if (!(a < b)) throw ValidationError("location_density_test: bad interval");
    const double total_w = gue_interval_weight(a, b);
    std::vector<double> observed(bins, 0.0);
    std::size_t used = 0;
    for (double x : locations) {
        if (x < a || x >= b) continue;
        int k = static_cast<int>((x - a) / (b - a) * bins);
        k = std::min(k, bins - 1);
        ++observed[k];
        ++used;
    }
    ChiSquareReport rep;
    double chi2 = 0.0;
    for (int k = 0; k < bins; ++k) {
        double lo = a + (b - a) * k / bins;
        double hi = a + (b - a) * (k + 1) / bins;
        double e = used * gue_interval_weight(lo, hi) / total_w;
        double d = observed[k] - e;
        chi2 += d * d / e;
    }
    rep.statistic = chi2;
    rep.dof = bins - 1;
    rep.p_value = sf::chi_square_pvalue(chi2, rep.dof);
    std::vector<double> xs(locations.begin(), locations.end());
    auto ms = mean_se(xs);
    rep.mean = ms.mean;
    rep.mean_se = ms.se;
    return rep;
}

}  // namespace extremegaps::stats
