#include "extremegaps/extreme_stats.hpp"

#include "extremegaps/common.hpp"
#include "extremegaps/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace extremegaps;

namespace {

ensembles::EigenangleSet make_angles(std::initializer_list<double> v) {
    ensembles::EigenangleSet e;
    e.angles.resize(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) e.angles(i++) = x;
    return e;
}

ensembles::Spectrum make_spectrum(std::initializer_list<double> v) {
    ensembles::Spectrum s;
    s.values.resize(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) s.values(i++) = x;
    return s;
}

}  // namespace

TEST_CASE("circular gaps") {
    auto g = stats::circular_gaps(make_angles({0.0, PI / 2}));
    REQUIRE(g.size() == 2);
    CHECK(g[0].value == doctest::Approx(PI / 2));
    CHECK(g[1].value == doctest::Approx(3 * PI / 2));
    CHECK(g[0].value + g[1].value == doctest::Approx(TWO_PI).epsilon(1e-12));

    // equally spaced angles
    const int n = 12;
    ensembles::EigenangleSet e;
    e.angles.resize(n);
    for (int i = 0; i < n; ++i) e.angles(i) = TWO_PI * i / n;
    for (const auto& gap : stats::circular_gaps(e))
        CHECK(gap.value == doctest::Approx(TWO_PI / n).epsilon(1e-12));

    // random set: count n, total 2 pi
    rng::RngStream s(3, 1);
    auto rnd = ensembles::sample_cue_eigenangles(100, s);
    auto gaps = stats::circular_gaps(rnd);
    CHECK(gaps.size() == 100);
    double total = 0.0;
    for (const auto& gap : gaps) total += gap.value;
    CHECK(std::fabs(total - TWO_PI) < 1e-10);

    CHECK_THROWS_AS(stats::circular_gaps(make_angles({1.0})), ValidationError);
}

TEST_CASE("bulk gaps") {
    auto s = make_spectrum({-1.0, 0.0, 0.5, 1.8});
    auto g = stats::bulk_gaps(s, -0.5, 1.0);
    REQUIRE(g.size() == 2);
    CHECK(g[0].value == doctest::Approx(0.5));
    CHECK(g[0].location == doctest::Approx(0.0));
    CHECK(g[1].value == doctest::Approx(1.3));
    CHECK(g[1].location == doctest::Approx(0.5));

    CHECK(stats::bulk_gaps(make_spectrum({-1.9, 1.9}), -0.5, 0.5).empty());

    // count identity: gaps = eigenvalues in I among the first n-1
    auto sp = make_spectrum({-1.5, -0.4, -0.1, 0.2, 0.9, 1.7});
    auto gg = stats::bulk_gaps(sp, -0.5, 1.0);
    int expected = 0;
    for (int i = 0; i + 1 < sp.n(); ++i)
        if (sp.values(i) >= -0.5 && sp.values(i) <= 1.0) ++expected;
    CHECK(static_cast<int>(gg.size()) == expected);
}

TEST_CASE("normalizations") {
    CHECK(stats::normalize_smallest_cue(0.0, 50) == 0.0);
    double t = std::cbrt(72.0 * PI) * std::pow(50.0, -4.0 / 3.0);
    CHECK(stats::normalize_smallest_cue(t, 50) == doctest::Approx(1.0).epsilon(1e-12));

    // closed-form weight against quadrature
    const auto& q = sf::gauss_legendre(60);
    std::vector<double> x, w;
    sf::map_to_interval(q, -2.0, 2.0, x, w);
    double quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        quad += w[i] * std::pow(4.0 - x[i] * x[i], 2.0);
    CHECK(stats::gue_interval_weight(-2.0, 2.0) == doctest::Approx(quad).epsilon(1e-12));
    CHECK(stats::gue_interval_weight(-2.0, 2.0) == doctest::Approx(512.0 / 15.0));

    // normalization preserves ordering
    rng::RngStream s(5, 5);
    std::vector<double> raw(20);
    for (auto& v : raw) v = s.uniform();
    std::vector<double> norm(raw);
    for (auto& v : norm) v = stats::normalize_smallest_gue(v, 300, -1.0, 1.0);
    for (std::size_t i = 0; i + 1 < raw.size(); ++i)
        CHECK((raw[i] < raw[i + 1]) == (norm[i] < norm[i + 1]));
}

TEST_CASE("limit law cdf") {
    for (double x : {0.2, 0.8, 1.4})
        CHECK(stats::kth_smallest_limit_cdf(1, x) ==
              doctest::Approx(1.0 - std::exp(-x * x * x)).epsilon(1e-12));
    CHECK(stats::kth_smallest_limit_cdf(3, 0.0) == 0.0);
    CHECK(stats::kth_smallest_limit_cdf(3, 50.0) == doctest::Approx(1.0));

    // k = 2 at x = 1 against direct quadrature of the density 3 x^5 e^{-x^3}
    const auto& q = sf::gauss_legendre(200);
    std::vector<double> x, w;
    sf::map_to_interval(q, 0.0, 1.0, x, w);
    double integral = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        integral += w[i] * 3.0 * std::pow(x[i], 5.0) * std::exp(-std::pow(x[i], 3.0));
    CHECK(std::fabs(stats::kth_smallest_limit_cdf(2, 1.0) - integral) < 1e-10);

    // stochastic ordering in k
    for (double xx : {0.3, 0.7, 1.1, 1.6})
        for (int k = 1; k <= 4; ++k)
            CHECK(stats::kth_smallest_limit_cdf(k, xx) >=
                  stats::kth_smallest_limit_cdf(k + 1, xx));
}

TEST_CASE("joint smallest probability") {
    double y = 0.9;
    CHECK(stats::joint_smallest_probability({{0.0, y}}) ==
          doctest::Approx(1.0 - std::exp(-y * y * y)).epsilon(1e-12));

    // partition consistency for k = 1
    double total = 0.0;
    const int parts = 8;
    const double cap = 1.2;
    for (int i = 0; i < parts; ++i)
        total += stats::joint_smallest_probability({{cap * i / parts, cap * (i + 1) / parts}});
    CHECK(std::fabs(total - (1.0 - std::exp(-cap * cap * cap))) < 1e-12);

    // degenerate box
    CHECK(stats::joint_smallest_probability({{0.5, 0.5 + 1e-15}}) ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK_THROWS_AS(stats::joint_smallest_probability({{0.3, 0.2}}), ValidationError);
    CHECK_THROWS_AS(stats::joint_smallest_probability({{0.0, 0.5}, {0.4, 0.8}}),
                    ValidationError);
}

TEST_CASE("joint law matches a simulated poisson process") {
    // simulate the limiting process with intensity 3u^2 du directly
    const std::vector<stats::Box> boxes{{0.2, 0.4}, {0.6, 0.9}};
    const double cap = 0.9;
    const double lam = cap * cap * cap;  // mean points below cap
    const long sims = 200000;
    rng::RngStream s(77, 0);
    long hits = 0;
    for (long i = 0; i < sims; ++i) {
        // Poisson(lam) via inversion on the uniform
        int npts = 0;
        double acc = std::exp(-lam), u = s.uniform(), cum = acc;
        while (u > cum) {
            ++npts;
            acc *= lam / npts;
            cum += acc;
        }
        int in1 = 0, in2 = 0;
        bool below = false;
        for (int p = 0; p < npts; ++p) {
            double upt = cap * std::cbrt(s.uniform());
            if (upt < 0.2)
                below = true;
            else if (upt < 0.4)
                ++in1;
            else if (upt < 0.6)
                below = true;  // between the boxes kills the event
            else
                ++in2;
        }
        if (!below && in1 == 1 && in2 >= 1) ++hits;
    }
    double mc = static_cast<double>(hits) / sims;
    double formula = stats::joint_smallest_probability(boxes);
    double se = std::sqrt(mc * (1.0 - mc) / sims);
    CHECK(std::fabs(mc - formula) < 3.0 * se);
}

TEST_CASE("ks statistic") {
    rng::RngStream s(13, 1);
    const int n = 10000;
    std::vector<double> u(n);
    for (auto& v : u) v = s.uniform();
    auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    double d = stats::ks_statistic(u, uniform_cdf);
    CHECK(d < 1.7 / std::sqrt(static_cast<double>(n)));
    auto shifted = [](double x) { return std::clamp(x - 0.2, 0.0, 1.0); };
    CHECK(stats::ks_statistic(u, shifted) > 0.2 - 1.7 / std::sqrt(static_cast<double>(n)));
    std::vector<double> tiny(10, 0.5);
    CHECK_THROWS_AS(stats::ks_statistic(tiny, uniform_cdf), ValidationError);
}

TEST_CASE("largest gap statistic") {
    const int n = 64;
    ensembles::EigenangleSet e;
    e.angles.resize(n);
    for (int i = 0; i < n; ++i) e.angles(i) = TWO_PI * i / n;
    auto gaps = stats::circular_gaps(e);
    double stat = stats::largest_gap_statistic(gaps, 1, n);
    CHECK(stat == doctest::Approx(TWO_PI / std::sqrt(32.0 * std::log(double(n))))
                      .epsilon(1e-12));
    // gue prefactor on [-1, 1] is sqrt(3)
    double stat_gue = stats::largest_gap_statistic(gaps, 1, n, std::make_pair(-1.0, 1.0));
    CHECK(stat_gue == doctest::Approx(stat * std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(stats::largest_gap_statistic(gaps, n + 1, n), ValidationError);
}

TEST_CASE("poisson box statistics on synthetic data") {
    // patterns drawn from an actual Poisson process reproduce their own law
    const double mu1 = 0.4, mu2 = 0.7;
    const long t = 20000;
    rng::RngStream s(99, 9);
    auto poisson = [&s](double lam) {
        int k = 0;
        double acc = std::exp(-lam), u = s.uniform(), cum = acc;
        while (u > cum) {
            ++k;
            acc *= lam / k;
            cum += acc;
        }
        return k;
    };
    std::vector<stats::MarkedPointPattern> patterns(t);
    for (long i = 0; i < t; ++i) {
        stats::MarkedPointPattern p;
        int n1 = poisson(mu1), n2 = poisson(mu2);
        for (int j = 0; j < n1; ++j)
            p.emplace_back(1.0 + s.uniform(), 0.5 * s.uniform());
        for (int j = 0; j < n2; ++j)
            p.emplace_back(3.0 + s.uniform(), 0.5 * s.uniform());
        patterns[i] = p;
    }
    stats::BoxSpec b1{{1.0, 2.0}, 0.0, 0.5};
    stats::BoxSpec b2{{3.0, 4.0}, 0.0, 0.5};
    auto rep = stats::poisson_box_test(patterns, b1, mu1);
    CHECK(std::fabs(rep.mean - mu1) <= 3.0 * rep.mean_se);
    CHECK(std::fabs(rep.factorial_moment[1] - mu1 * mu1) <= 3.0 * rep.factorial_se[1]);
    CHECK(rep.chi_square_p > 0.001);

    auto cross = stats::cross_box_covariance(patterns, b1, b2);
    CHECK(std::fabs(cross.covariance) <= 3.0 * cross.se);

    // an empty box is trivially Poisson(0)
    stats::BoxSpec degenerate{{5.0, 5.0}, 0.0, 0.5};
    auto rep0 = stats::poisson_box_test(patterns, degenerate, 0.0);
    CHECK(rep0.mean == 0.0);
    CHECK(rep0.chi_square == 0.0);
}

TEST_CASE("location density test on synthetic draws") {
    // rejection-sample the (4-x^2)^2 profile on [-1, 1]
    rng::RngStream s(123, 4);
    std::vector<double> locs;
    while (locs.size() < 6000) {
        double x = 2.0 * s.uniform() - 1.0;
        if (16.0 * s.uniform() < std::pow(4.0 - x * x, 2.0)) locs.push_back(x);
    }
    auto rep = stats::location_density_test(locs, -1.0, 1.0);
    CHECK(rep.p_value > 0.01);
    CHECK(std::fabs(rep.mean) <= 3.0 * rep.mean_se);

    // count ratio between [0, 0.5] and [0.5, 1] against the closed form
    double n_lo = 0, n_hi = 0;
    for (double x : locs) {
        if (x >= 0.0 && x < 0.5) ++n_lo;
        if (x >= 0.5 && x < 1.0) ++n_hi;
    }
    double expect = stats::gue_interval_weight(0.0, 0.5) / stats::gue_interval_weight(0.5, 1.0);
    double ratio = n_lo / n_hi;
    double se = ratio * std::sqrt(1.0 / n_lo + 1.0 / n_hi);
    CHECK(std::fabs(ratio - expect) < 3.0 * se);
}
