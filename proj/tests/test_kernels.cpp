#include "extremegaps/kernels.hpp"

#include "extremegaps/common.hpp"
#include "extremegaps/linalg.hpp"
#include "extremegaps/rng.hpp"
#include "extremegaps/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace extremegaps;

TEST_CASE("hermite function base cases") {
    CHECK(kernels::psi(0, 0.0) == doctest::Approx(std::pow(TWO_PI, -0.25)).epsilon(1e-14));
    for (double x : {0.3, 0.7, 1.9, -2.4}) {
        double r = kernels::psi(1, x) / kernels::psi(0, x);
        CHECK(r == doctest::Approx(x).epsilon(1e-13));
    }
}

TEST_CASE("hermite functions are orthonormal under quadrature") {
    const auto& q = sf::gauss_legendre(400);
    std::vector<double> x, w;
    sf::map_to_interval(q, -40.0, 40.0, x, w);
    for (auto [j, k] : std::vector<std::pair<int, int>>{
             {0, 0}, {1, 1}, {7, 7}, {30, 30}, {0, 1}, {0, 30}, {7, 30}, {29, 30}}) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += w[i] * kernels::psi(j, x[i]) * kernels::psi(k, x[i]);
        double target = j == k ? 1.0 : 0.0;
        INFO("j=" << j << " k=" << k);
        CHECK(std::fabs(s - target) < 1e-8);
    }
}

TEST_CASE("hermite recurrence survives large index") {
    // bulk-scale argument for k = 1e4: finite, order k^{-1/4}
    double v = kernels::psi(10000, 150.0);
    CHECK(std::isfinite(v));
    CHECK(std::fabs(v) < 1.0);
    CHECK(std::fabs(v) > 1e-6);
    // far tail underflows to zero gracefully
    CHECK(kernels::psi(10000, 500.0) == 0.0);
}

TEST_CASE("psi derivative") {
    CHECK(kernels::psi_prime(0, 0.0) == 0.0);
    // finite-difference oracle at (n, x) = (5, 0.7)
    const double x = 0.7, h = 1e-6;
    double fd = (kernels::psi(5, x + h) - kernels::psi(5, x - h)) / (2.0 * h);
    double an = kernels::psi_prime(5, x);
    CHECK(std::fabs(an - fd) / std::fabs(an) < 1e-6);
    // construction identity: psi_n' + (x/2) psi_n - sqrt(n) psi_{n-1} = 0
    for (int n : {1, 5, 40}) {
        double pn = kernels::psi(n, x);
        double pm = kernels::psi(n - 1, x);
        double r = kernels::psi_prime(n, x) + 0.5 * x * pn - std::sqrt(double(n)) * pm;
        CHECK(std::fabs(r) <= 1e-15 * (std::fabs(0.5 * x * pn) + std::fabs(pm) + 1e-30));
    }
}

TEST_CASE("kernel diagonals") {
    auto sine = kernels::KernelHandle::sine();
    CHECK(kernels::kernel_eval(sine, 0.3, 0.3) == doctest::Approx(1.0 / PI).epsilon(1e-12));

    auto cue = kernels::KernelHandle::cue(25);
    CHECK(kernels::kernel_eval(cue, 1.0, 1.0) ==
          doctest::Approx(25.0 / TWO_PI).epsilon(1e-12));

    // bulk density approaches n rho_sc
    auto gue = kernels::KernelHandle::gue(100);
    double k00 = kernels::kernel_eval(gue, 0.0, 0.0);
    CHECK(std::fabs(k00 / (100.0 * kernels::semicircle_density(0.0)) - 1.0) < 0.05);
}

TEST_CASE("kernel symmetry is exact") {
    auto gue = kernels::KernelHandle::gue(60);
    auto cue = kernels::KernelHandle::cue(60);
    auto sine = kernels::KernelHandle::sine();
    rng::RngStream s(3, 3);
    for (int i = 0; i < 50; ++i) {
        double x = 3.6 * s.uniform() - 1.8;
        double y = 3.6 * s.uniform() - 1.8;
        CHECK(kernels::kernel_eval(gue, x, y) == kernels::kernel_eval(gue, y, x));
        CHECK(kernels::kernel_eval(sine, x, y) == kernels::kernel_eval(sine, y, x));
        double a = TWO_PI * s.uniform(), b = TWO_PI * s.uniform();
        CHECK(kernels::kernel_eval(cue, a, b) == kernels::kernel_eval(cue, b, a));
    }
}

TEST_CASE("correlation determinants") {
    auto cue = kernels::KernelHandle::cue(40);
    // one-point intensity
    CHECK(kernels::correlation_det(cue, {1.3}) ==
          doctest::Approx(40.0 / TWO_PI).epsilon(1e-12));
    // two-point expansion
    double u = 0.21;
    double k0 = 40.0 / TWO_PI;
    double ku = kernels::kernel_eval(cue, u, 0.0);
    CHECK(kernels::correlation_det(cue, {0.7, 0.7 + u}) ==
          doctest::Approx(k0 * k0 - ku * ku).epsilon(1e-11));
    // rank cutoff
    auto small_cue = kernels::KernelHandle::cue(3);
    CHECK(kernels::correlation_det(small_cue, {0.1, 0.9, 1.7, 2.5}) == 0.0);
}

TEST_CASE("hadamard-fischer bound on random cue point sets") {
    auto cue = kernels::KernelHandle::cue(30);
    rng::RngStream s(17, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        double p1 = TWO_PI * s.uniform(), p2 = TWO_PI * s.uniform();
        double p3 = TWO_PI * s.uniform(), p4 = TWO_PI * s.uniform();
        double r4;
        try {
            r4 = kernels::correlation_det(cue, {p1, p2, p3, p4});
        } catch (const NumericError&) {
            continue;  // coincident points can push round-off past the clamp
        }
        double bound = kernels::correlation_det(cue, {p1, p2}) *
                       kernels::correlation_det(cue, {p3, p4});
        CHECK(r4 <= bound * (1.0 + 1e-8) + 1e-9);
    }
}

TEST_CASE("near-diagonal two-point function matches quadratic law") {
    CHECK(kernels::rho2_near_diagonal_gue(200, 0.0, 0.0).exact == 0.0);
    for (double x : {0.0, 1.0}) {
        double u = std::pow(200.0, -4.0 / 3.0);
        auto r = kernels::rho2_near_diagonal_gue(200, x, u);
        INFO("x=" << x);
        CHECK(std::fabs(r.exact / r.leading_term - 1.0) < 0.1);
    }
    CHECK_THROWS_AS(kernels::rho2_near_diagonal_gue(200, 1.97, 1e-4), ValidationError);
}

TEST_CASE("cue kernel gram matrix on the uniform grid is a projection") {
    const int n = 32;
    auto cue = kernels::KernelHandle::cue(n);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = TWO_PI * i / n;
    Eigen::MatrixXd g = kernels::kernel_matrix(cue, grid) * (TWO_PI / n);
    linalg::HermitianMatrix h;
    h.entries = g.cast<std::complex<double>>();
    auto ev = linalg::eig_hermitian(h);
    for (int i = 0; i < n; ++i) CHECK(std::fabs(ev(i) - 1.0) < 1e-8);
}

TEST_CASE("scaled gue kernel stays bounded across n") {
    std::vector<double> maxima;
    for (int n : {50, 100, 200, 400}) {
        auto gue = kernels::KernelHandle::gue(n);
        double m = 0.0;
        for (double x = -1.8; x <= 1.8; x += 0.3)
            for (double y = -1.8; y <= 1.8; y += 0.3)
                m = std::max(m, std::fabs(kernels::kernel_eval(gue, x, y)) / n);
        maxima.push_back(m);
    }
    for (double m : maxima) {
        CHECK(m > 0.2);
        CHECK(m < 0.5);
    }
    CHECK(maxima.back() <= maxima.front() + 0.02);  // no growth trend
}

TEST_CASE("scaled kernels converge to the sine kernel") {
    const double x0 = 0.3;
    std::vector<double> sup;
    for (int n : {50, 100, 200, 400}) {
        auto gue = kernels::KernelHandle::gue(n);
        double rho = kernels::semicircle_density(x0);
        double delta = std::sqrt(std::log(double(n))) / n;
        double worst = 0.0;
        for (int i = 1; i <= 40; ++i) {
            double d = delta * i / 40.0;
            double lhs = kernels::kernel_eval(gue, x0, x0 + d) / (n * rho);
            double t = n * PI * rho * d;
            double rhs = std::sin(t) / t;
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        sup.push_back(worst);
    }
    for (std::size_t i = 0; i + 1 < sup.size(); ++i) CHECK(sup[i + 1] < sup[i]);
}
