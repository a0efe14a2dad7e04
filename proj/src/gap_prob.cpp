#include "extremegaps/gap_prob.hpp"

#include "extremegaps/common.hpp"
#include "extremegaps/special_functions.hpp"

#include <Eigen/LU>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <vector>

namespace extremegaps::gap_prob {

namespace mp = boost::multiprecision;
using Real100 = mp::number<mp::cpp_bin_float<100>>;
using Real300 = mp::number<mp::cpp_bin_float<300>>;

namespace {

// LDL^T of the symmetric positive-definite Toeplitz matrix c_{j-k}, in the
// working type Real. The entries are evaluated in Real as well: the tiny
// pivots are produced by cancellation against O(1) entries, so entry noise at
// double precision would swamp them.
template <class Real>
bool log_toeplitz_det(int n, double alpha_d, int guard_digits10, double& out) {
    const Real alpha(alpha_d);
    const Real pi_r = 4 * atan(Real(1));
    std::vector<Real> c(n);
    c[0] = 1 - alpha / pi_r;
    for (int m = 1; m < n; ++m) c[m] = -sin(m * alpha) / (pi_r * m);

    std::vector<std::vector<Real>> l(n);
    for (int i = 0; i < n; ++i) l[i].resize(i + 1);
    std::vector<Real> d(n);
    const Real floor_pivot = pow(Real(10), -guard_digits10);

    Real logdet(0);
    for (int j = 0; j < n; ++j) {
        Real s = c[0];
        for (int k = 0; k < j; ++k) s -= l[j][k] * l[j][k] * d[k];
        if (s <= 0 || s < floor_pivot) return false;  // precision exhausted
        d[j] = s;
        logdet += log(s);
        for (int i = j + 1; i < n; ++i) {
            Real t = c[i - j];
            for (int k = 0; k < j; ++k) t -= l[i][k] * l[j][k] * d[k];
            l[i][j] = t / s;
        }
    }
    out = static_cast<double>(logdet);
    return true;
}

// double-precision specialization shares the template; tiny pivot floor keeps
// it honest
bool log_toeplitz_det_double(int n, double alpha, double& out) {
    std::vector<double> c(n);
    c[0] = 1.0 - alpha / PI;
    for (int m = 1; m < n; ++m) c[m] = -std::sin(m * alpha) / (PI * m);
    std::vector<std::vector<double>> l(n);
    for (int i = 0; i < n; ++i) l[i].resize(i + 1);
    std::vector<double> d(n);
    double logdet = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = c[0];
        for (int k = 0; k < j; ++k) s -= l[j][k] * l[j][k] * d[k];
        if (s < 1e-11) return false;
        d[j] = s;
        logdet += std::log(s);
        for (int i = j + 1; i < n; ++i) {
            double t = c[i - j];
            for (int k = 0; k < j; ++k) t -= l[i][k] * l[j][k] * d[k];
            l[i][j] = t / s;
        }
    }
    out = logdet;
    return true;
}

double predicted_log10(int n, double alpha) {
    double s = std::sin(0.5 * alpha);
    if (s <= 0.0) return 0.0;
    double ln_d = n * static_cast<double>(n) * std::log(std::cos(0.5 * alpha)) -
                  0.25 * std::log(n * s);
    return ln_d / std::log(10.0);
}

}  // namespace

double toeplitz_symbol_coeff(double alpha, int m) {
    if (alpha < 0.0 || alpha >= PI)
        throw ValidationError("toeplitz_symbol_coeff: alpha must be in [0, pi)");
    if (m == 0) return 1.0 - alpha / PI;
    double mm = std::abs(m);
    return -std::sin(mm * alpha) / (PI * mm);
}

LogDet log_gap_probability_cue(int n, double alpha) {
    if (n < 1) throw ValidationError("log_gap_probability_cue: n must be >= 1");
    if (alpha < 0.0 || alpha >= PI)
        throw ValidationError("log_gap_probability_cue: alpha must be in [0, pi)");
    if (alpha == 0.0) return {0.0, 15};

    double need = -predicted_log10(n, alpha);
    double out;
    if (need < 8.0 && log_toeplitz_det_double(n, alpha, out)) return {out, 15};
    if (need < 70.0 && log_toeplitz_det<Real100>(n, alpha, 75, out)) return {out, 100};
    if (need < 270.0 && log_toeplitz_det<Real300>(n, alpha, 275, out)) return {out, 300};
    throw NumericError("log_gap_probability_cue: precision exhausted at n=" +
                       std::to_string(n) + " alpha=" + std::to_string(alpha));
}

double gap_probability_cue(int n, double alpha) {
    double lg = log_gap_probability_cue(n, alpha).log_value;
    double v = lg < -745.0 ? 0.0 : std::exp(lg);
    if (v > 1.0 + 1e-12)
        throw NumericError("gap_probability_cue: value above 1");
    return std::min(v, 1.0);
}

double log_gap_asymptotic(int n, double alpha, double c0) {
    return n * static_cast<double>(n) * std::log(std::cos(0.5 * alpha)) -
           0.25 * std::log(n * std::sin(0.5 * alpha)) + c0;
}

double dlog_gap_asymptotic(int n, double alpha) {
    double t = std::tan(0.5 * alpha);
    return -0.5 * n * static_cast<double>(n) * t - 0.125 / t;
}

double dlog_gap_exact(int n, double alpha) {
    const double h = alpha * 1e-4;
    auto f = [n](double a) { return log_gap_probability_cue(n, a).log_value; };
    double d_h = (f(alpha + h) - f(alpha - h)) / (2.0 * h);
    double d_h2 = (f(alpha + 0.5 * h) - f(alpha - 0.5 * h)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

C0Fit fit_c0(int n, const std::vector<double>& alphas) {
    if (alphas.size() < 2) throw ValidationError("fit_c0: need at least two grid points");
    std::vector<double> residuals;
    residuals.reserve(alphas.size());
    for (double a : alphas) {
        double exact = log_gap_probability_cue(n, a).log_value;
        residuals.push_back(exact - log_gap_asymptotic(n, a, 0.0));
    }
    C0Fit fit;
    fit.points = static_cast<int>(residuals.size());
    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= fit.points;
    double var = 0.0;
    for (double r : residuals) var += (r - mean) * (r - mean);
    fit.c0 = mean;
    fit.stderr_ = std::sqrt(var / (fit.points * std::max(1, fit.points - 1)));
    return fit;
}

GapCount expected_large_gap_count(int n, double u) {
    if (u <= 0.0 || u >= TWO_PI)
        throw ValidationError("expected_large_gap_count: u must be in (0, 2pi)");
    double alpha = 0.5 * u;
    if (alpha >= PI) return {0.0, false};
    LogDet ld = log_gap_probability_cue(n, alpha);
    if (ld.log_value < -690.0) return {0.0, true};
    double dlog = dlog_gap_exact(n, alpha);
    return {-PI * std::exp(ld.log_value) * dlog, false};
}

namespace {

void build_grid(const std::vector<Interval>& domain, int m,
                std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    const auto& rule = sf::gauss_legendre(m);
    std::vector<double> xi, wi;
    for (const auto& [a, b] : domain) {
        if (b < a) throw ValidationError("fredholm_det: interval with b < a");
        if (b == a) continue;
        sf::map_to_interval(rule, a, b, xi, wi);
        x.insert(x.end(), xi.begin(), xi.end());
        w.insert(w.end(), wi.begin(), wi.end());
    }
}

}  // namespace

double fredholm_det_fixed(const kernels::KernelHandle& h,
                          const std::vector<Interval>& domain, int m) {
    std::vector<double> x, w;
    build_grid(domain, m, x, w);
    const int k = static_cast<int>(x.size());
    if (k == 0) return 1.0;
    Eigen::MatrixXd a = kernels::kernel_matrix(h, x);
    for (int i = 0; i < k; ++i) {
        double si = std::sqrt(w[i]);
        for (int j = 0; j < k; ++j) a(i, j) *= -si * std::sqrt(w[j]);
        a(i, i) += 1.0;
    }
    return a.determinant();
}

double fredholm_det(const kernels::KernelHandle& h, const std::vector<Interval>& domain,
                    int m_start, double tol, int m_max) {
    if (m_start < 4) throw ValidationError("fredholm_det: quadrature order must be >= 4");
    double prev = fredholm_det_fixed(h, domain, m_start);
    for (int m = 2 * m_start; m <= m_max; m *= 2) {
        double cur = fredholm_det_fixed(h, domain, m);
        if (std::fabs(cur - prev) < tol) return cur;
        prev = cur;
    }
    throw NumericError("fredholm_det: no convergence at quadrature order " +
                       std::to_string(m_max));
}

double spacing_density_p2(double s) {
    if (s <= 0.0) throw ValidationError("spacing_density_p2: s must be positive");
    auto h = kernels::KernelHandle::sine();
    // converged order at the widest stencil point, reused across the stencil so
    // the difference sees a smooth function of s
    const double base_h = 1e-3;
    int m = 16;
    {
        double widest = PI * (s + 2.0 * base_h);
        double prev = fredholm_det_fixed(h, {{0.0, widest}}, m);
        for (int mm = 2 * m; mm <= 512; mm *= 2) {
            double cur = fredholm_det_fixed(h, {{0.0, widest}}, mm);
            if (std::fabs(cur - prev) < 1e-12) {
                m = mm;
                break;
            }
            prev = cur;
            m = mm;
        }
    }
    auto f = [&](double t) { return fredholm_det_fixed(h, {{0.0, PI * t}}, m); };
    auto second = [&](double step) {
        return (f(s - step) - 2.0 * f(s) + f(s + step)) / (step * step);
    };
    double d_h = second(base_h);
    double d_h2 = second(0.5 * base_h);
    return (4.0 * d_h2 - d_h) / 3.0;
}

double vacuum_prob_gue(int n, Interval interval, double epsilon0) {
    auto [a, b] = interval;
    if (b < a) throw ValidationError("vacuum_prob_gue: empty orientation");
    if (a == b) return 1.0;
    if (a < -2.0 + epsilon0 || b > 2.0 - epsilon0)
        throw ValidationError("vacuum_prob_gue: interval outside bulk window");
    return fredholm_det(kernels::KernelHandle::gue(n), {interval});
}

double negative_correlation_margin(const kernels::KernelHandle& h, Interval i1, Interval i2) {
    auto [a1, b1] = i1;
    auto [a2, b2] = i2;
    if (b1 < a1 || b2 < a2) throw ValidationError("negative_correlation_margin: bad interval");
    if (a2 == b2 || a1 == b1) return 0.0;
    if (std::max(a1, a2) < std::min(b1, b2))
        throw ValidationError("negative_correlation_margin: intervals overlap");
    const double tol = 1e-10;
    double p12 = fredholm_det(h, {i1, i2}, 16, tol);
    double p1 = fredholm_det(h, {i1}, 16, tol);
    double p2 = fredholm_det(h, {i2}, 16, tol);
    return p12 - p1 * p2;
}

}  // namespace extremegaps::gap_prob
