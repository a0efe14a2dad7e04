#include "extremegaps/special_functions.hpp"

#include "extremegaps/common.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace extremegaps::sf {

namespace {

// series expansion, converges fast for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int it = 0; it < 500; ++it) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), x > a + 1 (modified Lentz)
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw ValidationError("gamma_p: a must be positive");
    if (x < 0.0) throw ValidationError("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0) throw ValidationError("gamma_q: a must be positive");
    if (x < 0.0) throw ValidationError("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof < 1) throw ValidationError("chi_square_pvalue: dof must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * statistic);
}

const Quadrature& gauss_legendre(int m) {
    if (m < 1) throw ValidationError("gauss_legendre: order must be >= 1");
    static std::map<int, Quadrature> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    Quadrature q;
    q.nodes.resize(m);
    q.weights.resize(m);
    int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_m
        double x = std::cos(PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[m - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[i] = w;
        q.weights[m - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(m, std::move(q));
    (void)inserted;
    return pos->second;
}

void map_to_interval(const Quadrature& q, double a, double b,
                     std::vector<double>& x, std::vector<double>& w) {
    const std::size_t m = q.nodes.size();
    x.resize(m);
    w.resize(m);
    double mid = 0.5 * (a + b);
    double hw = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = mid + hw * q.nodes[i];
        w[i] = hw * q.weights[i];
    }
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("least_squares: need at least two points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace extremegaps::sf
