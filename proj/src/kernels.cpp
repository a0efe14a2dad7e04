#include "extremegaps/kernels.hpp"

#include "extremegaps/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace extremegaps::kernels {

namespace {

constexpr double LOG_2PI_QUARTER = 0.45946926660233633;  // ln(2*pi)/4
constexpr double LN2 = 0.69314718055994530941;

std::atomic<std::uint64_t> g_clamp_count{0};

// scaled values of (h_{n-2}, h_{n-1}, h_n)/sqrt(factorials): value = m * 2^E
struct ScaledTriple {
    double m_nm2 = 0.0, m_nm1 = 0.0, m_n = 0.0;
    long exponent = 0;
};

ScaledTriple scaled_recurrence(int n, double x) {
    ScaledTriple s;
    if (n < 0) throw ValidationError("hermite recurrence: negative index");
    double prev2 = 0.0;   // h~_{k-1}
    double prev = 1.0;    // h~_k starting at k = 0
    long e = 0;
    // advance so that prev = h~_n, prev2 = h~_{n-1}
    double before_prev2 = 0.0;  // h~_{k-2}
    for (int k = 0; k < n; ++k) {
        double next = (x * prev - std::sqrt(static_cast<double>(k)) * prev2) /
                      std::sqrt(static_cast<double>(k + 1));
        before_prev2 = prev2;
        prev2 = prev;
        prev = next;
        double mag = std::max(std::fabs(prev), std::fabs(prev2));
        if (mag > 1e150) {
            prev *= 0x1p-512;
            prev2 *= 0x1p-512;
            before_prev2 *= 0x1p-512;
            e += 512;
        } else if (mag > 0.0 && mag < 1e-150) {
            prev *= 0x1p512;
            prev2 *= 0x1p512;
            before_prev2 *= 0x1p512;
            e -= 512;
        }
    }
    s.m_n = prev;
    s.m_nm1 = prev2;
    s.m_nm2 = before_prev2;
    s.exponent = e;
    return s;
}

double assemble(double mantissa, long exponent, double x) {
    if (mantissa == 0.0) return 0.0;
    double logw = exponent * LN2 - 0.25 * x * x - LOG_2PI_QUARTER +
                  std::log(std::fabs(mantissa));
    if (logw < -745.0) return 0.0;  // graceful far-tail underflow
    return std::copysign(std::exp(logw), mantissa);
}

struct PsiTriple {
    double nm2, nm1, n;
};

PsiTriple psi_triple(int n, double x) {
    ScaledTriple s = scaled_recurrence(n, x);
    return {assemble(s.m_nm2, s.exponent, x), assemble(s.m_nm1, s.exponent, x),
            assemble(s.m_n, s.exponent, x)};
}

// Wronskian-type combination sqrt(n) psi_{n-1}^2 - sqrt(n-1) psi_n psi_{n-2},
// the exact diagonal of the Hermite kernel before the n^{3/2} factor
double wronskian(const PsiTriple& t, int n) {
    return std::sqrt(static_cast<double>(n)) * t.nm1 * t.nm1 -
           std::sqrt(static_cast<double>(n - 1)) * t.n * t.nm2;
}

// diagonal value n * W(x sqrt(n)); integrates to n over the line, and the
// Christoffel-Darboux constant sqrt(n) fixes the off-diagonal prefactor below
double gue_near_diagonal(int n, double xbar) {
    double arg = xbar * std::sqrt(static_cast<double>(n));
    PsiTriple t = psi_triple(n, arg);
    return n * wronskian(t, n);
}

double cue_eval(int n, double theta) {
    double s = std::sin(0.5 * theta);
    if (std::fabs(s) < 1e-9) {
        double nn = static_cast<double>(n);
        return nn / TWO_PI * (1.0 - (nn * nn - 1.0) * theta * theta / 24.0);
    }
    return std::sin(0.5 * n * theta) / s / TWO_PI;
}

double sine_eval(double t) {
    if (std::fabs(t) < 1e-8) return (1.0 - t * t / 6.0) / PI;
    return std::sin(t) / (PI * t);
}

double gue_local_spacing(int n, double x) {
    return 1.0 / (n * std::max(semicircle_density(x), 1e-2));
}

}  // namespace

double semicircle_density(double x) {
    double t = 4.0 - x * x;
    return t > 0.0 ? std::sqrt(t) / TWO_PI : 0.0;
}

double psi(int k, double x) {
    if (k < 0) throw ValidationError("psi: k must be >= 0");
    ScaledTriple s = scaled_recurrence(k, x);
    return assemble(s.m_n, s.exponent, x);
}

double psi_prime(int k, double x) {
    if (k < 0) throw ValidationError("psi_prime: k must be >= 0");
    if (k == 0) return -0.5 * x * psi(0, x);
    ScaledTriple s = scaled_recurrence(k, x);
    double pk = assemble(s.m_n, s.exponent, x);
    double pkm1 = assemble(s.m_nm1, s.exponent, x);
    return -0.5 * x * pk + std::sqrt(static_cast<double>(k)) * pkm1;
}

HermitePair psi_pair(int n, double x) {
    if (n < 0) throw ValidationError("psi_pair: n must be >= 0");
    ScaledTriple s = scaled_recurrence(n, x);
    return {assemble(s.m_nm1, s.exponent, x), assemble(s.m_n, s.exponent, x)};
}

KernelHandle KernelHandle::cue(int n) {
    if (n < 1) throw ValidationError("KernelHandle::cue: n must be >= 1");
    return {KernelKind::Cue, n};
}

KernelHandle KernelHandle::gue(int n) {
    if (n < 1) throw ValidationError("KernelHandle::gue: n must be >= 1");
    return {KernelKind::Gue, n};
}

double KernelHandle::density(double x) const {
    switch (kind) {
        case KernelKind::Sine: return 1.0 / PI;
        case KernelKind::Cue: return n / TWO_PI;
        case KernelKind::Gue: return gue_near_diagonal(n, x);
    }
    return 0.0;
}

double kernel_eval(const KernelHandle& h, double x, double y) {
    if (x > y) std::swap(x, y);  // exact symmetry regardless of FP contraction
    switch (h.kind) {
        case KernelKind::Sine: return sine_eval(x - y);
        case KernelKind::Cue: return cue_eval(h.n, x - y);
        case KernelKind::Gue: break;
    }
    const int n = h.n;
    const double sq = std::sqrt(static_cast<double>(n));
    if (std::fabs(x - y) < 1e-6 * gue_local_spacing(n, 0.5 * (x + y)))
        return gue_near_diagonal(n, 0.5 * (x + y));
    HermitePair px = psi_pair(n, x * sq);
    HermitePair py = psi_pair(n, y * sq);
    return sq * (px.upper * py.lower - px.lower * py.upper) / (x - y);
}

Eigen::MatrixXd kernel_matrix(const KernelHandle& h, const std::vector<double>& points) {
    const int k = static_cast<int>(points.size());
    Eigen::MatrixXd m(k, k);
    if (h.kind != KernelKind::Gue) {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j <= i; ++j) {
                double v = kernel_eval(h, points[i], points[j]);
                m(i, j) = v;
                m(j, i) = v;
            }
        return m;
    }
    const int n = h.n;
    const double sq = std::sqrt(static_cast<double>(n));
    std::vector<HermitePair> pairs(k);
    for (int i = 0; i < k; ++i) pairs[i] = psi_pair(n, points[i] * sq);
    for (int i = 0; i < k; ++i) {
        m(i, i) = gue_near_diagonal(n, points[i]);
        for (int j = 0; j < i; ++j) {
            double dx = points[i] - points[j];
            double v;
            if (std::fabs(dx) < 1e-6 * gue_local_spacing(n, 0.5 * (points[i] + points[j])))
                v = gue_near_diagonal(n, 0.5 * (points[i] + points[j]));
            else
                v = sq * (pairs[i].upper * pairs[j].lower - pairs[i].lower * pairs[j].upper) / dx;
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

double correlation_det(const KernelHandle& h, const std::vector<double>& points) {
    const int k = static_cast<int>(points.size());
    if (k < 1) throw ValidationError("correlation_det: need at least one point");
    if (h.kind != KernelKind::Sine && k > h.n) return 0.0;  // rho_k vanishes above rank
    Eigen::MatrixXd m = kernel_matrix(h, points);
    double det = m.determinant();
    double scale = 1.0;
    for (int i = 0; i < k; ++i) scale *= std::max(m(i, i), 1e-300);
    if (det < 0.0) {
        if (det > -1e-10 * scale) {
            g_clamp_count.fetch_add(1, std::memory_order_relaxed);
            return 0.0;
        }
        throw NumericError("correlation_det: determinant negative beyond round-off");
    }
    return det;
}

std::uint64_t correlation_clamp_count() { return g_clamp_count.load(); }

Rho2Comparison rho2_near_diagonal_gue(int n, double x, double u, double epsilon0) {
    if (std::fabs(x) >= 2.0 - epsilon0)
        throw ValidationError("rho2_near_diagonal_gue: x outside bulk window");
    Rho2Comparison r;
    r.leading_term = std::pow(static_cast<double>(n), 4.0) *
                     std::pow(4.0 - x * x, 2.0) * u * u / (48.0 * PI * PI);
    if (u == 0.0) {
        r.exact = 0.0;
        return r;
    }
    r.exact = correlation_det(KernelHandle::gue(n), {x, x + u});
    return r;
}

}  // namespace extremegaps::kernels
