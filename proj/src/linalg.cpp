#include "extremegaps/linalg.hpp"

#include "extremegaps/common.hpp"

#include <cmath>
#include <complex>

namespace extremegaps::linalg {

using cd = std::complex<double>;

double HermitianMatrix::hermitian_defect() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double TridiagonalMatrix::norm_estimate() const {
    double m = diag.cwiseAbs().maxCoeff();
    if (off.size() > 0) m += 2.0 * off.cwiseAbs().maxCoeff();
    return m;
}

TridiagonalMatrix householder_tridiagonalize(const HermitianMatrix& h) {
    const int n = h.n();
    if (n < 1) throw ValidationError("householder_tridiagonalize: empty matrix");
    TridiagonalMatrix t;
    t.diag.resize(n);
    t.off.resize(std::max(0, n - 1));
    if (n == 1) {
        t.diag(0) = h.entries(0, 0).real();
        return t;
    }

    Eigen::MatrixXcd a = h.entries;
    Eigen::VectorXcd v(n), w(n);
    for (int k = 0; k < n - 2; ++k) {
        const int m = n - k - 1;
        auto x = a.col(k).segment(k + 1, m);
        double xnorm = x.norm();
        if (xnorm == 0.0) {
            t.off(k) = 0.0;
            continue;
        }
        cd alpha = x(0);
        double aabs = std::abs(alpha);
        cd phase = aabs > 0.0 ? alpha / aabs : cd(1.0, 0.0);
        cd beta = -phase * xnorm;

        auto vk = v.segment(0, m);
        vk = x;
        vk(0) -= beta;
        double vnorm = vk.norm();
        if (vnorm == 0.0) {
            t.off(k) = std::abs(beta);
            continue;
        }
        vk /= vnorm;

        auto block = a.block(k + 1, k + 1, m, m);
        auto wk = w.segment(0, m);
        wk = block.template selfadjointView<Eigen::Lower>() * vk;
        double mu = vk.dot(wk).real();  // v^H A v is real
        wk = 2.0 * (wk - mu * vk);
        block.template selfadjointView<Eigen::Lower>().rankUpdate(vk, wk, -1.0);

        a(k + 1, k) = beta;
        // zeroed entries are never read again; the lower triangle below the
        // subdiagonal is left stale on purpose
    }

    for (int i = 0; i < n; ++i) t.diag(i) = a(i, i).real();
    for (int i = 0; i + 1 < n; ++i) t.off(i) = std::abs(a(i + 1, i));
    return t;
}

Eigen::VectorXd eig_sym_tridiagonal(const TridiagonalMatrix& t, int max_sweeps) {
    const int n = t.n();
    if (n < 1) throw ValidationError("eig_sym_tridiagonal: empty matrix");
    Eigen::VectorXd d = t.diag;
    Eigen::VectorXd e(n);
    for (int i = 0; i + 1 < n; ++i) e(i) = t.off(i);
    e(n - 1) = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d(m)) + std::fabs(d(m + 1));
                if (std::fabs(e(m)) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == max_sweeps)
                    throw NumericError("eig_sym_tridiagonal: sweep cap exceeded at n=" +
                                       std::to_string(n));
                double g = (d(l + 1) - d(l)) / (2.0 * e(l));
                double r = std::hypot(g, 1.0);
                g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow_restart = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e(i);
                    double b = c * e(i);
                    r = std::hypot(f, g);
                    e(i + 1) = r;
                    if (r == 0.0) {
                        d(i + 1) -= p;
                        e(m) = 0.0;
                        underflow_restart = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d(i + 1) - p;
                    r = (d(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    d(i + 1) = g + p;
                    g = c * r - b;
                }
                if (underflow_restart) continue;
                d(l) -= p;
                e(l) = g;
                e(m) = 0.0;
            }
        } while (m != l);
    }

    std::sort(d.data(), d.data() + n);
    return d;
}

Eigen::VectorXd eig_hermitian(const HermitianMatrix& h) {
    return eig_sym_tridiagonal(householder_tridiagonalize(h));
}

TridiagonalMatrix tridiagonal_from_spectrum(const Eigen::VectorXd& values,
                                            const Eigen::VectorXd& weights) {
    const int n = static_cast<int>(values.size());
    if (n < 1) throw ValidationError("tridiagonal_from_spectrum: empty spectrum");
    Eigen::VectorXd w;
    if (weights.size() == 0)
        w = Eigen::VectorXd::Constant(n, 1.0 / n);
    else if (weights.size() == n)
        w = weights / weights.sum();
    else
        throw ValidationError("tridiagonal_from_spectrum: weights size mismatch");

    // Lanczos applied to diag(values) with starting vector sqrt(w)
    Eigen::MatrixXd q(n, n);
    Eigen::VectorXd q0 = w.cwiseSqrt();
    q0.normalize();
    q.col(0) = q0;

    TridiagonalMatrix t;
    t.diag.resize(n);
    t.off.resize(std::max(0, n - 1));

    Eigen::VectorXd r(n);
    for (int k = 0; k < n; ++k) {
        r = values.cwiseProduct(q.col(k));
        t.diag(k) = q.col(k).dot(r);
        r -= t.diag(k) * q.col(k);
        if (k > 0) r -= t.off(k - 1) * q.col(k - 1);
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) r -= q.col(j).dot(r) * q.col(j);
        if (k + 1 < n) {
            double beta = r.norm();
            t.off(k) = beta;
            if (beta < 1e-14) {
                // degenerate start vector; remaining subspace is arbitrary
                for (int i = k + 1; i < n; ++i) {
                    t.diag(i) = values(i);
                    if (i < n - 1) t.off(i) = 0.0;
                }
                break;
            }
            q.col(k + 1) = r / beta;
        }
    }
    return t;
}

}  // namespace extremegaps::linalg
