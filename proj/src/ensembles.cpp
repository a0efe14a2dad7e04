#include "extremegaps/ensembles.hpp"

#include "extremegaps/common.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <string>

namespace extremegaps::ensembles {

using cd = std::complex<double>;

namespace {

std::string tag(int n, const rng::RngStream& s) {
    return " (n=" + std::to_string(n) + ", seed=" + std::to_string(s.seed) +
           ", stream=" + std::to_string(s.stream_id) + ")";
}

void require_strictly_increasing(const Eigen::VectorXd& v, int n,
                                 const rng::RngStream& s, const char* what) {
    for (int i = 0; i + 1 < n; ++i)
        if (!(v(i) < v(i + 1)))
            throw NumericError(std::string(what) + ": tied or unordered values" + tag(n, s));
}

}  // namespace

linalg::HermitianMatrix sample_gue_dense(int n, rng::RngStream stream) {
    if (n < 1) throw ValidationError("sample_gue_dense: n must be >= 1");
    linalg::HermitianMatrix h;
    h.entries.resize(n, n);
    const double diag_sd = 1.0 / std::sqrt(static_cast<double>(n));
    const double off_sd = 1.0 / std::sqrt(2.0 * n);
    for (int i = 0; i < n; ++i) {
        h.entries(i, i) = cd(diag_sd * stream.normal(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            cd z(off_sd * stream.normal(), off_sd * stream.normal());
            h.entries(i, j) = z;
            h.entries(j, i) = std::conj(z);
        }
    }
    return h;
}

linalg::TridiagonalMatrix sample_gue_tridiagonal_model(int n, rng::RngStream stream) {
    if (n < 1) throw ValidationError("sample_gue_tridiagonal_model: n must be >= 1");
    linalg::TridiagonalMatrix t;
    t.diag.resize(n);
    t.off.resize(std::max(0, n - 1));
    const double scale = 1.0 / std::sqrt(2.0 * n);
    for (int i = 0; i < n; ++i) t.diag(i) = std::sqrt(2.0) * scale * stream.normal();
    for (int k = 1; k <= n - 1; ++k) t.off(k - 1) = scale * stream.chi(2.0 * (n - k));
    return t;
}

Spectrum sample_gue_spectrum(int n, rng::RngStream stream, GueMethod method) {
    if (n < 1) throw ValidationError("sample_gue_spectrum: n must be >= 1");
    Spectrum s;
    s.seed = stream.seed;
    s.trial_id = stream.stream_id;
    linalg::TridiagonalMatrix t;
    if (method == GueMethod::Dense) {
        t = linalg::householder_tridiagonalize(sample_gue_dense(n, stream));
    } else {
        t = sample_gue_tridiagonal_model(n, stream);
    }
    try {
        s.values = linalg::eig_sym_tridiagonal(t);
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + tag(n, stream));
    }
    require_strictly_increasing(s.values, n, stream, "sample_gue_spectrum");
    return s;
}

EigenangleSet sample_cue_eigenangles(int n, rng::RngStream stream) {
    if (n < 1) throw ValidationError("sample_cue_eigenangles: n must be >= 1");

    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = stream.complex_normal();

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    // the factorization is unique only up to column phases; fix them from R's
    // diagonal so Q is Haar distributed
    for (int j = 0; j < n; ++j) {
        cd r = qr.matrixQR()(j, j);
        double rabs = std::abs(r);
        q.col(j) *= (rabs > 0.0 ? r / rabs : cd(1.0, 0.0));
    }

    // unitarity probe: || Q^H (Q v) - v ||_inf on a few random unit vectors,
    // which bounds how far eigenvalue moduli can sit from 1
    {
        Eigen::VectorXcd v(n), qv(n);
        double worst = 0.0;
        for (int probe = 0; probe < 4; ++probe) {
            for (int i = 0; i < n; ++i) v(i) = stream.complex_normal();
            v.normalize();
            qv = q * v;
            double res = (q.adjoint() * qv - v).cwiseAbs().maxCoeff();
            worst = std::max(worst, res);
        }
        if (worst > 1e-8)
            throw NumericError("sample_cue_eigenangles: unitarity violation, residual " +
                               std::to_string(worst) + tag(n, stream));
    }

    // Cayley transform M = 2i (I + e^{-i phi} Q)^{-1} - i I is Hermitian with
    // eigenvalues tan((theta - phi)/2); the random rotation keeps the pole of
    // tan away from the spectrum with overwhelming probability
    Eigen::VectorXd m_eigs;
    double phi = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
        phi = TWO_PI * stream.uniform();
        Eigen::MatrixXcd w = std::polar(1.0, -phi) * q;
        w.diagonal().array() += 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(w);
        Eigen::MatrixXcd minv = lu.inverse();
        Eigen::MatrixXcd m = cd(0.0, 2.0) * minv;
        m.diagonal().array() -= cd(0.0, 1.0);
        double mnorm = m.cwiseAbs().maxCoeff();
        if (!std::isfinite(mnorm) || mnorm > 1e9) continue;  // retry rotation
        linalg::HermitianMatrix hm;
        hm.entries = 0.5 * (m + m.adjoint());
        double defect = (m - hm.entries).cwiseAbs().maxCoeff();
        if (defect > 1e-6 * std::max(1.0, mnorm))
            throw NumericError("sample_cue_eigenangles: Cayley matrix defect " +
                               std::to_string(defect) + tag(n, stream));
        m_eigs = linalg::eig_hermitian(hm);
        ok = true;
    }
    if (!ok)
        throw NumericError("sample_cue_eigenangles: Cayley transform ill-conditioned" +
                           tag(n, stream));

    EigenangleSet e;
    e.seed = stream.seed;
    e.trial_id = stream.stream_id;
    e.angles.resize(n);
    for (int i = 0; i < n; ++i) {
        double psi = 2.0 * std::atan(m_eigs(i));  // in (-pi, pi)
        double theta = psi + phi;
        theta = std::fmod(theta, TWO_PI);
        if (theta < 0.0) theta += TWO_PI;
        e.angles(i) = theta;
    }
    std::sort(e.angles.data(), e.angles.data() + n);
    require_strictly_increasing(e.angles, n, stream, "sample_cue_eigenangles");
    return e;
}

}  // namespace extremegaps::ensembles
