#include "extremegaps/toda.hpp"

#include "extremegaps/common.hpp"
#include "extremegaps/ensembles.hpp"
#include "extremegaps/parallel.hpp"
#include "extremegaps/rng.hpp"
#include "extremegaps/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace extremegaps::toda {

TodaRhs toda_rhs(const linalg::TridiagonalMatrix& t) {
    const int n = t.n();
    TodaRhs r;
    r.da.resize(n);
    r.db.resize(std::max(0, n - 1));
    for (int i = 0; i < n; ++i) {
        double lo = i > 0 ? t.off(i - 1) : 0.0;
        double hi = i < n - 1 ? t.off(i) : 0.0;
        r.da(i) = 2.0 * (hi * hi - lo * lo);
    }
    for (int i = 0; i + 1 < n; ++i) r.db(i) = t.off(i) * (t.diag(i + 1) - t.diag(i));
    return r;
}

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

// half-commutator vector field on the flattened state [a; b]
void rhs_half(const Eigen::VectorXd& y, int n, Eigen::VectorXd& out) {
    for (int i = 0; i < n; ++i) {
        double lo = i > 0 ? y(n + i - 1) : 0.0;
        double hi = i < n - 1 ? y(n + i) : 0.0;
        out(i) = hi * hi - lo * lo;
    }
    for (int i = 0; i + 1 < n; ++i)
        out(n + i) = 0.5 * y(n + i) * (y(i + 1) - y(i));
}

double max_abs_offdiag(const Eigen::VectorXd& y, int n) {
    double m = 0.0;
    for (int i = 0; i + 1 < n; ++i) m = std::max(m, std::fabs(y(n + i)));
    return m;
}

struct Stepper {
    int n;
    Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;

    explicit Stepper(int n_) : n(n_) {
        int m = 2 * n_ - 1;
        k1.resize(m); k2.resize(m); k3.resize(m); k4.resize(m);
        k5.resize(m); k6.resize(m); k7.resize(m);
        ytmp.resize(m); ynew.resize(m); yerr.resize(m);
    }

    // one DP step of size h from y with k1 already holding f(y);
    // fills ynew, yerr, and k7 = f(ynew)
    void step(const Eigen::VectorXd& y, double h) {
        ytmp = y + h * A21 * k1;
        rhs_half(ytmp, n, k2);
        ytmp = y + h * (A31 * k1 + A32 * k2);
        rhs_half(ytmp, n, k3);
        ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        rhs_half(ytmp, n, k4);
        ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        rhs_half(ytmp, n, k5);
        ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        rhs_half(ytmp, n, k6);
        ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        rhs_half(ynew, n, k7);
        yerr = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    }

    double error_norm(const Eigen::VectorXd& y, double abs_tol, double rel_tol) const {
        double s = 0.0;
        const int m = 2 * n - 1;
        for (int i = 0; i < m; ++i) {
            double sc = abs_tol + rel_tol * std::max(std::fabs(y(i)), std::fabs(ynew(i)));
            double e = yerr(i) / sc;
            s += e * e;
        }
        return std::sqrt(s / m);
    }
};

linalg::TridiagonalMatrix unflatten(const Eigen::VectorXd& y, int n) {
    linalg::TridiagonalMatrix t;
    t.diag = y.segment(0, n);
    t.off = y.segment(n, n - 1);
    return t;
}

}  // namespace

TodaResult integrate_toda(const linalg::TridiagonalMatrix& t0, double eps,
                          const IntegrationControls& controls) {
    if (eps <= 0.0) throw ValidationError("integrate_toda: eps must be positive");
    const int n = t0.n();
    TodaResult res;
    res.state.initial_spectrum = linalg::eig_sym_tridiagonal(t0);
    const double radius =
        std::max(std::fabs(res.state.initial_spectrum(0)),
                 std::fabs(res.state.initial_spectrum(n - 1)));
    const double drift_scale = std::max(radius, 1e-300);
    const double trace0 = t0.diag.sum();

    Eigen::VectorXd y(2 * n - 1);
    y.segment(0, n) = t0.diag;
    if (n > 1) y.segment(n, n - 1) = t0.off;

    auto check_drift = [&](const Eigen::VectorXd& state) {
        Eigen::VectorXd ev = linalg::eig_sym_tridiagonal(unflatten(state, n));
        double d = (ev - res.state.initial_spectrum).cwiseAbs().maxCoeff() / drift_scale;
        res.diagnostics.max_spectral_drift = std::max(res.diagnostics.max_spectral_drift, d);
        double td = std::fabs(state.segment(0, n).sum() - trace0);
        res.diagnostics.trace_drift = std::max(res.diagnostics.trace_drift, td);
        if (d > controls.drift_abort)
            throw NumericError("integrate_toda: spectral drift " + std::to_string(d) +
                               " exceeds abort threshold");
    };

    if (n == 1 || max_abs_offdiag(y, n) < eps) {
        res.t_conv = 0.0;
        res.state.t = unflatten(y, n);
        res.state.time = 0.0;
        res.diagnostics.final_max_offdiag = n > 1 ? max_abs_offdiag(y, n) : 0.0;
        return res;
    }

    Stepper st(n);
    rhs_half(y, n, st.k1);
    double t = 0.0;
    double h = std::min(0.1, 0.01 / std::max(st.k1.cwiseAbs().maxCoeff(), 1e-8));
    double err_prev = 1.0;
    long since_check = 0;
    Eigen::VectorXd y_prev(2 * n - 1), k1_prev(2 * n - 1);
    bool crossed = false;

    while (t < controls.max_time) {
        if (res.diagnostics.steps_accepted + res.diagnostics.steps_rejected >
            controls.max_steps)
            throw NumericError("integrate_toda: step budget exhausted");
        if (h < 1e-14 * std::max(1.0, t))
            throw NumericError("integrate_toda: step size underflow");

        st.step(y, h);
        double err = st.error_norm(y, controls.abs_tol, controls.rel_tol);
        if (err <= 1.0) {
            y_prev = y;
            k1_prev = st.k1;
            t += h;
            y.swap(st.ynew);
            st.k1.swap(st.k7);  // FSAL
            ++res.diagnostics.steps_accepted;
            ++since_check;
            if (controls.record_offdiag_history)
                res.diagnostics.offdiag_history.push_back(max_abs_offdiag(y, n));
            if (controls.check_every_step || since_check >= controls.drift_check_stride) {
                check_drift(y);
                since_check = 0;
            }
            if (max_abs_offdiag(y, n) < eps) {
                // first crossing lies inside this step; locate it by bisection on
                // single fixed-size sub-steps from the pre-step state
                double lo = 0.0, hi = h;
                for (int it = 0; it < 60 && (hi - lo) > 1e-12 * h; ++it) {
                    double mid = 0.5 * (lo + hi);
                    st.k1 = k1_prev;
                    st.step(y_prev, mid);
                    if (max_abs_offdiag(st.ynew, n) < eps)
                        hi = mid;
                    else
                        lo = mid;
                }
                st.k1 = k1_prev;
                st.step(y_prev, hi);
                y = st.ynew;
                t = t - h + hi;
                crossed = true;
                break;
            }
            double fac = 0.9 * std::pow(err + 1e-300, -0.7 / 5.0) *
                         std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
        } else {
            ++res.diagnostics.steps_rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    if (!crossed)
        throw NumericError("integrate_toda: no convergence before max_time");

    res.t_conv = t;
    res.state.t = unflatten(y, n);
    res.state.time = t;
    res.diagnostics.final_max_offdiag = max_abs_offdiag(y, n);
    check_drift(y);
    return res;
}

double predicted_convergence_time(const Eigen::VectorXd& spectrum, double eps) {
    if (spectrum.size() < 2)
        throw ValidationError("predicted_convergence_time: need at least two eigenvalues");
    if (eps <= 0.0) throw ValidationError("predicted_convergence_time: eps must be positive");
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < spectrum.size(); ++i)
        min_gap = std::min(min_gap, spectrum(i + 1) - spectrum(i));
    if (min_gap <= 0.0)
        throw ValidationError("predicted_convergence_time: zero minimal gap");
    return 2.0 * std::log(1.0 / eps) / min_gap;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ExponentFit fit_exponent(const std::vector<int>& ns,
                         const std::vector<std::vector<double>>& samples,
                         std::uint64_t seed) {
    std::vector<double> logn(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) logn[i] = std::log(static_cast<double>(ns[i]));
    auto slope_of = [&](const std::vector<double>& medians) {
        std::vector<double> ly(medians.size());
        for (std::size_t i = 0; i < medians.size(); ++i) ly[i] = std::log(medians[i]);
        return sf::least_squares(logn, ly).slope;
    };
    std::vector<double> medians(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) medians[i] = median(samples[i]);

    ExponentFit fit;
    fit.exponent = slope_of(medians);

    const int boots = 400;
    rng::RngStream bs(seed, 0xB00Bu);
    std::vector<double> slopes(boots);
    std::vector<double> resampled;
    for (int b = 0; b < boots; ++b) {
        std::vector<double> meds(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const auto& pool = samples[i];
            resampled.resize(pool.size());
            for (std::size_t j = 0; j < pool.size(); ++j)
                resampled[j] = pool[static_cast<std::size_t>(bs.uniform() * pool.size())];
            meds[i] = median(resampled);
        }
        slopes[b] = slope_of(meds);
    }
    std::sort(slopes.begin(), slopes.end());
    fit.ci_lo = slopes[static_cast<int>(0.025 * boots)];
    fit.ci_hi = slopes[static_cast<int>(0.975 * boots) - 1];
    return fit;
}

}  // namespace

ScalingResult scaling_experiment(const std::vector<int>& n_list, int trials, double eps,
                                 std::uint64_t seed, bool rescale_sqrt_n, int workers) {
    if (n_list.size() < 4)
        throw ValidationError("scaling_experiment: need at least 4 matrix sizes");
    if (trials < 100) throw ValidationError("scaling_experiment: need at least 100 trials");

    ScalingResult res;
    res.n_list = n_list;
    const double log_inv_eps = std::log(1.0 / eps);

    std::vector<std::vector<double>> tconv(n_list.size()), min_gap(n_list.size());
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const int n = n_list[ni];
        tconv[ni].resize(trials);
        min_gap[ni].resize(trials);
        std::vector<double> drift(trials);
        parallel_for(trials, workers, [&, ni, n](std::size_t trial) {
            rng::RngStream stream(seed, (static_cast<std::uint64_t>(ni) << 32) | trial);
            auto t0 = ensembles::sample_gue_tridiagonal_model(n, stream);
            if (rescale_sqrt_n) {
                double s = std::sqrt(static_cast<double>(n));
                t0.diag *= s;
                t0.off *= s;
            }
            auto out = integrate_toda(t0, eps);
            double g = std::numeric_limits<double>::infinity();
            const auto& spec = out.state.initial_spectrum;
            for (int i = 0; i + 1 < spec.size(); ++i)
                g = std::min(g, spec(i + 1) - spec(i));
            tconv[ni][trial] = out.t_conv / log_inv_eps;
            min_gap[ni][trial] = g;
            drift[trial] = out.diagnostics.max_spectral_drift;
        });
        res.median_tconv.push_back(median(tconv[ni]));
        res.median_min_gap.push_back(median(min_gap[ni]));
        for (double d : drift) res.max_spectral_drift = std::max(res.max_spectral_drift, d);
    }
    res.tconv_fit = fit_exponent(n_list, tconv, seed ^ 0x7C0DAULL);
    res.min_gap_fit = fit_exponent(n_list, min_gap, seed ^ 0x9A9AULL);
    return res;
}

}  // namespace extremegaps::toda
