#include "extremegaps/experiment.hpp"

#include "extremegaps/common.hpp"
#include "extremegaps/ensembles.hpp"
#include "extremegaps/extreme_stats.hpp"
#include "extremegaps/gap_prob.hpp"
#include "extremegaps/parallel.hpp"
#include "extremegaps/special_functions.hpp"
#include "extremegaps/toda.hpp"
#include "extremegaps/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

namespace extremegaps::cli {

namespace {

constexpr const char* ARTIFACT_VERSION = "0.1.0";
constexpr const char* RNG_ID = "philox4x64-10";

json make_table(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
    json t;
    t["columns"] = columns;
    t["rows"] = rows;
    return t;
}

json make_check(const std::string& name, double value, const std::string& relation,
                double bound, bool pass) {
    json c;
    c["name"] = name;
    c["value"] = value;
    c["relation"] = relation;
    c["bound"] = bound;
    c["pass"] = pass;
    return c;
}

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe m;
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= xs.size();
    if (xs.size() < 2) return m;
    double v = 0.0;
    for (double x : xs) v += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(v / (xs.size() - 1) / xs.size());
    return m;
}

json report_skeleton(const ExperimentConfig& cfg) {
    json doc;
    doc["artifact"]["name"] = "extremegaps";
    doc["artifact"]["version"] = ARTIFACT_VERSION;
    doc["artifact"]["rng"] = RNG_ID;
    doc["config"] = cfg.echo();
    doc["results"] = json::object();
    doc["checks"] = json::array();
    doc["tables"] = json::object();
    return doc;
}

std::vector<BoxConfig> default_boxes(const std::string& experiment,
                                     const std::array<double, 2>& interval) {
    if (experiment == "small_gaps_cue")
        return {{0.0, 5.0, 0.0, PI}, {5.0, 6.5, PI, TWO_PI}};
    return {{0.0, 3.0, interval[0], interval[1]},
            {3.0, 4.2, interval[0], interval[1]}};
}

void append_poisson_checks(json& doc, const std::string& prefix,
                           const stats::PoissonBoxReport& rep) {
    json& r = doc["results"][prefix];
    r["mu"] = rep.mu;
    r["mean"] = rep.mean;
    r["mean_se"] = rep.mean_se;
    r["factorial_moments"] = rep.factorial_moment;
    r["factorial_se"] = rep.factorial_se;
    r["chi_square"] = rep.chi_square;
    r["chi_square_dof"] = rep.chi_square_dof;
    r["chi_square_p"] = rep.chi_square_p;
    doc["checks"].push_back(make_check(prefix + "_mean_vs_mu",
                                       std::fabs(rep.mean - rep.mu), "<=",
                                       3.0 * rep.mean_se,
                                       std::fabs(rep.mean - rep.mu) <= 3.0 * rep.mean_se));
    double mu_k = rep.mu;
    for (int k = 2; k <= 3; ++k) {
        mu_k *= rep.mu;
        double dev = std::fabs(rep.factorial_moment[k - 1] - mu_k);
        double lim = 3.0 * rep.factorial_se[k - 1];
        doc["checks"].push_back(make_check(
            prefix + "_factorial_moment_k" + std::to_string(k), dev, "<=", lim, dev <= lim));
    }
    doc["checks"].push_back(make_check(prefix + "_chi_square_p", rep.chi_square_p, ">=",
                                       0.001, rep.chi_square_p >= 0.001));
}

// ---------------------------------------------------------------------------

void run_small_gaps_cue(const ExperimentConfig& cfg, json& doc) {
    const int n = cfg.n;
    const long trials = cfg.trials;
    auto boxes = cfg.boxes.empty() ? default_boxes(cfg.experiment, cfg.interval) : cfg.boxes;
    double trim_u = 9.0;
    for (const auto& b : boxes) trim_u = std::max(trim_u, b.u_hi + 1.0);

    std::vector<std::array<double, 3>> smallest(trials);
    std::vector<stats::MarkedPointPattern> patterns(trials);
    parallel_for(trials, cfg.effective_workers(), [&](std::size_t t) {
        rng::RngStream stream(cfg.seed, t);
        auto e = ensembles::sample_cue_eigenangles(n, stream);
        auto gaps = stats::circular_gaps(e);
        std::vector<double> v(gaps.size());
        for (std::size_t i = 0; i < gaps.size(); ++i) v[i] = gaps[i].value;
        std::partial_sort(v.begin(), v.begin() + 3, v.end());
        smallest[t] = {v[0], v[1], v[2]};
        auto p = stats::marked_pattern_cue(e);
        stats::MarkedPointPattern trimmed;
        for (const auto& mp : p)
            if (mp.first <= trim_u) trimmed.push_back(mp);
        patterns[t] = std::move(trimmed);
    });

    const double ks_bounds[3] = {0.03, 0.04, 0.04};
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> samples(trials);
        for (long t = 0; t < trials; ++t)
            samples[t] = stats::normalize_smallest_cue(smallest[t][k - 1], n);
        double ks = stats::ks_statistic(
            samples, [k](double x) { return stats::kth_smallest_limit_cdf(k, x); });
        doc["results"]["ks_k" + std::to_string(k)] = ks;
        doc["checks"].push_back(make_check("ks_smallest_k" + std::to_string(k), ks, "<",
                                           ks_bounds[k - 1], ks < ks_bounds[k - 1]));
        if (k == 1) {
            std::sort(samples.begin(), samples.end());
            std::vector<std::vector<double>> rows;
            for (double x = 0.0; x <= 2.5 + 1e-12; x += 0.05) {
                double emp = std::lower_bound(samples.begin(), samples.end(), x) -
                             samples.begin();
                rows.push_back({x, emp / static_cast<double>(trials),
                                stats::kth_smallest_limit_cdf(1, x)});
            }
            doc["tables"]["smallest_gap_cdf_k1"] =
                make_table({"x", "empirical", "reference"}, rows);
        }
    }

    for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
        const auto& b = boxes[bi];
        stats::BoxSpec spec{{b.u_lo, b.u_hi}, b.loc_lo, b.loc_hi};
        double mu = stats::cue_box_intensity({b.u_lo, b.u_hi}, b.loc_lo, b.loc_hi);
        auto rep = stats::poisson_box_test(patterns, spec, mu);
        append_poisson_checks(doc, "poisson_box" + std::to_string(bi + 1), rep);
    }
    if (boxes.size() >= 2) {
        stats::BoxSpec s1{{boxes[0].u_lo, boxes[0].u_hi}, boxes[0].loc_lo, boxes[0].loc_hi};
        stats::BoxSpec s2{{boxes[1].u_lo, boxes[1].u_hi}, boxes[1].loc_lo, boxes[1].loc_hi};
        auto cross = stats::cross_box_covariance(patterns, s1, s2);
        doc["results"]["cross_box_covariance"] = cross.covariance;
        doc["results"]["cross_box_covariance_se"] = cross.se;
        doc["checks"].push_back(make_check("cross_box_covariance",
                                           std::fabs(cross.covariance), "<=", 3.0 * cross.se,
                                           std::fabs(cross.covariance) <= 3.0 * cross.se));
    }
}

void run_small_gaps_gue(const ExperimentConfig& cfg, json& doc) {
    const int n = cfg.n;
    const long trials = cfg.trials;
    const double a = cfg.interval[0], b = cfg.interval[1];
    auto boxes = cfg.boxes.empty() ? default_boxes(cfg.experiment, cfg.interval) : cfg.boxes;
    double trim_u = 9.0;
    for (const auto& bx : boxes) trim_u = std::max(trim_u, bx.u_hi + 1.0);

    std::vector<std::array<double, 3>> smallest(trials);
    std::vector<double> locations(trials);
    std::vector<stats::MarkedPointPattern> patterns(trials);
    parallel_for(trials, cfg.effective_workers(), [&](std::size_t t) {
        rng::RngStream stream(cfg.seed, t);
        auto s = ensembles::sample_gue_spectrum(n, stream, ensembles::GueMethod::Tridiagonal);
        auto gaps = stats::bulk_gaps(s, a, b);
        std::vector<std::pair<double, double>> vl(gaps.size());
        for (std::size_t i = 0; i < gaps.size(); ++i)
            vl[i] = {gaps[i].value, gaps[i].location};
        std::partial_sort(vl.begin(), vl.begin() + std::min<std::size_t>(3, vl.size()),
                          vl.end());
        for (int k = 0; k < 3; ++k)
            smallest[t][k] = k < static_cast<int>(vl.size()) ? vl[k].first : -1.0;
        locations[t] = vl.empty() ? std::numeric_limits<double>::quiet_NaN() : vl[0].second;
        auto p = stats::marked_pattern_gue(s, cfg.epsilon0);
        stats::MarkedPointPattern trimmed;
        for (const auto& mp : p)
            if (mp.first <= trim_u) trimmed.push_back(mp);
        patterns[t] = std::move(trimmed);
    });

    const double ks_bounds[3] = {0.04, 0.04, 0.04};
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> samples;
        samples.reserve(trials);
        for (long t = 0; t < trials; ++t)
            if (smallest[t][k - 1] >= 0.0)
                samples.push_back(stats::normalize_smallest_gue(smallest[t][k - 1], n, a, b));
        double ks = stats::ks_statistic(
            samples, [k](double x) { return stats::kth_smallest_limit_cdf(k, x); });
        doc["results"]["ks_k" + std::to_string(k)] = ks;
        doc["checks"].push_back(make_check("ks_smallest_k" + std::to_string(k), ks, "<",
                                           ks_bounds[k - 1], ks < ks_bounds[k - 1]));
        if (k == 1) {
            std::sort(samples.begin(), samples.end());
            std::vector<std::vector<double>> rows;
            for (double x = 0.0; x <= 2.5 + 1e-12; x += 0.05) {
                double emp = std::lower_bound(samples.begin(), samples.end(), x) -
                             samples.begin();
                rows.push_back({x, emp / static_cast<double>(samples.size()),
                                stats::kth_smallest_limit_cdf(1, x)});
            }
            doc["tables"]["smallest_gap_cdf_k1"] =
                make_table({"x", "empirical", "reference"}, rows);
        }
    }

    std::vector<double> locs;
    locs.reserve(trials);
    for (double l : locations)
        if (std::isfinite(l)) locs.push_back(l);
    auto locrep = stats::location_density_test(locs, a, b);
    doc["results"]["location_chi_square"] = locrep.statistic;
    doc["results"]["location_chi_square_p"] = locrep.p_value;
    doc["results"]["location_mean"] = locrep.mean;
    doc["results"]["location_mean_se"] = locrep.mean_se;
    doc["checks"].push_back(make_check("location_density_p", locrep.p_value, ">", 0.01,
                                       locrep.p_value > 0.01));
    {
        std::vector<std::vector<double>> rows;
        const int bins = 16;
        std::vector<double> hist(bins, 0.0);
        for (double l : locs) {
            int kk = std::min(bins - 1, static_cast<int>((l - a) / (b - a) * bins));
            hist[kk] += 1.0;
        }
        double wtot = stats::gue_interval_weight(a, b);
        for (int kk = 0; kk < bins; ++kk) {
            double lo = a + (b - a) * kk / bins, hi = a + (b - a) * (kk + 1) / bins;
            rows.push_back({0.5 * (lo + hi), hist[kk],
                            locs.size() * stats::gue_interval_weight(lo, hi) / wtot});
        }
        doc["tables"]["min_gap_location_hist"] =
            make_table({"x", "count", "reference"}, rows);
    }

    for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
        const auto& bx = boxes[bi];
        stats::BoxSpec spec{{bx.u_lo, bx.u_hi}, bx.loc_lo, bx.loc_hi};
        double mu = stats::gue_box_intensity({bx.u_lo, bx.u_hi}, bx.loc_lo, bx.loc_hi);
        auto rep = stats::poisson_box_test(patterns, spec, mu);
        append_poisson_checks(doc, "poisson_box" + std::to_string(bi + 1), rep);
    }
}

void run_largest_gaps(const ExperimentConfig& cfg, json& doc) {
    auto n_list = cfg.n_list.empty() ? std::vector<int>{256, 512, 1024, 2048} : cfg.n_list;
    const bool gue = cfg.ensemble == "gue";
    const long trials = cfg.trials;

    std::vector<std::vector<double>> rows;
    std::vector<double> mean_absdev;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const int n = n_list[ni];
        std::vector<double> statv(trials);
        parallel_for(trials, cfg.effective_workers(), [&, n, ni](std::size_t t) {
            rng::RngStream stream(cfg.seed, (static_cast<std::uint64_t>(ni) << 32) | t);
            std::vector<stats::GapSample> gaps;
            std::optional<std::pair<double, double>> iv;
            if (gue) {
                auto s = ensembles::sample_gue_spectrum(n, stream,
                                                        ensembles::GueMethod::Tridiagonal);
                gaps = stats::bulk_gaps(s, cfg.interval[0], cfg.interval[1]);
                iv = std::make_pair(cfg.interval[0], cfg.interval[1]);
            } else {
                auto e = ensembles::sample_cue_eigenangles(n, stream);
                gaps = stats::circular_gaps(e);
            }
            statv[t] = stats::largest_gap_statistic(gaps, cfg.ell, n, iv);
        });
        auto ms = mean_se(statv);
        std::vector<double> absdev(trials);
        for (long t = 0; t < trials; ++t) absdev[t] = std::fabs(statv[t] - 1.0);
        auto ma = mean_se(absdev);
        mean_absdev.push_back(ma.mean);
        rows.push_back({static_cast<double>(n), ms.mean, ms.se, ma.mean, ma.se});
        bool in_bracket = ms.mean >= 0.7 && ms.mean <= 1.1;
        doc["checks"].push_back(make_check(
            "largest_gap_mean_bracket_n" + std::to_string(n), ms.mean, "in[0.7,1.1]", 0.0,
            in_bracket));
    }
    doc["tables"]["largest_gap_stats"] = make_table(
        {"n", "mean_stat", "se", "mean_absdev", "absdev_se"}, rows);
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < mean_absdev.size(); ++i)
        if (!(mean_absdev[i + 1] < mean_absdev[i])) decreasing = false;
    doc["checks"].push_back(make_check("mean_absdev_strictly_decreasing",
                                       decreasing ? 1.0 : 0.0, "==", 1.0, decreasing));
}

void run_gap_prob_tables(const ExperimentConfig& cfg, json& doc) {
    const int n = cfg.n;
    std::vector<double> alphas = cfg.alpha_grid;
    if (alphas.empty()) {
        for (double v : {1.0, 2.5, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0}) {
            double a = v / n;
            if (a < PI - 0.05) alphas.push_back(a);
        }
    }

    std::vector<double> fit_alphas;
    std::vector<std::vector<double>> rows(alphas.size());
    parallel_for(alphas.size(), cfg.effective_workers(), [&](std::size_t i) {
        double a = alphas[i];
        auto ld = gap_prob::log_gap_probability_cue(n, a);
        double est2 = n >= 2 ? gap_prob::dlog_gap_asymptotic(n, a) : 0.0;
        double dexact = gap_prob::dlog_gap_exact(n, a);
        double rel = est2 != 0.0 ? std::fabs(dexact - est2) / std::fabs(est2) : 0.0;
        auto count = gap_prob::expected_large_gap_count(n, 2.0 * a);
        rows[i] = {a, ld.log_value, static_cast<double>(ld.digits), dexact, est2, rel,
                   count.value, count.underflow ? 1.0 : 0.0};
    });
    for (double a : alphas)
        if (n * a >= 10.0 - 1e-9 && n * a <= 60.0 + 1e-9) fit_alphas.push_back(a);

    double max_rel = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (n * alphas[i] >= 10.0 - 1e-9 && n * alphas[i] <= 60.0 + 1e-9)
            max_rel = std::max(max_rel, rows[i][5]);
    doc["tables"]["gap_prob"] = make_table(
        {"alpha", "log_gap_prob", "digits", "dlog_exact", "dlog_asymptotic",
         "dlog_rel_err", "expected_gap_count", "count_underflow"},
        rows);
    if (fit_alphas.size() >= 2) {
        auto fit = gap_prob::fit_c0(n, fit_alphas);
        doc["results"]["c0_fit"] = fit.c0;
        doc["results"]["c0_fit_se"] = fit.stderr_;
        doc["results"]["c0_fit_points"] = fit.points;
    }
    if (n >= 100) {
        doc["results"]["dlog_max_rel_err_window"] = max_rel;
        doc["checks"].push_back(make_check("dlog_asymptotic_rel_err", max_rel, "<", 0.02,
                                           max_rel < 0.02));
    }
}

void run_toda_scaling(const ExperimentConfig& cfg, json& doc) {
    auto n_list = cfg.n_list.empty() ? std::vector<int>{64, 128, 256, 512} : cfg.n_list;
    for (bool rescale : {false, true}) {
        auto res = toda::scaling_experiment(n_list, static_cast<int>(cfg.trials), cfg.eps,
                                            cfg.seed, rescale, cfg.effective_workers());
        std::string tag = rescale ? "sqrt_n_scaled" : "unit_scaled";
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < n_list.size(); ++i)
            rows.push_back({static_cast<double>(n_list[i]), res.median_tconv[i],
                            res.median_min_gap[i]});
        doc["tables"]["toda_" + tag] =
            make_table({"n", "median_tconv_over_log_inv_eps", "median_min_gap"}, rows);
        json& r = doc["results"]["toda_" + tag];
        r["min_gap_exponent"] = res.min_gap_fit.exponent;
        r["min_gap_ci"] = {res.min_gap_fit.ci_lo, res.min_gap_fit.ci_hi};
        r["tconv_exponent"] = res.tconv_fit.exponent;
        r["tconv_ci"] = {res.tconv_fit.ci_lo, res.tconv_fit.ci_hi};
        double target = rescale ? -5.0 / 6.0 : -4.0 / 3.0;
        double dev = std::fabs(res.min_gap_fit.exponent - target);
        doc["checks"].push_back(make_check("min_gap_exponent_" + tag, dev, "<=", 0.15,
                                           dev <= 0.15));
    }
}

void run_zeta_report(const ExperimentConfig& cfg, json& doc) {
    auto z = zeta::load_zeros(cfg.zeros_path, cfg.zeros_offset, cfg.zeros_count);
    auto gaps = zeta::normalized_gaps(z);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    doc["results"]["zeros_loaded"] = z.count();
    doc["results"]["mean_normalized_gap"] = mean;
    doc["checks"].push_back(make_check("mean_normalized_gap", mean, "in[0.95,1.05]", 0.0,
                                       mean >= 0.95 && mean <= 1.05));

    std::size_t ngaps = gaps.size();
    auto rep = zeta::max_gap_report(z, ngaps);
    doc["results"]["max_gap_observed"] = rep.observed;
    doc["results"]["max_gap_predicted"] = rep.predicted;
    doc["results"]["max_gap_relative_difference"] = rep.relative_difference;
    if (ngaps >= 1000000) {
        doc["checks"].push_back(make_check("max_gap_observed_1e6",
                                           std::fabs(rep.observed - 3.303), "<=", 1e-3,
                                           std::fabs(rep.observed - 3.303) <= 1e-3));
        doc["checks"].push_back(make_check("max_gap_predicted_1e6",
                                           std::fabs(rep.predicted - 3.346), "<=", 1e-3,
                                           std::fabs(rep.predicted - 3.346) <= 1e-3));
    }

    auto hist = zeta::small_gap_histogram(z, ngaps, cfg.small_gap_count, cfg.bin_width);
    std::vector<std::vector<double>> rows;
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        rows.push_back({hist.bin_centers[k], hist.counts[k], hist.reference[k]});
        if (hist.counts[k] >= 3.0) {
            lx.push_back(std::log(hist.bin_centers[k]));
            ly.push_back(std::log(hist.counts[k]));
        }
    }
    doc["tables"]["zeta_small_gap_hist"] = make_table({"u", "count", "reference"}, rows);
    double slope = sf::least_squares(lx, ly).slope;
    doc["results"]["small_gap_loglog_slope"] = slope;
    doc["checks"].push_back(make_check("small_gap_loglog_slope", slope, "in[1.7,2.3]", 0.0,
                                       slope >= 1.7 && slope <= 2.3));
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    static const std::set<std::string> known{
        "experiment", "n", "n_list", "trials", "seed", "interval", "epsilon0",
        "ell", "eps", "ensemble", "alpha_grid", "boxes", "zeros_path",
        "zeros_offset", "zeros_count", "small_gap_count", "bin_width", "workers", "out"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ValidationError("config: unknown key '" + it.key() + "'");
    cfg.experiment = j.value("experiment", std::string{});
    cfg.n = j.value("n", cfg.n);
    if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("interval")) {
        auto v = j["interval"].get<std::vector<double>>();
        if (v.size() != 2) throw ValidationError("config: interval needs two endpoints");
        cfg.interval = {v[0], v[1]};
    }
    cfg.epsilon0 = j.value("epsilon0", cfg.epsilon0);
    cfg.ell = j.value("ell", cfg.ell);
    cfg.eps = j.value("eps", cfg.eps);
    cfg.ensemble = j.value("ensemble", cfg.ensemble);
    if (j.contains("alpha_grid")) cfg.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
    if (j.contains("boxes")) {
        for (const auto& b : j["boxes"]) {
            auto u = b.at("u").get<std::vector<double>>();
            auto loc = b.at("loc").get<std::vector<double>>();
            if (u.size() != 2 || loc.size() != 2)
                throw ValidationError("config: box needs u=[lo,hi], loc=[lo,hi]");
            cfg.boxes.push_back({u[0], u[1], loc[0], loc[1]});
        }
    }
    cfg.zeros_path = j.value("zeros_path", cfg.zeros_path);
    cfg.zeros_offset = j.value("zeros_offset", cfg.zeros_offset);
    cfg.zeros_count = j.value("zeros_count", cfg.zeros_count);
    cfg.small_gap_count = j.value("small_gap_count", cfg.small_gap_count);
    cfg.bin_width = j.value("bin_width", cfg.bin_width);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.out_dir = j.value("out", cfg.out_dir);
    return cfg;
}

json ExperimentConfig::echo() const {
    json j;
    j["experiment"] = experiment;
    j["n"] = n;
    if (!n_list.empty()) j["n_list"] = n_list;
    j["trials"] = trials;
    j["seed"] = seed;
    j["interval"] = interval;
    j["epsilon0"] = epsilon0;
    j["ell"] = ell;
    j["eps"] = eps;
    j["ensemble"] = ensemble;
    if (!alpha_grid.empty()) j["alpha_grid"] = alpha_grid;
    if (!boxes.empty()) {
        json bs = json::array();
        for (const auto& b : boxes) {
            json jb;
            jb["u"] = {b.u_lo, b.u_hi};
            jb["loc"] = {b.loc_lo, b.loc_hi};
            bs.push_back(jb);
        }
        j["boxes"] = bs;
    }
    if (experiment == "zeta_report") {
        j["zeros_path"] = zeros_path;
        j["zeros_offset"] = zeros_offset;
        j["zeros_count"] = zeros_count;
        j["small_gap_count"] = small_gap_count;
        j["bin_width"] = bin_width;
    }
    return j;
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> kinds{"small_gaps_cue", "small_gaps_gue",
                                             "largest_gaps", "gap_prob_tables",
                                             "toda_scaling", "zeta_report"};
    if (!kinds.count(experiment))
        throw ValidationError("config: unknown experiment '" + experiment + "'");
    if (experiment == "gap_prob_tables") {
        if (n < 1) throw ValidationError("config: n must be >= 1");
    } else if (n < 2) {
        throw ValidationError("config: n must be >= 2");
    }
    if (trials < 1) throw ValidationError("config: trials must be >= 1");
    for (int m : n_list)
        if (m < 2) throw ValidationError("config: n_list entries must be >= 2");
    if (!(interval[0] < interval[1]) || interval[0] <= -2.0 || interval[1] >= 2.0)
        throw ValidationError("config: interval must satisfy -2 < a < b < 2");
    if (epsilon0 <= 0.0 || epsilon0 >= 2.0)
        throw ValidationError("config: epsilon0 out of range");
    if (ell < 1) throw ValidationError("config: ell must be >= 1");
    if (eps <= 0.0) throw ValidationError("config: eps must be positive");
    if (ensemble != "cue" && ensemble != "gue")
        throw ValidationError("config: ensemble must be cue or gue");
    for (double a : alpha_grid)
        if (a < 0.0 || a >= PI) throw ValidationError("config: alpha outside [0, pi)");
    for (const auto& b : boxes)
        if (!(b.u_lo < b.u_hi) || b.u_lo < 0.0 || !(b.loc_lo < b.loc_hi))
            throw ValidationError("config: malformed box");
    if (bin_width <= 0.0) throw ValidationError("config: bin_width must be positive");
    if (workers < 0) throw ValidationError("config: workers must be >= 0");
}

int ExperimentConfig::effective_workers() const {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string Report::to_string() const { return doc.dump(2) + "\n"; }

void Report::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("report: cannot write " + path);
    out << to_string();
}

Report run(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.doc = report_skeleton(cfg);
    if (cfg.experiment == "small_gaps_cue")
        run_small_gaps_cue(cfg, rep.doc);
    else if (cfg.experiment == "small_gaps_gue")
        run_small_gaps_gue(cfg, rep.doc);
    else if (cfg.experiment == "largest_gaps")
        run_largest_gaps(cfg, rep.doc);
    else if (cfg.experiment == "gap_prob_tables")
        run_gap_prob_tables(cfg, rep.doc);
    else if (cfg.experiment == "toda_scaling")
        run_toda_scaling(cfg, rep.doc);
    else if (cfg.experiment == "zeta_report")
        run_zeta_report(cfg, rep.doc);
    bool all = true;
    for (const auto& c : rep.doc["checks"]) all = all && c["pass"].get<bool>();
    rep.doc["all_checks_pass"] = all;
    return rep;
}

std::vector<std::string> emit_plot_data(const Report& report, const std::string& target_dir) {
    if (!report.doc.contains("tables") || report.doc["tables"].empty())
        throw ValidationError("emit_plot_data: report contains no tables");
    std::filesystem::create_directories(target_dir);
    std::vector<std::string> written;
    for (auto it = report.doc["tables"].begin(); it != report.doc["tables"].end(); ++it) {
        std::string path = target_dir + "/" + it.key() + ".csv";
        std::ofstream out(path);
        if (!out) throw ValidationError("emit_plot_data: cannot write " + path);
        const auto& cols = it.value()["columns"];
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << cols[i].get<std::string>() << (i + 1 < cols.size() ? "," : "\n");
        char buf[64];
        for (const auto& row : it.value()["rows"]) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g", row[i].get<double>());
                out << buf << (i + 1 < row.size() ? "," : "\n");
            }
        }
        written.push_back(path);
    }
    return written;
}

void write_outputs(const Report& report, const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    report.write(cfg.out_dir + "/report.json");
    if (report.doc.contains("tables") && !report.doc["tables"].empty())
        emit_plot_data(report, cfg.out_dir);
}

}  // namespace extremegaps::cli
