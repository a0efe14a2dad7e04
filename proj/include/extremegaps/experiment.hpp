#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace extremegaps::cli {

using json = nlohmann::ordered_json;

struct BoxConfig {
    double u_lo = 0.0, u_hi = 0.0;
    double loc_lo = 0.0, loc_hi = 0.0;
};

struct ExperimentConfig {
    std::string experiment;
    int n = 300;
    std::vector<int> n_list;
    long trials = 1000;
    std::uint64_t seed = 1;
    std::array<double, 2> interval{-1.0, 1.0};  // GUE bulk window
    double epsilon0 = 0.05;
    int ell = 1;
    double eps = 1e-8;                 // Toda off-diagonal threshold
    std::string ensemble = "cue";      // largest_gaps: cue or gue
    std::vector<double> alpha_grid;    // gap_prob_tables half arc lengths
    std::vector<BoxConfig> boxes;      // Poisson count boxes
    std::string zeros_path = "data/zeros_100k.txt";
    std::size_t zeros_offset = 0;
    std::size_t zeros_count = 100000;
    std::size_t small_gap_count = 1000;
    double bin_width = 5.0;

    // execution-only knobs; never echoed into reports so identical logical
    // configs produce identical bytes at any worker count
    int workers = 0;  // 0 = hardware concurrency
    std::string out_dir = "out";

    static ExperimentConfig from_json(const json& j);
    json echo() const;
    void validate() const;
    int effective_workers() const;
};

struct Report {
    json doc;

    std::string to_string() const;  // canonical serialized form
    void write(const std::string& path) const;
};

// run one experiment; deterministic in (logical config, seed) for any worker count
Report run(const ExperimentConfig& cfg);

// materialize every table in the report as a CSV file under `target_dir`
std::vector<std::string> emit_plot_data(const Report& report, const std::string& target_dir);

// write report.json plus all CSVs under cfg.out_dir
void write_outputs(const Report& report, const ExperimentConfig& cfg);

}  // namespace extremegaps::cli
