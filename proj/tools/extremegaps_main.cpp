#include "extremegaps/common.hpp"
#include "extremegaps/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using extremegaps::cli::ExperimentConfig;
using extremegaps::cli::json;

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw extremegaps::ValidationError("cannot open config file " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extreme eigenvalue gap experiments"};
    app.require_subcommand(1);

    std::string config_path;
    long seed = -1, n = -1, trials = -1;
    int workers = -1;
    std::string out_dir;

    const std::vector<std::string> kinds{"small_gaps_cue", "small_gaps_gue", "largest_gaps",
                                         "gap_prob_tables", "toda_scaling", "zeta_report"};
    for (const auto& kind : kinds) {
        auto* sub = app.add_subcommand(kind);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "master seed (overrides config)");
        sub->add_option("--n", n, "matrix size (overrides config)");
        sub->add_option("--trials", trials, "Monte Carlo trials (overrides config)");
        sub->add_option("--workers", workers, "worker threads (0 = all cores)");
        sub->add_option("--out", out_dir, "output directory");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        json j = config_path.empty() ? json::object() : load_config_file(config_path);
        j["experiment"] = app.get_subcommands().front()->get_name();
        if (seed >= 0) j["seed"] = static_cast<std::uint64_t>(seed);
        if (n >= 0) j["n"] = n;
        if (trials >= 0) j["trials"] = trials;
        if (workers >= 0) j["workers"] = workers;
        if (!out_dir.empty()) j["out"] = out_dir;

        ExperimentConfig cfg = ExperimentConfig::from_json(j);
        cfg.validate();
        auto report = extremegaps::cli::run(cfg);
        extremegaps::cli::write_outputs(report, cfg);
        std::cerr << "report written to " << cfg.out_dir << "/report.json\n";
        return 0;
    } catch (const extremegaps::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const extremegaps::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}
