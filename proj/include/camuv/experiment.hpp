#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "camuv/discovery.hpp"

namespace camuv {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    std::string preset;  // fig2 | ba-desk | er-desk | "" (explicit settings)

    std::string generator = "ba";  // ba | er | fixture
    std::string fixture;           // fixture name when generator == fixture
    int ba_nodes = 40;
    int ba_attach = 5;
    int ba_observed = 10;
    int er_observed = 10;
    double er_edge_prob = 0.2;
    int er_confounders = 20;
    int er_mediators = 20;

    int n_graphs = 10;
    int n_samples = 500;
    std::vector<double> alphas = {0.1};
    std::vector<std::string> methods = {"cam_uv", "cam_uvx"};
    std::string engine = "sample";  // sample | oracle
    int max_parents = 3;
    uint64_t seed0 = 0;
    int jobs = 0;  // 0 = hardware concurrency
    bool strict_ancestors = false;
    std::string out_dir;

    static ExperimentConfig from_preset(const std::string& preset);
    uint64_t config_hash() const;
};

// dispatches on method name: cam_uv, cam_uvx, cam_uvx_coldstart
DiscoveryResult run_method(const std::string& method, TestEngine& engine, SearchConfig cfg);

// Runs the experiment grid and writes metrics.csv (scored presets) or
// success.csv (fig2 target hits) into out_dir. Per-cell failures become rows
// with an error status; the run continues.
void run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace camuv
