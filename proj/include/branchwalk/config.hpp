#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "branchwalk/ensemble.hpp"
#include "branchwalk/ssa.hpp"
#include "branchwalk/trait_graph.hpp"

namespace branchwalk {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario file: named vertices with exact-rational rates, labeled edges,
// scaling choices, and run/ensemble parameters. Rationals are written as
// "p/q" or decimal strings so that parsing is exact.
struct ScenarioConfig {
    std::string name;
    std::uint64_t seed = 1;

    TraitGraph graph;
    std::vector<std::string> vertex_names;  // vertex 0 is the wild type

    std::vector<long long> n_values{100};
    std::optional<double> phi_override, psi_override;

    int replicates = 2;
    int threads = 1;
    std::vector<std::pair<double, double>> det_obs;
    std::vector<RandomObsSpec> random_obs;
    std::vector<double> eta_thresholds, sigma_thresholds, tau_thresholds;
    double horizon = std::numeric_limits<double>::infinity();
    std::uint64_t budget = 100'000'000;
    bool walk_mode = false;
    int extra_visits = 0;
    double snapshot_interval = 0;
    bool keep_event_log = false;

    double ks_p_floor = 0.01;
    double ci_z = 2.5758293035489004;
    double trend_se_slack = 2.0;
    std::string conditioning = "survival";  // or "all"

    std::string out_dir = "out";

    int vertex_id(const std::string& name) const;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& config);  // canonical JSON

// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const ScenarioConfig& config);

EnsembleConfig to_ensemble_config(const ScenarioConfig& config);
RunConfig to_run_config(const ScenarioConfig& config);

// Scaling at one n, with theta_max derived from the graph.
ScalingParams make_scaling_for_config(const ScenarioConfig& config, long long n);

}  // namespace branchwalk
