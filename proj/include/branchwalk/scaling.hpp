#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "branchwalk/trait_graph.hpp"

namespace branchwalk {

struct MutationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite-n instantiation of the mutation kernel: mu_n(v,u) = mu(v,u) * n^{-l(v,u)},
// plus the scale functions h_n and psi_n used by the normalizers.
// Defaults: phi_n = log(log(n)), psi_n = (log n)^{3/4}; both overridable.
struct ScalingParams {
    long long n = 0;
    int theta_max = 0;  // max theta(v) over v != 0
    double phi_n = 0;
    double h_n = 0;    // log(n) / (log(log(n)) * theta_max + phi_n)
    double psi_n = 0;
    double log_n = 0;
    std::vector<double> edge_mu_n;  // per edge index
    std::vector<double> mu_bar;     // per vertex, sum of outgoing edge_mu_n
};

ScalingParams make_scaling(const TraitGraph& graph, long long n, int theta_max,
                           std::optional<double> phi_override = std::nullopt,
                           std::optional<double> psi_override = std::nullopt);

// mu_bar_n(v); throws MutationOverflow when it exceeds 1.
double total_mutation_probability(const TraitGraph& graph, const ScalingParams& scaling, TraitId v);

// Deterministic time scale: t * log(n) / lambda(0).
double deterministic_time(const ScalingParams& scaling, double lambda0, double t);

}  // namespace branchwalk
