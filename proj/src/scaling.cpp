#include "branchwalk/scaling.hpp"

#include <cmath>
#include <string>

namespace branchwalk {

ScalingParams make_scaling(const TraitGraph& graph, long long n, int theta_max,
                           std::optional<double> phi_override,
                           std::optional<double> psi_override) {
    if (n < 2) throw std::invalid_argument("scaling parameter n must be >= 2");
    if (theta_max < 0) throw std::invalid_argument("theta_max must be >= 0");
    ScalingParams s;
    s.n = n;
    s.theta_max = theta_max;
    s.log_n = std::log(static_cast<double>(n));
    // defaults follow phi_n = log(log n), psi_n = (log n)^{3/4}; the clamps
    // only matter for n below e^e, where log(log n) turns negative
    s.phi_n = phi_override ? *phi_override : std::max(std::log(s.log_n), 1.0);
    s.h_n = s.log_n / (std::max(std::log(s.log_n), 0.0) * theta_max + s.phi_n);
    s.psi_n = psi_override ? *psi_override : std::pow(s.log_n, 0.75);
    if (!(s.h_n > 0) || !(s.psi_n > 0))
        throw std::invalid_argument("scale functions must be positive");

    s.edge_mu_n.resize(graph.edges.size());
    s.mu_bar.assign(graph.num_vertices, 0.0);
    for (size_t e = 0; e < graph.edges.size(); ++e) {
        const auto& ed = graph.edges[e];
        s.edge_mu_n[e] =
            to_double(ed.mu_limit) * std::pow(static_cast<double>(n), -to_double(ed.label));
        s.mu_bar[ed.from] += s.edge_mu_n[e];
    }
    for (int v = 0; v < graph.num_vertices; ++v)
        if (s.mu_bar[v] > 1.0)
            throw MutationOverflow("total mutation probability of trait " + std::to_string(v) +
                                   " exceeds 1 at n = " + std::to_string(n));
    return s;
}

double total_mutation_probability(const TraitGraph& graph, const ScalingParams& scaling,
                                  TraitId v) {
    double sum = 0;
    for (int e : graph.out_edges[v]) sum += scaling.edge_mu_n[e];
    if (sum > 1.0)
        throw MutationOverflow("total mutation probability of trait " + std::to_string(v) +
                               " exceeds 1 at n = " + std::to_string(scaling.n));
    return sum;
}

double deterministic_time(const ScalingParams& scaling, double lambda0, double t) {
    return t * scaling.log_n / lambda0;
}

}  // namespace branchwalk
