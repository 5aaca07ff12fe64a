#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "branchwalk/rational.hpp"

namespace branchwalk {

using TraitId = int;

struct NotNonIncreasing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Labeled directed mutation graph. Vertex 0 is the wild type. Rates and
// labels are exact rationals; growth-class comparisons are exact.
struct TraitGraph {
    struct Edge {
        TraitId from = 0;
        TraitId to = 0;
        Rational label;     // l(v,u) > 0, dimensionless exponent
        Rational mu_limit;  // mu(v,u) >= 0, limit constant of the mutation kernel
    };

    int num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<Rational> birth;  // alpha(v)
    std::vector<Rational> death;  // beta(v)

    // edge indices grouped by tail/head vertex, filled by finalize()
    std::vector<std::vector<int>> out_edges;
    std::vector<std::vector<int>> in_edges;

    Rational lambda(TraitId v) const { return birth[v] - death[v]; }
    Rational lambda0() const { return birth[0] - death[0]; }

    int edge_index(TraitId from, TraitId to) const;

    // Rebuilds adjacency lists; sorts out-edge lists by head id so that
    // enumeration order is deterministic.
    void finalize();
};

TraitGraph make_graph(int num_vertices,
                      std::vector<TraitGraph::Edge> edges,
                      std::vector<Rational> birth,
                      std::vector<Rational> death);

enum class GrowthClass { Neutral, Deleterious, Selective };

const char* growth_class_name(GrowthClass c);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Collects every violated structural invariant (self-loops, duplicate edges,
// unreachable vertices, non-positive labels, negative rates, lambda(0) <= 0).
ValidationReport validate(const TraitGraph& graph);

// Exact comparison of lambda(v) against lambda(0).
std::vector<GrowthClass> classify(const TraitGraph& graph);

// True iff lambda(v) <= lambda(0) for every vertex.
bool check_non_increasing(const TraitGraph& graph);

}  // namespace branchwalk
