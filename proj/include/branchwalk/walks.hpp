#pragma once

#include <stdexcept>
#include <vector>

#include "branchwalk/polynomial.hpp"
#include "branchwalk/trait_graph.hpp"

namespace branchwalk {

struct SelectiveVertexOnWalk : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A walk from vertex 0 with its derived label sums and neutral positions.
struct Walk {
    std::vector<TraitId> vertices;       // v(0)=0, ..., v(k)
    std::vector<Rational> prefix;        // prefix[i] = sum of the first i edge labels
    std::vector<int> neutral_positions;  // positions i >= 1 with lambda(v(i)) == lambda(0)

    int hops() const { return static_cast<int>(vertices.size()) - 1; }
    const Rational& length() const { return prefix.back(); }  // t(gamma)
    int theta() const { return static_cast<int>(neutral_positions.size()); }
    TraitId end() const { return vertices.back(); }
};

// Builds a Walk from a vertex sequence, checking that consecutive pairs are
// edges of the graph.
Walk make_walk(const TraitGraph& graph, const std::vector<TraitId>& vertices);

// All directed simple paths 0 -> target, in lexicographic vertex order.
// For target 0 the single trivial walk (0) is returned.
std::vector<Walk> enumerate_simple_paths(const TraitGraph& graph, TraitId target);

// Walks of bounded repetition: each vertex may appear at most 1 + extra_visits
// times. extra_visits = 0 gives the simple paths.
std::vector<Walk> enumerate_walks(const TraitGraph& graph, TraitId target, int extra_visits);

struct AdmissibleSet {
    TraitId target = 0;
    Rational t_v;                   // min length over simple paths
    int theta_v = 0;                // max theta among minimal-length paths
    std::vector<Walk> walks;        // A(v)
    std::vector<Walk> all_minimal;  // every minimal-length simple path
};

// Positive labels make any cycle-containing walk strictly longer than its
// cycle-free reduction, so minimizers of t over all walks are simple paths
// and the enumeration may be restricted to them.
AdmissibleSet admissible_set(const TraitGraph& graph, TraitId target);

struct WalkWeight {
    Walk walk;
    Rational const_del{1};          // w_del
    Rational const_neut{1};         // w_neut
    PiecewisePolynomial integral;   // I_gamma(t)
    PiecewisePolynomial weight;     // w_gamma(t) = const_del * const_neut * I_gamma(t)
};

// Weight of a walk as an exact piecewise polynomial. Built by appending one
// vertex at a time: a deleterious head contributes the constant factor
// 2 a(prev) mu(prev,head) / (lambda(0) - lambda(head)); a neutral head
// contributes 2 a(prev) mu(prev,head) / lambda(0) times integration of the
// running function from the cumulative label at that head. Throws
// SelectiveVertexOnWalk when a head has lambda above lambda(0).
WalkWeight walk_weight(const TraitGraph& graph, const Walk& walk);

struct TraitWeightSum {
    TraitId target = 0;
    Rational t_v;
    int theta_v = 0;
    PiecewisePolynomial w;  // sum of w_gamma over A(v)
};

TraitWeightSum trait_weight_sum(const TraitGraph& graph, TraitId target);

}  // namespace branchwalk
