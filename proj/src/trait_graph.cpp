#include "branchwalk/trait_graph.hpp"

#include <algorithm>
#include <set>

namespace branchwalk {

int TraitGraph::edge_index(TraitId from, TraitId to) const {
    for (int e : out_edges[from])
        if (edges[e].to == to) return e;
    return -1;
}

void TraitGraph::finalize() {
    out_edges.assign(num_vertices, {});
    in_edges.assign(num_vertices, {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const Edge& ed = edges[e];
        if (ed.from < 0 || ed.from >= num_vertices || ed.to < 0 || ed.to >= num_vertices)
            throw std::out_of_range("edge endpoint outside vertex range");
        out_edges[ed.from].push_back(e);
        in_edges[ed.to].push_back(e);
    }
    auto by_head = [this](int a, int b) { return edges[a].to < edges[b].to; };
    auto by_tail = [this](int a, int b) { return edges[a].from < edges[b].from; };
    for (auto& lst : out_edges) std::sort(lst.begin(), lst.end(), by_head);
    for (auto& lst : in_edges) std::sort(lst.begin(), lst.end(), by_tail);
}

TraitGraph make_graph(int num_vertices,
                      std::vector<TraitGraph::Edge> edges,
                      std::vector<Rational> birth,
                      std::vector<Rational> death) {
    TraitGraph g;
    g.num_vertices = num_vertices;
    g.edges = std::move(edges);
    g.birth = std::move(birth);
    g.death = std::move(death);
    if (static_cast<int>(g.birth.size()) != num_vertices ||
        static_cast<int>(g.death.size()) != num_vertices)
        throw std::invalid_argument("rate vector size does not match vertex count");
    g.finalize();
    return g;
}

const char* growth_class_name(GrowthClass c) {
    switch (c) {
        case GrowthClass::Neutral: return "neutral";
        case GrowthClass::Deleterious: return "deleterious";
        case GrowthClass::Selective: return "selective";
    }
    return "?";
}

ValidationReport validate(const TraitGraph& graph) {
    ValidationReport report;
    auto add = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

    if (graph.num_vertices <= 0) {
        add("graph has no vertices");
        return report;
    }
    if (graph.lambda0() <= 0)
        add("wild-type growth rate lambda(0) = " + rational_to_string(graph.lambda0()) +
            " must be positive");
    for (int v = 0; v < graph.num_vertices; ++v) {
        if (graph.birth[v] < 0) add("birth rate of trait " + std::to_string(v) + " is negative");
        if (graph.death[v] < 0) add("death rate of trait " + std::to_string(v) + " is negative");
    }

    std::set<std::pair<TraitId, TraitId>> seen;
    for (const auto& e : graph.edges) {
        std::string name = "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
        if (e.from == e.to) add("self-loop at vertex " + std::to_string(e.from));
        if (!seen.insert({e.from, e.to}).second) add("duplicate edge " + name);
        if (e.label <= 0) add("edge " + name + " has non-positive label");
        if (e.mu_limit < 0) add("edge " + name + " has negative mutation constant");
    }

    // reachability from 0 along directed edges
    std::vector<char> reached(graph.num_vertices, 0);
    std::vector<TraitId> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        TraitId v = stack.back();
        stack.pop_back();
        for (int e : graph.out_edges[v]) {
            TraitId u = graph.edges[e].to;
            if (!reached[u]) {
                reached[u] = 1;
                stack.push_back(u);
            }
        }
    }
    for (int v = 0; v < graph.num_vertices; ++v)
        if (!reached[v]) add("unreachable vertex " + std::to_string(v));

    return report;
}

std::vector<GrowthClass> classify(const TraitGraph& graph) {
    std::vector<GrowthClass> out(graph.num_vertices);
    const Rational l0 = graph.lambda0();
    for (int v = 0; v < graph.num_vertices; ++v) {
        const Rational lv = graph.lambda(v);
        out[v] = lv == l0   ? GrowthClass::Neutral
                 : lv < l0 ? GrowthClass::Deleterious
                           : GrowthClass::Selective;
    }
    return out;
}

bool check_non_increasing(const TraitGraph& graph) {
    const Rational l0 = graph.lambda0();
    for (int v = 0; v < graph.num_vertices; ++v)
        if (graph.lambda(v) > l0) return false;
    return true;
}

}  // namespace branchwalk
