#include "branchwalk/walks.hpp"

#include <algorithm>

namespace branchwalk {

Walk make_walk(const TraitGraph& graph, const std::vector<TraitId>& vertices) {
    if (vertices.empty() || vertices.front() != 0)
        throw std::invalid_argument("walk must start at vertex 0");
    Walk w;
    w.vertices = vertices;
    w.prefix.resize(vertices.size());
    w.prefix[0] = 0;
    const Rational l0 = graph.lambda0();
    for (size_t i = 1; i < vertices.size(); ++i) {
        int e = graph.edge_index(vertices[i - 1], vertices[i]);
        if (e < 0)
            throw std::invalid_argument("walk uses missing edge (" +
                                        std::to_string(vertices[i - 1]) + "," +
                                        std::to_string(vertices[i]) + ")");
        w.prefix[i] = w.prefix[i - 1] + graph.edges[e].label;
        if (graph.lambda(vertices[i]) == l0) w.neutral_positions.push_back(static_cast<int>(i));
    }
    return w;
}

namespace {

void dfs_walks(const TraitGraph& graph, TraitId target, int max_visits,
               std::vector<TraitId>& current, std::vector<int>& visits,
               std::vector<Walk>& out) {
    if (current.back() == target && current.size() > 1)
        out.push_back(make_walk(graph, current));
    for (int e : graph.out_edges[current.back()]) {
        TraitId next = graph.edges[e].to;
        if (visits[next] >= max_visits) continue;
        ++visits[next];
        current.push_back(next);
        dfs_walks(graph, target, max_visits, current, visits, out);
        current.pop_back();
        --visits[next];
    }
}

}  // namespace

std::vector<Walk> enumerate_walks(const TraitGraph& graph, TraitId target, int extra_visits) {
    std::vector<Walk> out;
    if (target == 0) out.push_back(make_walk(graph, {0}));
    std::vector<TraitId> current{0};
    std::vector<int> visits(graph.num_vertices, 0);
    visits[0] = 1;
    dfs_walks(graph, target, 1 + extra_visits, current, visits, out);
    // out-edge lists are sorted by head, so DFS emits lexicographic order
    return out;
}

std::vector<Walk> enumerate_simple_paths(const TraitGraph& graph, TraitId target) {
    return enumerate_walks(graph, target, 0);
}

AdmissibleSet admissible_set(const TraitGraph& graph, TraitId target) {
    AdmissibleSet result;
    result.target = target;
    if (target == 0) {
        // t(0) = 0, theta(0) = 0, A(0) = {(0)} by convention
        Walk trivial = make_walk(graph, {0});
        result.t_v = 0;
        result.theta_v = 0;
        result.walks = {trivial};
        result.all_minimal = {trivial};
        return result;
    }
    std::vector<Walk> paths = enumerate_simple_paths(graph, target);
    if (paths.empty()) throw std::invalid_argument("target unreachable from vertex 0");
    result.t_v = paths.front().length();
    for (const Walk& w : paths)
        if (w.length() < result.t_v) result.t_v = w.length();
    for (const Walk& w : paths) {
        if (w.length() != result.t_v) continue;
        result.all_minimal.push_back(w);
        result.theta_v = std::max(result.theta_v, w.theta());
    }
    for (const Walk& w : result.all_minimal)
        if (w.theta() == result.theta_v) result.walks.push_back(w);
    return result;
}

WalkWeight walk_weight(const TraitGraph& graph, const Walk& walk) {
    WalkWeight result;
    result.walk = walk;
    result.integral = PiecewisePolynomial::constant(Rational(1));
    const Rational l0 = graph.lambda0();
    for (size_t i = 1; i < walk.vertices.size(); ++i) {
        TraitId prev = walk.vertices[i - 1];
        TraitId head = walk.vertices[i];
        const Rational lv = graph.lambda(head);
        int e = graph.edge_index(prev, head);
        Rational factor = Rational(2) * graph.birth[prev] * graph.edges[e].mu_limit;
        if (lv > l0)
            throw SelectiveVertexOnWalk("walk visits selective vertex " + std::to_string(head));
        if (lv == l0) {
            result.const_neut *= factor / l0;
            // Each neutral head adds one integration layer. Its lower limit is
            // the cumulative label at that head, which dominates every earlier
            // breakpoint, so the running function is a single polynomial piece
            // on the integration range.
            result.integral = result.integral.integrate_from(walk.prefix[i]);
        } else {
            result.const_del *= factor / (l0 - lv);
        }
    }
    result.weight = result.integral;
    result.weight *= result.const_del * result.const_neut;
    return result;
}

TraitWeightSum trait_weight_sum(const TraitGraph& graph, TraitId target) {
    if (!check_non_increasing(graph))
        throw SelectiveVertexOnWalk("trait weights require non-increasing growth rates");
    AdmissibleSet adm = admissible_set(graph, target);
    TraitWeightSum sum;
    sum.target = target;
    sum.t_v = adm.t_v;
    sum.theta_v = adm.theta_v;
    for (const Walk& w : adm.walks) sum.w += walk_weight(graph, w).weight;
    return sum;
}

}  // namespace branchwalk
