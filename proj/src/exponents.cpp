#include "branchwalk/exponents.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "branchwalk/walks.hpp"

namespace branchwalk {

Rational PiecewiseLinear::eval(const Rational& t) const {
    size_t i = std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin();
    if (i == 0) return values.front();  // t < 0: constant extension, not used in practice
    --i;
    return values[i] + slopes[i] * (t - breakpoints[i]);
}

double PiecewiseLinear::eval(double t) const {
    size_t i = 0;
    while (i + 1 < breakpoints.size() && t >= to_double(breakpoints[i + 1])) ++i;
    return to_double(values[i]) + to_double(slopes[i]) * (t - to_double(breakpoints[i]));
}

void PiecewiseLinear::simplify() {
    size_t i = 1;
    while (i < breakpoints.size()) {
        if (slopes[i] == slopes[i - 1]) {
            breakpoints.erase(breakpoints.begin() + i);
            values.erase(values.begin() + i);
            slopes.erase(slopes.begin() + i);
        } else {
            ++i;
        }
    }
}

PiecewiseLinear hinge(const Rational& slope, const Rational& kink) {
    PiecewiseLinear f;
    if (kink <= 0) {
        f.breakpoints = {Rational(0)};
        f.values = {Rational(0)};
        f.slopes = {slope};
    } else {
        f.breakpoints = {Rational(0), kink};
        f.values = {Rational(0), Rational(0)};
        f.slopes = {Rational(0), slope};
    }
    return f;
}

std::string ExponentEvent::describe() const {
    std::ostringstream os;
    os << "t=" << rational_to_string(time) << " ";
    os << (kind == Kind::Birth ? "birth" : "takeover") << " v=" << vertex;
    os << " slope=" << rational_to_string(new_slope) << " nu={";
    for (size_t i = 0; i < nu.size(); ++i) os << (i ? "," : "") << nu[i];
    os << "}";
    if (!nu_minus.empty()) {
        os << " nu-={";
        for (size_t i = 0; i < nu_minus.size(); ++i) os << (i ? "," : "") << nu_minus[i];
        os << "}";
    }
    if (!nu_plus.empty()) {
        os << " nu+={";
        for (size_t i = 0; i < nu_plus.size(); ++i) os << (i ? "," : "") << nu_plus[i];
        os << "}";
    }
    if (intrinsic_tie) os << " [intrinsic-drive tie]";
    return os.str();
}

namespace {

struct AlgoState {
    std::vector<char> alive;
    std::vector<Rational> slope;
    std::vector<Rational> xval;      // value at the current step time
    std::vector<int> driven_by;      // parent in the drive forest, -1 if none
};

// All traits transitively driven by v (descendants in the drive forest).
std::vector<int> driven_closure(const AlgoState& st, int v) {
    std::vector<int> out;
    size_t n = st.driven_by.size();
    std::vector<char> mark(n, 0);
    mark[v] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t u = 0; u < n; ++u) {
            if (!mark[u] && st.driven_by[u] >= 0 && mark[st.driven_by[u]]) {
                mark[u] = 1;
                out.push_back(static_cast<int>(u));
                grew = true;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Candidate {
    Rational when;
    bool birth;                 // else takeover
    TraitId v;                  // born trait / driving trait
    std::vector<TraitId> nu;    // triggering parents / captured targets
};

}  // namespace

ExponentResult run_exponent_algorithm(const TraitGraph& graph) {
    const Rational l0 = graph.lambda0();
    if (l0 <= 0) throw NonPositiveWildGrowth("lambda(0) must be positive");

    const int n = graph.num_vertices;
    AlgoState st;
    st.alive.assign(n, 0);
    st.slope.assign(n, Rational(0));
    st.xval.assign(n, Rational(0));
    st.driven_by.assign(n, -1);
    st.alive[0] = 1;
    st.slope[0] = l0;

    ExponentResult result;
    result.x.resize(n);
    for (int v = 0; v < n; ++v) {
        result.x[v].breakpoints = {Rational(0)};
        result.x[v].values = {Rational(0)};
        result.x[v].slopes = {st.slope[v]};
    }
    result.step_times = {Rational(0)};

    Rational now(0);
    const int max_steps = n * n + n + 1;
    for (int step = 0; step < max_steps; ++step) {
        // ---- collect candidates ----
        std::vector<Candidate> cands;
        for (int v = 0; v < n; ++v) {
            if (!st.alive[v]) {
                // birth of v, triggered by alive in-neighbors
                std::optional<Rational> best;
                std::vector<TraitId> nu;
                for (int e : graph.in_edges[v]) {
                    int u = graph.edges[e].from;
                    if (!st.alive[u] || st.slope[u] <= 0) continue;
                    Rational gap = l0 * graph.edges[e].label - st.xval[u];
                    if (gap <= 0)
                        throw std::logic_error("exponent algorithm: overdue birth of trait " +
                                               std::to_string(v));
                    Rational when = now + gap / st.slope[u];
                    if (!best || when < *best) {
                        best = when;
                        nu = {u};
                    } else if (when == *best) {
                        nu.push_back(u);
                    }
                }
                if (best) cands.push_back({*best, true, v, std::move(nu)});
            } else {
                // takeover: v starts driving a slower alive out-neighbor. A
                // pair can be exactly at its threshold when v's slope has just
                // risen (tied births followed by a capture of the other
                // parent); such takeovers fire with zero delay at the same
                // breakpoint.
                std::optional<Rational> best;
                std::vector<TraitId> nu;
                for (int e : graph.out_edges[v]) {
                    int u = graph.edges[e].to;
                    if (!st.alive[u] || st.slope[v] <= st.slope[u]) continue;
                    Rational gap = l0 * graph.edges[e].label - (st.xval[v] - st.xval[u]);
                    if (gap < 0)
                        throw std::logic_error(
                            "exponent algorithm: overdue takeover " + std::to_string(v) + "->" +
                            std::to_string(u));
                    Rational when = gap > 0 ? now + gap / (st.slope[v] - st.slope[u]) : now;
                    if (!best || when < *best) {
                        best = when;
                        nu = {u};
                    } else if (when == *best) {
                        nu.push_back(u);
                    }
                }
                if (best) cands.push_back({*best, false, v, std::move(nu)});
            }
        }
        if (cands.empty()) break;

        Rational next = cands.front().when;
        for (const auto& c : cands) next = std::min(next, c.when);
        if (next < now) throw std::logic_error("exponent algorithm: non-advancing step");

        if (next > now) {
            // advance values to the event time
            for (int v = 0; v < n; ++v)
                if (st.alive[v]) st.xval[v] += st.slope[v] * (next - now);
            now = next;
            result.step_times.push_back(now);
        }

        std::vector<Candidate> firing;
        for (auto& c : cands)
            if (c.when == now) firing.push_back(std::move(c));

        const std::vector<Rational> slope_before = st.slope;

        // ---- takeovers first: captured targets take the driver's old slope ----
        for (const auto& c : firing) {
            if (c.birth) continue;
            ExponentEvent ev;
            ev.kind = ExponentEvent::Kind::SlopeTakeover;
            ev.time = now;
            ev.vertex = c.v;
            ev.new_slope = slope_before[c.v];
            for (TraitId u : c.nu) {
                // cede u to a simultaneous driver with strictly higher slope
                bool ceded = false;
                for (const auto& other : firing) {
                    if (other.birth || other.v == c.v) continue;
                    if (slope_before[other.v] > slope_before[c.v] &&
                        std::find(other.nu.begin(), other.nu.end(), u) != other.nu.end()) {
                        ceded = true;
                        break;
                    }
                }
                if (ceded) {
                    ev.nu_minus.push_back(u);
                    continue;
                }
                ev.nu.push_back(u);
                st.driven_by[u] = c.v;
                st.slope[u] = slope_before[c.v];
                for (int w : driven_closure(st, u)) st.slope[w] = slope_before[c.v];
            }
            result.events.push_back(std::move(ev));
        }

        // ---- births, using post-takeover slopes of the parents ----
        for (const auto& c : firing) {
            if (!c.birth) continue;
            ExponentEvent ev;
            ev.kind = ExponentEvent::Kind::Birth;
            ev.time = now;
            ev.vertex = c.v;
            ev.nu = c.nu;
            st.alive[c.v] = 1;
            Rational drive = st.slope[c.nu.front()];
            for (TraitId u : c.nu) drive = std::max(drive, st.slope[u]);
            const Rational own = graph.lambda(c.v);
            st.slope[c.v] = std::max(own, drive);
            ev.new_slope = st.slope[c.v];
            if (drive >= own) {
                for (TraitId u : c.nu)
                    if (st.slope[u] == drive) ev.nu_plus.push_back(u);
                st.driven_by[c.v] = ev.nu_plus.front();
                ev.intrinsic_tie = drive == own;
            }
            result.events.push_back(std::move(ev));
        }

        // ---- record slope changes; zero-delay cascades coalesce into the
        // same breakpoint ----
        for (int v = 0; v < n; ++v) {
            if (st.slope[v] != result.x[v].slopes.back()) {
                if (st.slope[v] < result.x[v].slopes.back())
                    throw std::logic_error("exponent algorithm: slope decreased at trait " +
                                           std::to_string(v));
                if (result.x[v].breakpoints.back() == now) {
                    result.x[v].slopes.back() = st.slope[v];
                } else {
                    result.x[v].breakpoints.push_back(now);
                    result.x[v].values.push_back(st.xval[v]);
                    result.x[v].slopes.push_back(st.slope[v]);
                }
            }
        }
        if (step + 1 == max_steps) throw std::logic_error("exponent algorithm: step bound exceeded");
    }

    for (auto& f : result.x) f.simplify();
    return result;
}

std::vector<PiecewiseLinear> closed_form_mono_directional(const std::vector<Rational>& lambdas,
                                                        const std::vector<Rational>& labels) {
    if (lambdas.empty() || labels.size() + 1 != lambdas.size())
        throw std::invalid_argument("need one more growth rate than labels");
    if (lambdas[0] <= 0) throw NonPositiveWildGrowth("lambda(0) must be positive");
    for (const auto& l : labels)
        if (l <= 0) throw std::invalid_argument("labels must be positive");

    std::vector<PiecewiseLinear> out;
    Rational lambda_max = lambdas[0];
    Rational tstar(0);
    out.push_back(hinge(lambda_max, tstar));
    for (size_t i = 0; i + 1 < lambdas.size(); ++i) {
        tstar += labels[i] * lambdas[0] / lambda_max;
        lambda_max = std::max(lambda_max, lambdas[i + 1]);
        out.push_back(hinge(lambda_max, tstar));
    }
    return out;
}

std::vector<PiecewiseLinear> closed_form_non_increasing(const TraitGraph& graph) {
    if (!check_non_increasing(graph))
        throw NotNonIncreasing("graph has a selective vertex");
    std::vector<PiecewiseLinear> out;
    out.reserve(graph.num_vertices);
    for (int v = 0; v < graph.num_vertices; ++v)
        out.push_back(hinge(graph.lambda0(), admissible_set(graph, v).t_v));
    return out;
}

}  // namespace branchwalk
