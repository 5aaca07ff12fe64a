#include "branchwalk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "branchwalk/exponents.hpp"

namespace branchwalk {

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

int theta_max_of(const TraitGraph& graph) {
    int theta_max = 0;
    for (int v = 1; v < graph.num_vertices; ++v)
        theta_max = std::max(theta_max, admissible_set(graph, v).theta_v);
    return theta_max;
}

struct ReplicateOutput {
    std::vector<ObsRow> rows;
    std::vector<CrossRow> crossings;
    ReplicateMeta meta{};
};

}  // namespace

std::vector<double> EnsembleStats::ratios(long long n, char scale, int v, double t, double s,
                                          bool conditioned) const {
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.n != n || r.scale != scale || r.v != v || !near(r.t, t) || !near(r.s, s)) continue;
        if (scale == 'd') {
            if (conditioned && !r.survived) continue;
        } else {
            if (!r.valid) continue;  // random scales are defined on crossing replicates only
        }
        out.push_back(r.ratio);
    }
    return out;
}

std::vector<double> EnsembleStats::crossing_times(long long n, char rho, double t) const {
    std::vector<double> out;
    for (const auto& c : crossings)
        if (c.n == n && c.rho == rho && near(c.t, t) && std::isfinite(c.time))
            out.push_back(c.time);
    return out;
}

double EnsembleStats::survival_fraction(long long n, double t, double s) const {
    std::size_t total = 0, survived = 0;
    for (const auto& r : rows) {
        if (r.n != n || r.scale != 'd' || r.v != 0 || !near(r.t, t) || !near(r.s, s)) continue;
        ++total;
        if (r.survived) ++survived;
    }
    return total ? static_cast<double>(survived) / static_cast<double>(total) : 0.0;
}

EnsembleStats run_ensemble(const EnsembleConfig& config) {
    if (config.replicates < 2) throw std::invalid_argument("ensemble needs at least 2 replicates");
    if (config.n_values.empty()) throw std::invalid_argument("ensemble needs at least one n");
    ValidationReport vr = validate(config.graph);
    if (!vr.ok()) throw std::invalid_argument("invalid graph: " + vr.violations.front());

    const TraitGraph& graph = config.graph;
    const int theta_max = theta_max_of(graph);

    std::vector<TraitAsymptotics> traits;
    for (int v = 0; v < graph.num_vertices; ++v)
        traits.push_back(TraitAsymptotics::from_graph(graph, v));

    EnsembleStats stats;
    stats.n_values = config.n_values;
    stats.replicates = config.replicates;

    for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
        const long long n = config.n_values[ni];
        ScalingParams scaling =
            make_scaling(graph, n, theta_max, config.phi_override, config.psi_override);

        RunConfig rc;
        rc.horizon = config.horizon;
        rc.budget = config.budget;
        rc.sim.walk_mode = config.walk_mode;
        rc.sim.extra_visits = config.extra_visits;
        rc.det_obs = config.det_obs;
        rc.random_obs = config.random_obs;
        rc.eta_thresholds = config.eta_thresholds;
        rc.sigma_thresholds = config.sigma_thresholds;

        std::vector<ReplicateOutput> slots(config.replicates);
        std::atomic<int> cursor{0};
        auto worker = [&]() {
            for (;;) {
                int r = cursor.fetch_add(1);
                if (r >= config.replicates) break;
                Rng rng = replicate_stream(config.root_seed,
                                           ni * static_cast<std::uint64_t>(config.replicates) + r);
                Trajectory traj = run(graph, scaling, rc, rng);
                ReplicateOutput& out = slots[r];
                for (const auto& rec : traj.observations) {
                    if (rec.kind == ObsRecord::Kind::Snapshot) continue;
                    char scale = rec.kind == ObsRecord::Kind::Deterministic ? 'd' : rec.rho;
                    for (int v = 0; v < graph.num_vertices; ++v) {
                        ObsRow row;
                        row.n = n;
                        row.replicate = r;
                        row.scale = scale;
                        row.v = v;
                        row.t = rec.t;
                        row.s = rec.s;
                        row.count = rec.counts[v];
                        row.normalizer = normalizer(scaling, traits[v], rec.t, rec.s);
                        row.ratio = static_cast<double>(row.count) / row.normalizer;
                        row.survived = rec.counts[0] > 0;
                        row.valid = rec.valid;
                        out.rows.push_back(row);
                    }
                }
                for (const auto& c : traj.crossings)
                    out.crossings.push_back({n, r, c.rho, c.t, c.time});
                out.meta = {n,
                            r,
                            traj.extinct,
                            traj.budget_exceeded,
                            traj.final_counts[0] > 0,
                            traj.events};
            }
        };
        int nthreads = std::max(1, config.threads);
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        // merge in replicate order regardless of completion order
        for (auto& slot : slots) {
            stats.rows.insert(stats.rows.end(), slot.rows.begin(), slot.rows.end());
            stats.crossings.insert(stats.crossings.end(), slot.crossings.begin(),
                                   slot.crossings.end());
            stats.meta.push_back(slot.meta);
        }
    }
    return stats;
}

ComparisonReport compare_first_order(const EnsembleStats& stats, const EnsembleConfig& config) {
    const TraitGraph& graph = config.graph;
    if (!check_non_increasing(graph))
        throw NotNonIncreasing("first-order comparison requires non-increasing growth rates");
    const int theta_max = theta_max_of(graph);
    const WLaw law = w_law(graph);

    std::vector<TraitAsymptotics> traits;
    for (int v = 0; v < graph.num_vertices; ++v)
        traits.push_back(TraitAsymptotics::from_graph(graph, v));

    // collect the distinct observed (scale, v, t, s) targets
    struct Key {
        char scale;
        int v;
        double t, s;
    };
    std::vector<Key> keys;
    for (const auto& r : stats.rows) {
        if (r.v == 0) continue;  // the first-order limits concern mutant subpopulations
        bool found = false;
        for (const auto& k : keys)
            if (k.scale == r.scale && k.v == r.v && near(k.t, r.t) && near(k.s, r.s)) {
                found = true;
                break;
            }
        if (!found) keys.push_back({r.scale, r.v, r.t, r.s});
    }

    ComparisonReport report;
    for (const auto& k : keys) {
        ComparisonTrend trend;
        trend.v = k.v;
        trend.scale = k.scale;
        trend.t = k.t;
        trend.s = k.s;
        for (long long n : stats.n_values) {
            ScalingParams scaling =
                make_scaling(graph, n, theta_max, config.phi_override, config.psi_override);
            ComparisonCell cell;
            cell.n = n;
            cell.v = k.v;
            cell.scale = k.scale;
            cell.t = k.t;
            cell.s = k.s;
            switch (normalizer_regime(scaling, traits[k.v], k.t)) {
                case NormalizerRegime::PreBirth: cell.regime = 1; break;
                case NormalizerRegime::Transition: cell.regime = 2; break;
                case NormalizerRegime::Growth: cell.regime = 3; break;
            }
            std::vector<double> cond =
                stats.ratios(n, k.scale, k.v, k.t, k.s, config.condition_on_survival);
            std::vector<double> all = stats.ratios(n, k.scale, k.v, k.t, k.s, false);
            cell.total = all.size();
            cell.conditioned = cond.size();
            SampleSummary sum = summarize(cond);
            cell.mean_ratio = sum.mean;
            cell.se_ratio = sum.std_error;
            double w_t = traits[k.v].w_v.eval(k.t);
            cell.predicted = k.scale == 'd' ? law.conditional_mean() * w_t : w_t;
            double m_t = mean_law_weight(graph, k.v, k.t);
            cell.mean_law = k.scale == 'd' ? law.conditional_mean() * m_t : m_t;
            if (cell.regime == 3 && cell.predicted > 0) {
                cell.rel_error = std::abs(cell.mean_ratio - cell.predicted) / cell.predicted;
                trend.ns.push_back(n);
                trend.rel_errors.push_back(cell.rel_error);
                trend.rel_error_ses.push_back(cell.predicted > 0 ? sum.std_error / cell.predicted
                                                                 : 0.0);
            } else if (cell.regime == 2) {
                // the transition window only carries an upper bound, and only
                // for theta >= 1
                if (traits[k.v].theta_v == 0)
                    cell.theta0_window = true;
                else
                    for (double ratio : cond)
                        if (ratio > 1.0) cell.regime2_exceeds_bound = true;
            }
            cell.theta_v = traits[k.v].theta_v;
            report.cells.push_back(cell);
        }
        if (trend.ns.size() >= 2) {
            trend.decreasing =
                trend_decreasing(trend.rel_errors, trend.rel_error_ses, config.trend_se_slack, 1);
            report.all_trends_decreasing &= trend.decreasing;
            report.trends.push_back(std::move(trend));
        }
    }
    return report;
}

ExponentComparison compare_exponents(const EnsembleStats& stats, const EnsembleConfig& config,
                                     double window_lo, double window_hi) {
    const TraitGraph& graph = config.graph;
    const double lambda0 = to_double(graph.lambda0());
    const int nv = graph.num_vertices;
    ExponentResult limits = run_exponent_algorithm(graph);

    // deterministic-scale grid points with s = 0
    std::vector<double> grid;
    for (const auto& r : stats.rows)
        if (r.scale == 'd' && near(r.s, 0.0)) {
            bool found = false;
            for (double g : grid)
                if (near(g, r.t)) found = true;
            if (!found) grid.push_back(r.t);
        }
    std::sort(grid.begin(), grid.end());
    const int gk = static_cast<int>(grid.size());
    auto grid_index = [&](double t) {
        for (int i = 0; i < gk; ++i)
            if (near(grid[i], t)) return i;
        return -1;
    };

    ExponentComparison cmp;
    for (long long n : stats.n_values) {
        double log_n = std::log(static_cast<double>(n));
        // (replicate, v, grid) -> count, plus per-replicate survival at the last grid point
        std::vector<long long> table(static_cast<std::size_t>(stats.replicates) * nv * gk, -1);
        std::vector<char> survived_last(stats.replicates, 0);
        for (const auto& r : stats.rows) {
            if (r.n != n || r.scale != 'd' || !near(r.s, 0.0)) continue;
            int gi = grid_index(r.t);
            if (gi < 0) continue;
            table[(static_cast<std::size_t>(r.replicate) * nv + r.v) * gk + gi] = r.count;
            if (gi == gk - 1 && r.v == 0) survived_last[r.replicate] = r.survived;
        }
        for (int v = 0; v < nv; ++v) {
            ExponentComparisonCell cell;
            cell.n = n;
            cell.v = v;
            cell.limit_slope = to_double(limits.x[v].final_slope());
            std::vector<double> sup_dists, slopes;
            for (int r = 0; r < stats.replicates; ++r) {
                std::vector<double> xs, ys;
                bool complete = true;
                for (int gi = 0; gi < gk; ++gi) {
                    long long count = table[(static_cast<std::size_t>(r) * nv + v) * gk + gi];
                    if (count < 0) {
                        complete = false;
                        break;
                    }
                    double x =
                        count > 1 ? lambda0 * std::log(static_cast<double>(count)) / log_n : 0.0;
                    xs.push_back(grid[gi]);
                    ys.push_back(x);
                }
                if (!complete) continue;
                if (!survived_last[r]) {
                    for (double y : ys)
                        if (y != 0.0) cmp.extinct_all_zero = false;
                    continue;
                }
                double sup = 0;
                for (std::size_t i = 0; i < xs.size(); ++i)
                    sup = std::max(sup, std::abs(ys[i] - limits.x[v].eval(xs[i])));
                sup_dists.push_back(sup);
                std::vector<double> wx, wy;
                for (std::size_t i = 0; i < xs.size(); ++i)
                    if (xs[i] >= window_lo - 1e-12 && xs[i] <= window_hi + 1e-12) {
                        wx.push_back(xs[i]);
                        wy.push_back(ys[i]);
                    }
                if (wx.size() >= 2) slopes.push_back(ols_slope(wx, wy));
            }
            cell.surviving = sup_dists.size();
            cell.mean_sup_dist = summarize(sup_dists).mean;
            cell.mean_late_slope = summarize(slopes).mean;
            cmp.cells.push_back(cell);
        }
    }
    return cmp;
}

WLawTest ks_test_wlaw(const std::vector<double>& sample, const WLaw& law, double ci_z) {
    if (sample.size() < 8) throw std::invalid_argument("need at least 8 observations");
    WLawTest out;
    std::vector<double> positive;
    std::size_t zeros = 0;
    for (double x : sample) {
        if (x <= 0)
            ++zeros;
        else
            positive.push_back(x);
    }
    out.atom_fraction = static_cast<double>(zeros) / static_cast<double>(sample.size());
    out.atom_ok = binomial_within_ci(out.atom_fraction, law.atom_at_zero, sample.size(), ci_z);
    out.positive_part = ks_test_exponential(positive, law.exp_rate);
    return out;
}

}  // namespace branchwalk
