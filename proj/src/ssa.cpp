#include "branchwalk/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "branchwalk/walks.hpp"

namespace branchwalk {

Simulation::Simulation(const TraitGraph& graph, const ScalingParams& scaling, SimOptions options)
    : graph_(graph) {
    const int nv = graph.num_vertices;
    counts_.assign(nv, 0);
    alpha_.resize(nv);
    beta_.resize(nv);
    per_cell_rate_.resize(nv);
    outcomes_.resize(nv);

    for (int v = 0; v < nv; ++v) {
        alpha_[v] = to_double(graph.birth[v]);
        beta_[v] = to_double(graph.death[v]);
        per_cell_rate_[v] = alpha_[v] + beta_[v];
        std::vector<double> mu;
        mu.reserve(graph.out_edges[v].size());
        for (int e : graph.out_edges[v]) mu.push_back(scaling.edge_mu_n[e]);
        BirthChannels<double> ch = birth_channels(mu);
        auto& out = outcomes_[v];
        double cum = ch.clean;
        out.push_back({cum, SimEvent::Kind::CleanBirth, -1, -1});
        for (size_t i = 0; i < mu.size(); ++i) {
            cum += ch.one[i];
            out.push_back({cum, SimEvent::Kind::OneMutant, static_cast<int>(i), -1});
        }
        for (size_t i = 0; i < mu.size(); ++i) {
            cum += ch.two_same[i];
            out.push_back({cum, SimEvent::Kind::TwoMutantSame, static_cast<int>(i), -1});
        }
        for (const auto& [i, j, p] : ch.two_distinct) {
            cum += p;
            out.push_back({cum, SimEvent::Kind::TwoMutantDistinct, i, j});
        }
        out.back().upper = std::numeric_limits<double>::infinity();
    }

    if (!options.walk_mode) {
        // one species per trait
        species_count_.assign(nv, 0);
        species_trait_.resize(nv);
        species_remainder_.assign(nv, 0);
        species_walk_.resize(nv);
        species_route_.resize(nv);
        for (int v = 0; v < nv; ++v) {
            species_trait_[v] = v;
            species_walk_[v] = {v};
            for (int e : graph.out_edges[v]) species_route_[v].push_back(graph.edges[e].to);
        }
    } else {
        std::map<std::vector<TraitId>, int> index;
        auto add_species = [&](std::vector<TraitId> walk, bool remainder) {
            int id = static_cast<int>(species_count_.size());
            species_count_.push_back(0);
            species_trait_.push_back(walk.back());
            species_remainder_.push_back(remainder ? 1 : 0);
            if (!remainder) index[walk] = id;
            species_walk_.push_back(std::move(walk));
            return id;
        };
        add_species({0}, false);  // primary lineage
        for (int v = 0; v < nv; ++v)
            for (const Walk& w : enumerate_walks(graph, v, options.extra_visits))
                if (w.vertices.size() > 1) add_species(w.vertices, false);
        std::vector<int> remainder_of(nv);
        for (int v = 0; v < nv; ++v) remainder_of[v] = add_species({v}, true);

        species_route_.resize(species_count_.size());
        for (size_t s = 0; s < species_count_.size(); ++s) {
            TraitId v = species_trait_[s];
            for (int e : graph.out_edges[v]) {
                TraitId head = graph.edges[e].to;
                int target = remainder_of[head];
                if (!species_remainder_[s]) {
                    std::vector<TraitId> ext = species_walk_[s];
                    ext.push_back(head);
                    if (auto it = index.find(ext); it != index.end()) target = it->second;
                }
                species_route_[s].push_back(target);
            }
        }
    }
    species_count_[0] = 1;
    counts_[0] = 1;
    total_ = 1;
    k_one_.assign(graph.edges.size(), 0);
    h_two_.assign(graph.edges.size(), 0);
    rebuild_total_rate();
}

void Simulation::rebuild_total_rate() {
    total_rate_ = 0;
    for (size_t s = 0; s < species_count_.size(); ++s)
        total_rate_ += static_cast<double>(species_count_[s]) * per_cell_rate_[species_trait_[s]];
    events_since_rebuild_ = 0;
}

double Simulation::advance_clock(Rng& rng) {
    if (++events_since_rebuild_ >= (1u << 20)) rebuild_total_rate();
    time_ += rng.exponential(total_rate_);
    return time_;
}

SimEvent Simulation::apply_event(Rng& rng) {
    // pick the acting species proportionally to count * (alpha + beta)
    double r = rng.uniform() * total_rate_;
    size_t s = 0;
    size_t last_alive = 0;
    bool found = false;
    for (; s < species_count_.size(); ++s) {
        if (species_count_[s] == 0) continue;
        last_alive = s;
        double rate = static_cast<double>(species_count_[s]) * per_cell_rate_[species_trait_[s]];
        if (r <= rate) {
            found = true;
            break;
        }
        r -= rate;
    }
    if (!found) s = last_alive;  // absorb rounding drift

    const TraitId v = species_trait_[s];
    SimEvent ev;
    ev.time = time_;
    ev.trait = v;

    auto bump = [&](size_t sp, long long d) {
        species_count_[sp] += d;
        counts_[species_trait_[sp]] += d;
        total_ += d;
        total_rate_ += static_cast<double>(d) * per_cell_rate_[species_trait_[sp]];
    };

    double u = rng.uniform() * per_cell_rate_[v];
    if (u < beta_[v]) {
        ev.kind = SimEvent::Kind::Death;
        bump(s, -1);
        return ev;
    }
    double b = (u - beta_[v]) / alpha_[v];  // in [0,1) up to rounding
    const auto& outs = outcomes_[v];
    size_t oi = 0;
    while (b >= outs[oi].upper) ++oi;
    const Outcome& o = outs[oi];
    ev.kind = o.kind;
    switch (o.kind) {
        case SimEvent::Kind::CleanBirth:
            bump(s, +1);
            break;
        case SimEvent::Kind::OneMutant: {
            int ge = graph_.out_edges[v][o.e1];
            ev.edge1 = ge;
            bump(species_route_[s][o.e1], +1);
            ++k_one_[ge];
            break;
        }
        case SimEvent::Kind::TwoMutantSame: {
            int ge = graph_.out_edges[v][o.e1];
            ev.edge1 = ev.edge2 = ge;
            bump(s, -1);
            bump(species_route_[s][o.e1], +2);
            h_two_[ge] += 2;
            break;
        }
        case SimEvent::Kind::TwoMutantDistinct: {
            int g1 = graph_.out_edges[v][o.e1];
            int g2 = graph_.out_edges[v][o.e2];
            ev.edge1 = g1;
            ev.edge2 = g2;
            bump(s, -1);
            bump(species_route_[s][o.e1], +1);
            bump(species_route_[s][o.e2], +1);
            ++h_two_[g1];
            ++h_two_[g2];
            break;
        }
        case SimEvent::Kind::Death:
            break;  // unreachable
    }
    return ev;
}

std::optional<SimEvent> Simulation::step(Rng& rng) {
    if (total_ == 0) return std::nullopt;
    advance_clock(rng);
    return apply_event(rng);
}

bool Simulation::counts_consistent() const {
    std::vector<long long> sums(counts_.size(), 0);
    for (size_t s = 0; s < species_count_.size(); ++s) {
        if (species_count_[s] < 0) return false;
        sums[species_trait_[s]] += species_count_[s];
    }
    long long tot = 0;
    for (size_t v = 0; v < counts_.size(); ++v) {
        if (sums[v] != counts_[v]) return false;
        tot += counts_[v];
    }
    return tot == total_;
}

namespace {

struct PendingObs {
    double time;
    std::uint64_t seq;
    ObsRecord::Kind kind;
    char rho;
    double t, s;

    bool operator>(const PendingObs& other) const {
        return std::tie(time, seq) > std::tie(other.time, other.seq);
    }
};

struct ThresholdTrack {
    char rho;
    std::vector<double> ts;  // ascending
    std::vector<long long> levels;
    size_t next = 0;
    bool unreachable = false;  // watched population can never cross again
};

long long level_for(long long n, double t) {
    if (t <= 0) return 1;
    return static_cast<long long>(std::ceil(std::pow(static_cast<double>(n), t) - 1e-9));
}

}  // namespace

const ObsRecord* Trajectory::find_deterministic(double t, double s) const {
    for (const auto& rec : observations)
        if (rec.kind == ObsRecord::Kind::Deterministic && std::abs(rec.t - t) < 1e-12 &&
            std::abs(rec.s - s) < 1e-12)
            return &rec;
    return nullptr;
}

std::optional<double> Trajectory::crossing_time(char rho, double t) const {
    for (const auto& c : crossings)
        if (c.rho == rho && std::abs(c.t - t) < 1e-12)
            return std::isfinite(c.time) ? std::optional<double>(c.time) : std::nullopt;
    return std::nullopt;
}

Trajectory run(const TraitGraph& graph, const ScalingParams& scaling, const RunConfig& config,
               Rng& rng) {
    const double lambda0 = to_double(graph.lambda0());
    bool need_log = config.keep_event_log;
    for (const auto& ro : config.random_obs)
        if (ro.s < 0) need_log = true;
    if (config.snapshot_interval > 0 && !std::isfinite(config.horizon))
        throw std::invalid_argument("snapshot grid needs a finite horizon");

    Simulation sim(graph, scaling, config.sim);
    Trajectory traj;

    std::priority_queue<PendingObs, std::vector<PendingObs>, std::greater<>> queue;
    std::uint64_t seq = 0;
    for (const auto& [t, s] : config.det_obs) {
        double when = deterministic_time(scaling, lambda0, t) + s;
        if (when < 0) throw std::invalid_argument("deterministic observation before time 0");
        queue.push({when, seq++, ObsRecord::Kind::Deterministic, 0, t, s});
    }
    double next_snapshot =
        config.snapshot_interval > 0 ? 0.0 : std::numeric_limits<double>::infinity();

    std::vector<ThresholdTrack> tracks;
    for (char rho : {'e', 's', 't'}) {
        const std::vector<double>* src = rho == 'e'   ? &config.eta_thresholds
                                         : rho == 's' ? &config.sigma_thresholds
                                                      : &config.tau_thresholds;
        if (src->empty()) continue;
        if (rho == 't' && !config.sim.walk_mode)
            throw std::invalid_argument("tau thresholds require walk mode");
        ThresholdTrack tr;
        tr.rho = rho;
        tr.ts = *src;
        std::sort(tr.ts.begin(), tr.ts.end());
        for (double t : tr.ts) tr.levels.push_back(level_for(scaling.n, t));
        tracks.push_back(std::move(tr));
    }

    struct DeferredLookback {
        char rho;
        double t, s, time;
    };
    std::vector<DeferredLookback> lookbacks;

    auto emit = [&](ObsRecord::Kind kind, char rho, double t, double s, double time, bool valid) {
        ObsRecord rec;
        rec.kind = kind;
        rec.rho = rho;
        rec.t = t;
        rec.s = s;
        rec.time = time;
        rec.valid = valid;
        rec.counts = sim.counts();
        traj.observations.push_back(std::move(rec));
    };

    auto on_crossing = [&](char rho, double t, double time) {
        traj.crossings.push_back({rho, t, level_for(scaling.n, t), time});
        for (const auto& ro : config.random_obs) {
            if (ro.rho != rho || std::abs(ro.t - t) > 1e-12) continue;
            if (ro.s >= 0)
                queue.push({time + ro.s, seq++, ObsRecord::Kind::Random, rho, ro.t, ro.s});
            else
                lookbacks.push_back({rho, ro.t, ro.s, time + ro.s});
        }
    };

    const bool wild_can_refill = !graph.in_edges[0].empty();
    auto check_crossings = [&]() {
        for (auto& tr : tracks) {
            long long value = tr.rho == 'e'   ? sim.counts()[0]
                              : tr.rho == 's' ? sim.total()
                                              : sim.primary();
            while (tr.next < tr.levels.size() && value >= tr.levels[tr.next]) {
                on_crossing(tr.rho, tr.ts[tr.next], sim.time());
                ++tr.next;
            }
            // a dead wild type without incoming edges can never recover, and
            // the primary lineage has no influx at all: the remaining levels
            // are unreachable
            if (value == 0 && (tr.rho == 't' || (tr.rho == 'e' && !wild_can_refill)))
                tr.unreachable = true;
        }
    };

    auto thresholds_done = [&]() {
        for (const auto& tr : tracks)
            if (!tr.unreachable && tr.next < tr.levels.size()) return false;
        return true;
    };

    // records every pending observation with time < cap (or <= cap when
    // inclusive) against the current population state
    auto drain = [&](double cap, bool inclusive) {
        while (!queue.empty()) {
            const PendingObs& p = queue.top();
            if (inclusive ? p.time > cap : p.time >= cap) break;
            emit(p.kind, p.rho, p.t, p.s, p.time, true);
            queue.pop();
        }
        double snap_cap = std::min(cap, config.horizon);
        while (next_snapshot < snap_cap || (inclusive && next_snapshot == snap_cap)) {
            emit(ObsRecord::Kind::Snapshot, 0, 0, 0, next_snapshot, true);
            next_snapshot += config.snapshot_interval;
        }
    };

    check_crossings();  // levels with t <= 0 are crossed at time zero
    drain(0.0, true);

    const std::uint64_t consistency_mask = (1u << 12) - 1;
    double end_time = 0;
    bool ended = false;
    while (!ended) {
        if (traj.events >= config.budget) {
            traj.budget_exceeded = true;
            break;
        }
        if (config.stop_when_observed && queue.empty() && thresholds_done() &&
            !(config.snapshot_interval > 0))
            break;
        if (sim.total() == 0) {
            traj.extinct = true;
            // the all-zero state is absorbing; pending observations see it
            drain(std::numeric_limits<double>::infinity(), false);
            break;
        }

        double t_event = sim.advance_clock(rng);
        if (t_event > config.horizon) {
            drain(config.horizon, true);
            end_time = config.horizon;
            ended = true;
            break;
        }
        // observations scheduled strictly before the event see the old state
        drain(t_event, false);

        SimEvent ev = sim.apply_event(rng);
        ++traj.events;
        if (need_log) {
            switch (ev.kind) {
                case SimEvent::Kind::Death:
                    traj.event_log.push_back({ev.time, ev.trait, -1});
                    break;
                case SimEvent::Kind::CleanBirth:
                    traj.event_log.push_back({ev.time, ev.trait, +1});
                    break;
                case SimEvent::Kind::OneMutant:
                    traj.event_log.push_back({ev.time, graph.edges[ev.edge1].to, +1});
                    break;
                case SimEvent::Kind::TwoMutantSame:
                    traj.event_log.push_back({ev.time, ev.trait, -1});
                    traj.event_log.push_back({ev.time, graph.edges[ev.edge1].to, +2});
                    break;
                case SimEvent::Kind::TwoMutantDistinct:
                    traj.event_log.push_back({ev.time, ev.trait, -1});
                    traj.event_log.push_back({ev.time, graph.edges[ev.edge1].to, +1});
                    traj.event_log.push_back({ev.time, graph.edges[ev.edge2].to, +1});
                    break;
            }
        }

        check_crossings();
        drain(sim.time(), true);  // observations landing exactly on the event see the new state

        if ((traj.events & consistency_mask) == 0 && !sim.counts_consistent())
            throw std::logic_error("trait counts diverged from the species decomposition");
    }

    traj.end_time = ended ? end_time : sim.time();
    traj.final_counts = sim.counts();
    traj.k_one = sim.one_mutant_events();
    traj.h_two = sim.double_mutant_daughters();
    if (config.sim.walk_mode) {
        for (int s = 0; s < sim.num_species(); ++s) {
            traj.species_walks.push_back(sim.species_walk(s));
            traj.species_final.push_back(sim.species_count(s));
            traj.species_remainder.push_back(sim.species_is_remainder(s) ? 1 : 0);
        }
    }

    // random observations whose anchor crossing never happened
    for (const auto& ro : config.random_obs) {
        bool crossed = false;
        for (const auto& c : traj.crossings)
            if (c.rho == ro.rho && std::abs(c.t - ro.t) < 1e-12 && std::isfinite(c.time))
                crossed = true;
        if (!crossed) {
            ObsRecord rec;
            rec.kind = ObsRecord::Kind::Random;
            rec.rho = ro.rho;
            rec.t = ro.t;
            rec.s = ro.s;
            rec.time = std::numeric_limits<double>::infinity();
            rec.valid = false;
            rec.counts.assign(graph.num_vertices, 0);
            traj.observations.push_back(std::move(rec));
        }
    }
    // negative-s random observations resolved from the retained log
    for (const auto& lb : lookbacks) {
        ObsRecord rec;
        rec.kind = ObsRecord::Kind::Random;
        rec.rho = lb.rho;
        rec.t = lb.t;
        rec.s = lb.s;
        rec.time = lb.time;
        rec.valid = true;
        rec.counts = counts_at(traj, graph.num_vertices, lb.time);
        traj.observations.push_back(std::move(rec));
    }
    // never-crossed thresholds recorded as +inf
    for (const auto& tr : tracks)
        for (size_t i = tr.next; i < tr.levels.size(); ++i)
            traj.crossings.push_back(
                {tr.rho, tr.ts[i], tr.levels[i], std::numeric_limits<double>::infinity()});
    if (!config.keep_event_log) traj.event_log.clear();
    return traj;
}

double stochastic_exponent(const Trajectory& traj, const ScalingParams& scaling, double lambda0,
                           TraitId v, double t) {
    const ObsRecord* rec = traj.find_deterministic(t, 0.0);
    if (!rec) throw HorizonExceeded("no deterministic observation at the requested t");
    double z = static_cast<double>(rec->counts[v]);
    double logp = z > 1 ? std::log(z) : 0.0;
    return lambda0 * logp / scaling.log_n;
}

std::vector<long long> counts_at(const Trajectory& traj, int num_traits, double time) {
    std::vector<long long> counts(num_traits, 0);
    counts[0] = 1;
    if (time < 0) return counts;
    for (const auto& rec : traj.event_log) {
        if (rec.time > time) break;
        counts[rec.trait] += rec.delta;
    }
    return counts;
}

}  // namespace branchwalk
