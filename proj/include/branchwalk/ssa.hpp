#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "branchwalk/rng.hpp"
#include "branchwalk/scaling.hpp"
#include "branchwalk/trait_graph.hpp"

namespace branchwalk {

struct HorizonExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Division outcome probabilities for one trait, per population unit:
// clean = (1-mubar)^2, one[i] = 2 mu_i (1-mubar), two_same[i] = mu_i^2,
// two_distinct[(i,j)] = 2 mu_i mu_j for i < j. Sums to 1 identically, which
// the exactness suite checks in rational arithmetic.
template <typename T>
struct BirthChannels {
    T clean{};
    std::vector<T> one;
    std::vector<T> two_same;
    std::vector<std::tuple<int, int, T>> two_distinct;

    T sum() const {
        T s = clean;
        for (const T& p : one) s += p;
        for (const T& p : two_same) s += p;
        for (const auto& [i, j, p] : two_distinct) s += p;
        return s;
    }
};

template <typename T>
BirthChannels<T> birth_channels(const std::vector<T>& mu) {
    BirthChannels<T> ch;
    T mubar{};
    for (const T& m : mu) mubar += m;
    T keep = T(1) - mubar;
    ch.clean = keep * keep;
    ch.one.reserve(mu.size());
    ch.two_same.reserve(mu.size());
    for (size_t i = 0; i < mu.size(); ++i) {
        ch.one.push_back(T(2) * mu[i] * keep);
        ch.two_same.push_back(mu[i] * mu[i]);
        for (size_t j = i + 1; j < mu.size(); ++j)
            ch.two_distinct.emplace_back(static_cast<int>(i), static_cast<int>(j),
                                         T(2) * mu[i] * mu[j]);
    }
    return ch;
}

struct SimOptions {
    bool walk_mode = false;
    int extra_visits = 0;  // walk-mode tracking depth beyond simple paths
};

struct SimEvent {
    enum class Kind { Death, CleanBirth, OneMutant, TwoMutantDistinct, TwoMutantSame };
    Kind kind;
    double time;
    TraitId trait;
    int edge1 = -1, edge2 = -1;
};

// Exact continuous-time simulation with trait-level aggregate rates.
// In walk mode each subpopulation indexed by a tracked mutation walk is
// simulated separately; mutants on untracked walks fold into a per-trait
// remainder bucket so the trait-count identity stays exact.
class Simulation {
  public:
    Simulation(const TraitGraph& graph, const ScalingParams& scaling, SimOptions options = {});

    // Samples and applies one event. Returns nullopt when the population is
    // extinct (total rate zero, absorbing).
    std::optional<SimEvent> step(Rng& rng);

    // The two halves of step(): sample the waiting time, then pick and apply
    // the event. Lets the driver observe the pre-event state.
    double advance_clock(Rng& rng);
    SimEvent apply_event(Rng& rng);

    double time() const { return time_; }
    const std::vector<long long>& counts() const { return counts_; }
    long long total() const { return total_; }
    long long primary() const { return species_count_[0]; }  // == counts()[0] in trait mode

    const std::vector<std::uint64_t>& one_mutant_events() const { return k_one_; }
    const std::vector<std::uint64_t>& double_mutant_daughters() const { return h_two_; }

    int num_species() const { return static_cast<int>(species_count_.size()); }
    long long species_count(int s) const { return species_count_[s]; }
    const std::vector<TraitId>& species_walk(int s) const { return species_walk_[s]; }
    bool species_is_remainder(int s) const { return species_remainder_[s]; }
    TraitId species_trait(int s) const { return species_trait_[s]; }

    // Exact identity between trait counts and the species decomposition.
    bool counts_consistent() const;

  private:
    void rebuild_total_rate();

    const TraitGraph& graph_;
    double time_ = 0;
    long long total_ = 0;
    std::vector<long long> counts_;  // per trait

    // per trait
    std::vector<double> alpha_, beta_, per_cell_rate_;
    struct Outcome {
        double upper;  // cumulative probability bound within the birth draw
        SimEvent::Kind kind;
        int e1, e2;  // local out-edge indices
    };
    std::vector<std::vector<Outcome>> outcomes_;

    // species = primary lineage + tracked walks + remainder buckets
    std::vector<long long> species_count_;
    std::vector<TraitId> species_trait_;
    std::vector<char> species_remainder_;
    std::vector<std::vector<TraitId>> species_walk_;
    std::vector<std::vector<int>> species_route_;  // per species, per local out-edge

    std::vector<std::uint64_t> k_one_, h_two_;  // per edge index
    double total_rate_ = 0;
    std::uint64_t events_since_rebuild_ = 0;
};

struct RandomObsSpec {
    char rho;  // 'e' wild type, 's' total, 't' primary lineage
    double t;
    double s;
};

struct RunConfig {
    double horizon = std::numeric_limits<double>::infinity();
    std::uint64_t budget = 100'000'000;
    SimOptions sim;
    std::vector<std::pair<double, double>> det_obs;  // (t, s) on the log-n scale
    std::vector<double> eta_thresholds;              // t exponents for the wild-type crossing
    std::vector<double> sigma_thresholds;            // total-population crossing
    std::vector<double> tau_thresholds;              // primary-lineage crossing (walk mode)
    std::vector<RandomObsSpec> random_obs;
    double snapshot_interval = 0;  // 0 disables grid snapshots
    bool keep_event_log = false;
    bool stop_when_observed = true;  // stop once every observation and crossing is resolved
};

struct ObsRecord {
    enum class Kind { Deterministic, Random, Snapshot };
    Kind kind;
    char rho = 0;  // for Kind::Random
    double t = 0, s = 0;
    double time = 0;
    bool valid = false;  // false when the anchor crossing never happened
    std::vector<long long> counts;
};

struct CrossingRecord {
    char rho;
    double t;
    long long level;
    double time;  // +inf when never crossed
};

struct EventRec {
    double time;
    std::int32_t trait;
    std::int8_t delta;
};

struct Trajectory {
    std::vector<ObsRecord> observations;
    std::vector<CrossingRecord> crossings;
    bool extinct = false;
    bool budget_exceeded = false;
    std::uint64_t events = 0;
    double end_time = 0;
    std::vector<long long> final_counts;
    std::vector<std::uint64_t> k_one, h_two;
    std::vector<EventRec> event_log;
    // walk-mode summary
    std::vector<std::vector<TraitId>> species_walks;
    std::vector<long long> species_final;
    std::vector<char> species_remainder;

    const ObsRecord* find_deterministic(double t, double s) const;
    std::optional<double> crossing_time(char rho, double t) const;
};

Trajectory run(const TraitGraph& graph, const ScalingParams& scaling, const RunConfig& config,
               Rng& rng);

// lambda(0) * log^+(Z_v) / log(n), read from the deterministic observation at
// (t, s=0). Throws HorizonExceeded when that observation is missing.
double stochastic_exponent(const Trajectory& traj, const ScalingParams& scaling, double lambda0,
                           TraitId v, double t);

// Piecewise-constant lookback over the retained event log.
std::vector<long long> counts_at(const Trajectory& traj, int num_traits, double time);

}  // namespace branchwalk
