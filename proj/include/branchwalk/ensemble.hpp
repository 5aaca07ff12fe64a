#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "branchwalk/predictor.hpp"
#include "branchwalk/ssa.hpp"
#include "branchwalk/stats.hpp"

namespace branchwalk {

struct EnsembleConfig {
    TraitGraph graph;
    std::vector<long long> n_values;
    int replicates = 2;
    std::uint64_t root_seed = 1;
    int threads = 1;

    std::vector<std::pair<double, double>> det_obs;  // (t, s)
    std::vector<RandomObsSpec> random_obs;
    std::vector<double> eta_thresholds;
    std::vector<double> sigma_thresholds;
    double horizon = std::numeric_limits<double>::infinity();
    std::uint64_t budget = 100'000'000;
    bool walk_mode = false;
    int extra_visits = 0;

    // statistical policy constants (documented defaults, overridable)
    double ks_p_floor = 0.01;
    double ci_z = 2.5758293035489004;  // two-sided 99%
    double trend_se_slack = 2.0;
    bool condition_on_survival = true;

    std::optional<double> phi_override, psi_override;
};

struct ObsRow {
    long long n;
    int replicate;
    char scale;  // 'd' deterministic, 'e'/'s'/'t' random scales
    int v;
    double t, s;
    long long count;
    double normalizer;
    double ratio;
    bool survived;  // wild type alive at the observation (deterministic scale)
    bool valid;     // anchor crossing happened (random scales)
};

struct CrossRow {
    long long n;
    int replicate;
    char rho;
    double t;
    double time;  // +inf when never crossed
};

struct ReplicateMeta {
    long long n;
    int replicate;
    bool extinct;
    bool budget_exceeded;
    bool wild_alive_at_end;
    std::uint64_t events;
};

struct EnsembleStats {
    std::vector<ObsRow> rows;
    std::vector<CrossRow> crossings;
    std::vector<ReplicateMeta> meta;
    std::vector<long long> n_values;
    int replicates = 0;

    std::vector<double> ratios(long long n, char scale, int v, double t, double s,
                               bool conditioned) const;
    std::vector<double> crossing_times(long long n, char rho, double t) const;
    double survival_fraction(long long n, double t, double s) const;
};

// Deterministic given the root seed, independent of the thread schedule.
EnsembleStats run_ensemble(const EnsembleConfig& config);

struct ComparisonCell {
    long long n;
    int v;
    char scale;
    double t, s;
    std::size_t total = 0, conditioned = 0;
    double mean_ratio = 0, se_ratio = 0;
    double predicted = 0;        // in-probability limit: E[W|W>0] * w_v(t) (or w_v(t))
    double mean_law = 0;         // first-moment value the sample mean tracks
    double rel_error = 0;
    int regime = 0;  // 1, 2, 3 per the normalizer
    int theta_v = 0;
    bool regime2_exceeds_bound = false;
    // the transition-window bound psi_n log^{theta-1}(n) is only meaningful
    // for theta >= 1; theta = 0 windows are flagged instead of bounded
    bool theta0_window = false;
};

struct ComparisonTrend {
    int v;
    char scale;
    double t, s;
    std::vector<long long> ns;
    std::vector<double> rel_errors;
    std::vector<double> rel_error_ses;
    bool decreasing = false;
};

struct ComparisonReport {
    std::vector<ComparisonCell> cells;
    std::vector<ComparisonTrend> trends;
    bool all_trends_decreasing = true;
};

// Conditional-on-survival sample means of Z_v / d_v against the first-order
// predictions: E[W | W>0] * w_v(t) on the deterministic scale, w_v(t) on the
// random scales.
ComparisonReport compare_first_order(const EnsembleStats& stats, const EnsembleConfig& config);

struct ExponentComparisonCell {
    long long n;
    int v;
    std::size_t surviving = 0;
    double mean_sup_dist = 0;
    double mean_late_slope = 0;
    double limit_slope = 0;
};

struct ExponentComparison {
    std::vector<ExponentComparisonCell> cells;
    bool extinct_all_zero = true;  // extinct replicates report X == 0 on the grid
};

// Empirical stochastic exponents on the deterministic (t, s=0) grid against
// the limiting piecewise-linear functions. The late window [lo, hi] selects
// the grid points entering the slope regression.
ExponentComparison compare_exponents(const EnsembleStats& stats, const EnsembleConfig& config,
                                     double window_lo, double window_hi);

struct WLawTest {
    double atom_fraction = 0;
    bool atom_ok = false;
    KsResult positive_part;
};

// Mixed-law test: the zero-atom mass against a binomial band and the positive
// part against the exponential component.
WLawTest ks_test_wlaw(const std::vector<double>& sample, const WLaw& law, double ci_z);

}  // namespace branchwalk
