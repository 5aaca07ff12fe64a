#pragma once

#include <stdexcept>

#include "branchwalk/polynomial.hpp"
#include "branchwalk/rng.hpp"
#include "branchwalk/scaling.hpp"
#include "branchwalk/walks.hpp"

namespace branchwalk {

struct ExtinctLineage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Law of the long-run wild-type martingale limit W: an atom at zero of mass
// beta(0)/alpha(0) and an exponential of rate lambda(0)/alpha(0) on (0, inf).
struct WLaw {
    double atom_at_zero = 0;
    double exp_rate = 0;

    double survival() const { return 1.0 - atom_at_zero; }
    double conditional_mean() const { return 1.0 / exp_rate; }  // E[W | W > 0]
};

WLaw w_law(const TraitGraph& graph);

double sample_W(Rng& rng, const WLaw& law);

// Per-trait inputs of the quantitative predictions.
struct TraitAsymptotics {
    TraitId v = 0;
    Rational t_v;
    int theta_v = 0;
    double lambda0 = 0;
    bool has_weights = false;
    PiecewisePolynomial w_v;  // limiting weight sum over admissible walks

    static TraitAsymptotics from_graph(const TraitGraph& graph, TraitId v);
};

enum class NormalizerRegime { PreBirth, Transition, Growth };

NormalizerRegime normalizer_regime(const ScalingParams& scaling, const TraitAsymptotics& trait,
                                   double t);

// Three-regime normalizer: 1 before t(v) - 1/h_n; psi_n log^{theta-1}(n) on
// the transition window; n^{t-t(v)} log^theta(n) e^{lambda(0) s} from t(v) on.
double normalizer(const ScalingParams& scaling, const TraitAsymptotics& trait, double t, double s);

// Predicted absolute size on the deterministic time scale given a realization
// (or conditional mean) of W: w_sample * w_v(t) * d_v(t, s).
double predict_deterministic(const TraitGraph& graph, const ScalingParams& scaling,
                             const TraitAsymptotics& trait, double t, double s, double w_sample);

// Limit on the random time scale, conditional on survival: w_v(t) * d_v(t, s).
double predict_random_scale(const TraitGraph& graph, const ScalingParams& scaling,
                            const TraitAsymptotics& trait, double t, double s);

// Deterministic approximation of the stopping time: t log(n)/lambda(0) - log(w)/lambda(0).
double predicted_stopping_time(const TraitGraph& graph, const ScalingParams& scaling, double t,
                               double w);

// First-moment weight: E[Z_v(t_t)/d_v(t,0)] tends to E[W] times this value.
// The expectation integrates mutant influx over the whole history, so each
// neutral layer contributes a full power of t:
//   sum over admissible walks of w_del * w_neut * t^theta / theta!.
// This differs from the in-probability limit w_v(t), whose integrals start at
// the walks' cumulative labels; the ratio Z_v/d_v is not uniformly
// integrable, so sample means track this value rather than E[W] * w_v(t).
double mean_law_weight(const TraitGraph& graph, TraitId v, double t);

}  // namespace branchwalk
