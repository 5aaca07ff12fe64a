#include "branchwalk/predictor.hpp"

#include <cmath>

namespace branchwalk {

WLaw w_law(const TraitGraph& graph) {
    WLaw law;
    const double alpha0 = to_double(graph.birth[0]);
    const double lambda0 = to_double(graph.lambda0());
    if (!(lambda0 > 0)) throw std::invalid_argument("lambda(0) must be positive");
    law.atom_at_zero = to_double(graph.death[0]) / alpha0;
    law.exp_rate = lambda0 / alpha0;
    return law;
}

double sample_W(Rng& rng, const WLaw& law) {
    if (law.atom_at_zero > 0 && rng.uniform() <= law.atom_at_zero) return 0.0;
    return rng.exponential(law.exp_rate);
}

TraitAsymptotics TraitAsymptotics::from_graph(const TraitGraph& graph, TraitId v) {
    TraitAsymptotics out;
    out.v = v;
    AdmissibleSet adm = admissible_set(graph, v);
    out.t_v = adm.t_v;
    out.theta_v = adm.theta_v;
    out.lambda0 = to_double(graph.lambda0());
    // weight sums are defined only under the non-increasing condition; the
    // normalizer needs just t(v) and theta(v)
    if (check_non_increasing(graph)) {
        out.has_weights = true;
        for (const Walk& w : adm.walks) out.w_v += walk_weight(graph, w).weight;
    }
    return out;
}

NormalizerRegime normalizer_regime(const ScalingParams& scaling, const TraitAsymptotics& trait,
                                   double t) {
    const double tv = to_double(trait.t_v);
    if (t < tv - 1.0 / scaling.h_n) return NormalizerRegime::PreBirth;
    if (t < tv) return NormalizerRegime::Transition;
    return NormalizerRegime::Growth;
}

double normalizer(const ScalingParams& scaling, const TraitAsymptotics& trait, double t, double s) {
    switch (normalizer_regime(scaling, trait, t)) {
        case NormalizerRegime::PreBirth:
            return 1.0;
        case NormalizerRegime::Transition:
            return scaling.psi_n * std::pow(scaling.log_n, trait.theta_v - 1);
        case NormalizerRegime::Growth:
        default:
            return std::pow(static_cast<double>(scaling.n), t - to_double(trait.t_v)) *
                   std::pow(scaling.log_n, trait.theta_v) * std::exp(trait.lambda0 * s);
    }
}

double predict_deterministic(const TraitGraph& graph, const ScalingParams& scaling,
                             const TraitAsymptotics& trait, double t, double s, double w_sample) {
    if (!check_non_increasing(graph))
        throw NotNonIncreasing("prediction requires non-increasing growth rates");
    return w_sample * trait.w_v.eval(t) * normalizer(scaling, trait, t, s);
}

double predict_random_scale(const TraitGraph& graph, const ScalingParams& scaling,
                            const TraitAsymptotics& trait, double t, double s) {
    if (!check_non_increasing(graph))
        throw NotNonIncreasing("prediction requires non-increasing growth rates");
    return trait.w_v.eval(t) * normalizer(scaling, trait, t, s);
}

double predicted_stopping_time(const TraitGraph& graph, const ScalingParams& scaling, double t,
                               double w) {
    if (w <= 0) throw ExtinctLineage("stopping-time prediction undefined for w = 0");
    const double lambda0 = to_double(graph.lambda0());
    return deterministic_time(scaling, lambda0, t) - std::log(w) / lambda0;
}

double mean_law_weight(const TraitGraph& graph, TraitId v, double t) {
    if (!check_non_increasing(graph))
        throw NotNonIncreasing("mean-law weight requires non-increasing growth rates");
    AdmissibleSet adm = admissible_set(graph, v);
    double sum = 0;
    for (const Walk& walk : adm.walks) {
        WalkWeight ww = walk_weight(graph, walk);
        double factorial = 1;
        for (int k = 2; k <= walk.theta(); ++k) factorial *= k;
        sum += to_double(ww.const_del) * to_double(ww.const_neut) *
               std::pow(t, walk.theta()) / factorial;
    }
    return sum;
}

}  // namespace branchwalk
