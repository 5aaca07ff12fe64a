#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "branchwalk/trait_graph.hpp"

namespace branchwalk {

struct NonPositiveWildGrowth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Continuous non-decreasing piecewise linear function on [0, inf):
// value(t) = values[i] + slopes[i] * (t - breakpoints[i]) for
// t in [breakpoints[i], breakpoints[i+1]), last slope extends to infinity.
// breakpoints[0] == 0.
struct PiecewiseLinear {
    std::vector<Rational> breakpoints;
    std::vector<Rational> values;
    std::vector<Rational> slopes;

    Rational eval(const Rational& t) const;
    double eval(double t) const;
    Rational final_slope() const { return slopes.back(); }

    // Drops breakpoints that do not change the slope.
    void simplify();

    friend bool operator==(const PiecewiseLinear& a, const PiecewiseLinear& b) {
        return a.breakpoints == b.breakpoints && a.values == b.values && a.slopes == b.slopes;
    }
};

PiecewiseLinear hinge(const Rational& slope, const Rational& kink);  // slope*(t-kink)_+

struct ExponentEvent {
    enum class Kind { Birth, SlopeTakeover };
    Kind kind;
    Rational time;
    TraitId vertex;                  // born trait, or the driving trait of a takeover
    std::vector<TraitId> nu;         // nu(v): triggering parents / captured targets
    std::vector<TraitId> nu_minus;   // targets ceded to a simultaneous faster driver
    std::vector<TraitId> nu_plus;    // drivers registered for a newborn
    Rational new_slope;
    bool intrinsic_tie = false;      // newborn slope equals both lambda(v) and the drive

    std::string describe() const;
};

struct ExponentResult {
    std::vector<PiecewiseLinear> x;   // per trait
    std::vector<ExponentEvent> events;
    std::vector<Rational> step_times; // Delta_0 = 0 < Delta_1 < ... < Delta_k*
};

// Recursive slope-tracking construction of the limiting exponent functions.
// Exact rational arithmetic; simultaneous events are grouped by exact time
// equality. Requires lambda(0) > 0; no non-increasing assumption.
ExponentResult run_exponent_algorithm(const TraitGraph& graph);

// Closed form for a chain 0 -> 1 -> ... -> k: slope lambda_max(i) after
// tstar(i) = sum_j l(j,j+1) * lambda(0) / lambda_max(j).
std::vector<PiecewiseLinear> closed_form_mono_directional(const std::vector<Rational>& lambdas,
                                                        const std::vector<Rational>& labels);

// Closed form under non-increasing growth rates: lambda(0) * (t - t(v))_+.
std::vector<PiecewiseLinear> closed_form_non_increasing(const TraitGraph& graph);

}  // namespace branchwalk
