#include <doctest.h>

#include <cmath>

#include "branchwalk/predictor.hpp"
#include "branchwalk/stats.hpp"

using namespace branchwalk;

namespace {

TraitGraph neutral_chain() {
    return make_graph(2, {{0, 1, Rational(1), Rational(1)}}, {Rational(1), Rational(1)},
                      {Rational(1, 2), Rational(1, 2)});
}

}  // namespace

TEST_CASE("W law from the wild-type rates") {
    WLaw law = w_law(neutral_chain());
    CHECK(law.atom_at_zero == doctest::Approx(0.5));
    CHECK(law.exp_rate == doctest::Approx(0.5));
    CHECK(law.conditional_mean() == doctest::Approx(2.0));

    TraitGraph pure_birth = make_graph(1, {}, {Rational(1)}, {Rational(0)});
    CHECK(w_law(pure_birth).atom_at_zero == 0.0);
}

TEST_CASE("sample_W matches its law") {
    WLaw law = w_law(neutral_chain());
    Rng rng(123);
    std::vector<double> draws;
    int zeros = 0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        double w = sample_W(rng, law);
        if (w == 0)
            ++zeros;
        else
            draws.push_back(w);
    }
    double atom = static_cast<double>(zeros) / N;
    CHECK(binomial_within_ci(atom, 0.5, N, 2.5758));
    KsResult ks = ks_test_exponential(draws, 0.5);
    CHECK(ks.p_value > 0.01);
    // conditional mean E[W | W > 0] = alpha0/lambda0 = 2
    CHECK(summarize(draws).mean == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("normalizer regimes per the three-window definition") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 100, 1);
    TraitAsymptotics trait = TraitAsymptotics::from_graph(g, 1);
    REQUIRE(trait.theta_v == 1);
    REQUIRE(to_double(trait.t_v) == 1.0);

    double early = 1.0 - 1.0 / sc.h_n - 0.01;
    CHECK(normalizer(sc, trait, early, 0.0) == 1.0);
    CHECK(normalizer_regime(sc, trait, early) == NormalizerRegime::PreBirth);

    double window = 1.0 - 0.5 / sc.h_n;
    CHECK(normalizer_regime(sc, trait, window) == NormalizerRegime::Transition);
    CHECK(normalizer(sc, trait, window, 0.0) ==
          doctest::Approx(sc.psi_n * std::pow(sc.log_n, 0)));

    // n=100, t(v)=1, theta=1, t=1.5, s=0: sqrt(100) * log(100) = 46.0517...
    CHECK(normalizer(sc, trait, 1.5, 0.0) == doctest::Approx(46.0517018599).epsilon(1e-9));

    // boundary values on each side: the normalizer is deliberately
    // discontinuous across regime boundaries
    double left = 1.0 - 1.0 / sc.h_n;
    CHECK(normalizer_regime(sc, trait, left) == NormalizerRegime::Transition);
    CHECK(normalizer(sc, trait, left - 1e-9, 0.0) == 1.0);
    CHECK(normalizer(sc, trait, left, 0.0) == doctest::Approx(sc.psi_n));
    CHECK(normalizer_regime(sc, trait, 1.0) == NormalizerRegime::Growth);
    CHECK(normalizer(sc, trait, 1.0 - 1e-9, 0.0) == doctest::Approx(sc.psi_n));
    CHECK(normalizer(sc, trait, 1.0, 0.0) == doctest::Approx(sc.log_n));

    // s-shift factorization in the growth regime
    double d0 = normalizer(sc, trait, 1.5, 0.0), d1 = normalizer(sc, trait, 1.5, 0.7);
    CHECK(d1 / d0 == doctest::Approx(std::exp(0.5 * 0.7)));
}

TEST_CASE("scaling defaults") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 10000, 1);
    double log_n = std::log(10000.0);
    CHECK(sc.log_n == doctest::Approx(log_n));
    CHECK(sc.phi_n == doctest::Approx(std::log(log_n)));
    CHECK(sc.h_n == doctest::Approx(log_n / (2 * std::log(log_n))));
    CHECK(sc.psi_n == doctest::Approx(std::pow(log_n, 0.75)));
    CHECK_THROWS(make_scaling(g, 1, 0));
}

TEST_CASE("deterministic predictions") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 100, 1);
    TraitAsymptotics trait = TraitAsymptotics::from_graph(g, 1);

    CHECK(predict_deterministic(g, sc, trait, 1.5, 0.0, 0.0) == 0.0);  // extinct lineage
    CHECK(predict_deterministic(g, sc, trait, 0.5, 0.0, 1.0) == 0.0);  // before t(v)

    // linear in the W realization
    double p1 = predict_deterministic(g, sc, trait, 1.5, 0.0, 1.0);
    double p3 = predict_deterministic(g, sc, trait, 1.5, 0.0, 3.0);
    CHECK(p3 == doctest::Approx(3 * p1));

    // random scale drops the W factor
    CHECK(predict_random_scale(g, sc, trait, 1.5, 0.0) == doctest::Approx(p1));

    TraitGraph sel = make_graph(2, {{0, 1, Rational(1), Rational(1)}},
                                {Rational(1), Rational(2)}, {Rational(1, 2), Rational(1, 2)});
    ScalingParams ssc = make_scaling(sel, 100, 0);
    TraitAsymptotics strait = TraitAsymptotics::from_graph(sel, 1);
    CHECK_THROWS_AS(predict_deterministic(sel, ssc, strait, 1.5, 0.0, 1.0), NotNonIncreasing);
}

TEST_CASE("golden-graph growth prediction combines weight, power, and log factors") {
    std::vector<Rational> birth(8, Rational(1)), death(8, Rational(1, 2));
    death[3] = Rational(3, 4);
    TraitGraph g = make_graph(8,
                              {{0, 1, Rational(1), Rational(1)},
                               {1, 2, Rational(2), Rational(1)},
                               {2, 3, Rational(1), Rational(1)},
                               {0, 4, Rational(2), Rational(1)},
                               {4, 3, Rational(2), Rational(1)},
                               {0, 5, Rational(1), Rational(1)},
                               {5, 6, Rational(2), Rational(1)},
                               {6, 7, Rational(2), Rational(1)},
                               {7, 3, Rational(2), Rational(1)}},
                              birth, death);
    ScalingParams sc = make_scaling(g, 10000, 3);
    TraitAsymptotics purple = TraitAsymptotics::from_graph(g, 3);
    REQUIRE(purple.theta_v == 2);
    // at t = 4 + 1/2: weight 128*(t^2/2 - t - 3/2) = 528, times n^{1/2} log^2(n)
    double expected = 0.7 * 528.0 * std::sqrt(10000.0) * std::pow(std::log(10000.0), 2);
    CHECK(predict_deterministic(g, sc, purple, 4.5, 0.0, 0.7) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("growth-regime scaling in n has the right log-log slope") {
    TraitGraph g = neutral_chain();
    TraitAsymptotics trait = TraitAsymptotics::from_graph(g, 1);
    const double t = 1.5, tv = 1.0;
    for (long long n : {100ll, 1000ll, 10000ll, 100000ll}) {
        ScalingParams sc = make_scaling(g, n, 1);
        double d = normalizer(sc, trait, t, 0.0);
        // remove the log factor analytically, then check the power of n
        double slope = std::log(d / std::pow(sc.log_n, trait.theta_v)) /
                       std::log(static_cast<double>(n));
        CHECK(slope == doctest::Approx(t - tv).epsilon(1e-9));
    }
}

TEST_CASE("mean-law weight carries full powers of t") {
    TraitGraph g = neutral_chain();
    // exact mean: E Z_1(t_t) = (2 a0 mu / l0) t log(n) n^{t-1}, so the
    // normalized first moment is 4t
    CHECK(mean_law_weight(g, 1, 1.5) == doctest::Approx(6.0));
    CHECK(mean_law_weight(g, 0, 5.0) == doctest::Approx(1.0));  // trivial walk

    // two neutral layers: t^2/2
    TraitGraph c3 = make_graph(3,
                               {{0, 1, Rational(1), Rational(1)}, {1, 2, Rational(1), Rational(1)}},
                               std::vector<Rational>(3, Rational(1)),
                               std::vector<Rational>(3, Rational(1, 2)));
    CHECK(mean_law_weight(c3, 2, 3.0) == doctest::Approx(16.0 * 9.0 / 2.0));

    TraitGraph sel = make_graph(2, {{0, 1, Rational(1), Rational(1)}},
                                {Rational(1), Rational(2)}, {Rational(1, 2), Rational(1, 2)});
    CHECK_THROWS_AS(mean_law_weight(sel, 1, 1.0), NotNonIncreasing);
}

TEST_CASE("predicted stopping time") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 100, 1);
    double tt = deterministic_time(sc, 0.5, 1.0);
    CHECK(predicted_stopping_time(g, sc, 1.0, 1.0) == doctest::Approx(tt));
    CHECK(predicted_stopping_time(g, sc, 1.0, std::exp(0.5)) == doctest::Approx(tt - 1.0));
    CHECK(predicted_stopping_time(g, sc, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(predicted_stopping_time(g, sc, 1.0, 0.0), ExtinctLineage);
}
