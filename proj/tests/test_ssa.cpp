#include <doctest.h>

#include <cmath>

#include "branchwalk/ssa.hpp"
#include "branchwalk/stats.hpp"

using namespace branchwalk;

namespace {

TraitGraph neutral_chain() {
    return make_graph(2, {{0, 1, Rational(1), Rational(1)}}, {Rational(1), Rational(1)},
                      {Rational(1, 2), Rational(1, 2)});
}

TraitGraph single_trait(Rational alpha, Rational beta) {
    return make_graph(1, {}, {alpha}, {beta});
}

}  // namespace

TEST_CASE("birth channels: two-trait spec arithmetic") {
    // mu = 0.01: one-mutant 2*0.01*0.99 = 0.0198, two-mutant 1e-4, clean 0.9801
    BirthChannels<double> ch = birth_channels<double>({0.01});
    CHECK(ch.clean == doctest::Approx(0.9801));
    CHECK(ch.one[0] == doctest::Approx(0.0198));
    CHECK(ch.two_same[0] == doctest::Approx(1e-4));
    CHECK(ch.sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("birth channels: exact rational identity") {
    std::vector<std::vector<Rational>> cases = {
        {},
        {Rational(1, 100)},
        {Rational(1, 7), Rational(2, 7)},
        {Rational(1, 3), Rational(1, 3), Rational(1, 3)},
    };
    for (const auto& mus : cases) CHECK(birth_channels(mus).sum() == Rational(1));
}

TEST_CASE("waiting times and channel picks") {
    // z=(2,0), beta(0)=1/2: death channel rate 1; total rate 3
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 10000, 1);
    Simulation sim(g, sc);
    CHECK(sim.total() == 1);
    CHECK(sim.counts()[0] == 1);

    // mean waiting time from a single cell is 1/(alpha+beta) = 2/3
    Rng rng(7);
    const int N = 20000;
    double sum = 0;
    for (int i = 0; i < N; ++i) {
        Simulation fresh(g, sc);
        double t0 = fresh.time();
        fresh.step(rng);
        sum += fresh.time() - t0;
    }
    double mean = sum / N;
    CHECK(mean == doctest::Approx(2.0 / 3.0).epsilon(0.03));
}

TEST_CASE("pure birth process has exponential mean growth") {
    TraitGraph g = single_trait(Rational(1), Rational(0));
    ScalingParams sc = make_scaling(g, 100, 0);
    const double T = 4.0;
    RunConfig rc;
    rc.horizon = T;
    rc.stop_when_observed = false;
    const int R = 2000;
    std::vector<double> finals;
    for (int r = 0; r < R; ++r) {
        Rng rng = replicate_stream(555, r);
        Trajectory traj = run(g, sc, rc, rng);
        finals.push_back(static_cast<double>(traj.final_counts[0]));
    }
    SampleSummary sum = summarize(finals);
    CHECK(std::abs(sum.mean - std::exp(T)) <= 3 * sum.std_error);
}

TEST_CASE("threshold at t=0 crosses immediately") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 100, 1);
    RunConfig rc;
    rc.eta_thresholds = {0.0};
    Rng rng(3);
    Trajectory traj = run(g, sc, rc, rng);
    auto eta0 = traj.crossing_time('e', 0.0);
    REQUIRE(eta0.has_value());
    CHECK(*eta0 == 0.0);
}

TEST_CASE("sigma is never after eta") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 100, 1);
    for (int r = 0; r < 50; ++r) {
        RunConfig rc;
        rc.eta_thresholds = {1.0};
        rc.sigma_thresholds = {1.0};
        Rng rng = replicate_stream(901, r);
        Trajectory traj = run(g, sc, rc, rng);
        auto eta = traj.crossing_time('e', 1.0);
        auto sigma = traj.crossing_time('s', 1.0);
        if (eta) {
            REQUIRE(sigma.has_value());
            CHECK(*sigma <= *eta);
        }
    }
}

TEST_CASE("extinction is recorded and observations see the empty state") {
    TraitGraph g = single_trait(Rational(1, 10), Rational(2));  // heavily subcritical
    // bypass the lambda(0)>0 convention deliberately: simulation itself only
    // needs rates, so force a dying population through a legal graph instead
    TraitGraph dying = single_trait(Rational(1, 2), Rational(1, 4));
    (void)g;
    ScalingParams sc = make_scaling(dying, 100, 0);
    RunConfig rc;
    rc.det_obs = {{2.0, 0.0}};
    int extinct_seen = 0;
    for (int r = 0; r < 200; ++r) {
        Rng rng = replicate_stream(77, r);
        Trajectory traj = run(dying, sc, rc, rng);
        if (traj.extinct) {
            ++extinct_seen;
            const ObsRecord* rec = traj.find_deterministic(2.0, 0.0);
            REQUIRE(rec != nullptr);
            CHECK(rec->counts[0] == 0);
        }
    }
    CHECK(extinct_seen > 0);  // extinction probability is 1/2 here
}

TEST_CASE("event budget flag") {
    TraitGraph g = single_trait(Rational(1), Rational(0));
    ScalingParams sc = make_scaling(g, 100, 0);
    RunConfig rc;
    rc.horizon = 100.0;
    rc.stop_when_observed = false;
    rc.budget = 50;
    Rng rng(5);
    Trajectory traj = run(g, sc, rc, rng);
    CHECK(traj.budget_exceeded);
    CHECK(traj.events == 50);
}

TEST_CASE("stochastic exponent from deterministic observations") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 10000, 1);
    RunConfig rc;
    rc.det_obs = {{0.5, 0.0}};
    Rng rng(8);
    Trajectory traj = run(g, sc, rc, rng);
    const ObsRecord* rec = traj.find_deterministic(0.5, 0.0);
    REQUIRE(rec);
    double x = stochastic_exponent(traj, sc, 0.5, 0, 0.5);
    if (rec->counts[0] <= 1)
        CHECK(x == 0.0);
    else
        CHECK(x == doctest::Approx(0.5 * std::log(static_cast<double>(rec->counts[0])) /
                                   sc.log_n));
    CHECK_THROWS_AS(stochastic_exponent(traj, sc, 0.5, 0, 0.9), HorizonExceeded);
}

TEST_CASE("event log reconstructs the final counts") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 50, 1);
    RunConfig rc;
    rc.horizon = 8.0;
    rc.stop_when_observed = false;
    rc.keep_event_log = true;
    Rng rng(12);
    Trajectory traj = run(g, sc, rc, rng);
    auto counts = counts_at(traj, 2, traj.end_time);
    CHECK(counts == traj.final_counts);
    // lookback before the first event gives the initial state
    auto initial = counts_at(traj, 2, -1.0);
    CHECK(initial[0] == 1);
    CHECK(initial[1] == 0);
}

TEST_CASE("negative-s random observation via lookback") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 100, 1);
    RunConfig rc;
    rc.eta_thresholds = {0.5};
    rc.random_obs = {{'e', 0.5, -1.0}, {'e', 0.5, 0.0}};
    Rng rng(21);
    Trajectory traj = run(g, sc, rc, rng);
    auto eta = traj.crossing_time('e', 0.5);
    if (eta) {
        int found = 0;
        for (const auto& rec : traj.observations)
            if (rec.kind == ObsRecord::Kind::Random && rec.valid) {
                ++found;
                if (rec.s < 0) CHECK(rec.time == doctest::Approx(*eta - 1.0));
            }
        CHECK(found == 2);
    }
}

TEST_CASE("walk mode: counts decompose over tracked walks and remainders") {
    TraitGraph cyc = make_graph(
        2, {{0, 1, Rational(1), Rational(1)}, {1, 0, Rational(1), Rational(1)}},
        {Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)});
    ScalingParams sc = make_scaling(cyc, 30, 1);
    RunConfig rc;
    rc.sim.walk_mode = true;
    rc.sim.extra_visits = 1;
    rc.horizon = 10.0;
    rc.stop_when_observed = false;
    rc.tau_thresholds = {0.5};
    Rng rng(31);
    Trajectory traj = run(cyc, sc, rc, rng);
    REQUIRE(!traj.species_walks.empty());
    std::vector<long long> sums(2, 0);
    for (size_t s = 0; s < traj.species_walks.size(); ++s)
        sums[traj.species_walks[s].back()] += traj.species_final[s];
    CHECK(sums[0] == traj.final_counts[0]);
    CHECK(sums[1] == traj.final_counts[1]);
}

TEST_CASE("walk mode tracks the primary lineage separately from returns") {
    TraitGraph cyc = make_graph(
        2, {{0, 1, Rational(1), Rational(1)}, {1, 0, Rational(1), Rational(1)}},
        {Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)});
    ScalingParams sc = make_scaling(cyc, 30, 1);
    SimOptions opt;
    opt.walk_mode = true;
    opt.extra_visits = 1;
    Simulation sim(cyc, sc, opt);
    CHECK(sim.primary() == 1);
    // species: primary, walks, and one remainder per trait
    int remainders = 0;
    for (int s = 0; s < sim.num_species(); ++s) remainders += sim.species_is_remainder(s);
    CHECK(remainders == 2);
    CHECK(sim.counts_consistent());
}

TEST_CASE("mutation counters tally the sampled events") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 10, 1);  // heavy mutation: mu_n = 0.1
    Simulation sim(g, sc);
    Rng rng(41);
    std::uint64_t one = 0, two_daughters = 0;
    for (int i = 0; i < 20000; ++i) {
        auto ev = sim.step(rng);
        if (!ev) break;
        if (ev->kind == SimEvent::Kind::OneMutant) ++one;
        if (ev->kind == SimEvent::Kind::TwoMutantSame) two_daughters += 2;
        if (ev->kind == SimEvent::Kind::TwoMutantDistinct) two_daughters += 1;  // per edge
    }
    CHECK(sim.one_mutant_events()[0] == one);
    CHECK(sim.double_mutant_daughters()[0] == two_daughters);
    CHECK(sim.counts_consistent());
}

TEST_CASE("martingale limit statistic matches the W law at a deep horizon") {
    // mu = 0: e^{-lambda T} Z(T) vs Ber(lambda/alpha) x Exp(lambda/alpha),
    // with e^{lambda T} above 1e3
    TraitGraph g = single_trait(Rational(1), Rational(1, 2));
    ScalingParams sc = make_scaling(g, 100, 0);
    const double lambda0 = 0.5, T = 15.0;
    RunConfig rc;
    rc.horizon = T;
    rc.stop_when_observed = false;
    const int R = 4000;
    std::vector<double> positive;
    int zeros = 0;
    for (int r = 0; r < R; ++r) {
        Rng rng = replicate_stream(808, r);
        Trajectory traj = run(g, sc, rc, rng);
        double w = std::exp(-lambda0 * T) * static_cast<double>(traj.final_counts[0]);
        if (w <= 0)
            ++zeros;
        else
            positive.push_back(w);
    }
    double atom = static_cast<double>(zeros) / R;
    CHECK(binomial_within_ci(atom, 0.5, R, 2.5758));
    CHECK(ks_test_exponential(positive, 0.5).p_value > 0.01);
}

TEST_CASE("wild-type mean follows the perturbed growth rate") {
    // lambda^(n)(0) = lambda(0) - 2 alpha(0) mubar_n; chunky mutation at n=10
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 10, 1);
    const double lambda_n = 0.5 - 2.0 * 1.0 * sc.mu_bar[0];
    const double T = 4.0;
    RunConfig rc;
    rc.horizon = T;
    rc.stop_when_observed = false;
    std::vector<double> z0;
    for (int r = 0; r < 4000; ++r) {
        Rng rng = replicate_stream(606, r);
        Trajectory traj = run(g, sc, rc, rng);
        z0.push_back(static_cast<double>(traj.final_counts[0]));
    }
    SampleSummary sum = summarize(z0);
    CHECK(std::abs(sum.mean - std::exp(lambda_n * T)) <= 3 * sum.std_error);
}

TEST_CASE("expectation bound on mutant subpopulations (mono chain)") {
    // E[Z_i(u)] <= C_i mu_prod u^theta e^{lambda0 u} with
    // C_i = prod 2 alpha (1 neutral, 1/(lambda0-lambda) deleterious)
    auto check_chain = [](const TraitGraph& g, double C1, int theta) {
        ScalingParams sc = make_scaling(g, 20, 1);
        const double mu_prod = sc.edge_mu_n[0];
        for (double u : {3.0, 5.0}) {
            RunConfig rc;
            rc.horizon = u;
            rc.stop_when_observed = false;
            std::vector<double> z1;
            for (int r = 0; r < 3000; ++r) {
                Rng rng = replicate_stream(707 + static_cast<int>(u), r);
                Trajectory traj = run(g, sc, rc, rng);
                z1.push_back(static_cast<double>(traj.final_counts[1]));
            }
            SampleSummary sum = summarize(z1);
            double bound = C1 * mu_prod * std::pow(u, theta) * std::exp(0.5 * u);
            CHECK(sum.mean <= bound + 3 * sum.std_error);
        }
    };
    check_chain(neutral_chain(), 2.0, 1);  // C_1 = 2 alpha(0)
    TraitGraph del = make_graph(2, {{0, 1, Rational(1), Rational(1)}},
                                {Rational(1), Rational(1)}, {Rational(1, 2), Rational(3, 4)});
    check_chain(del, 2.0 / (0.5 - 0.25), 0);  // C_1 = 2 alpha(0)/(lambda0-lambda1)
}

TEST_CASE("event log net deltas reproduce final counts") {
    TraitGraph g = neutral_chain();
    ScalingParams sc = make_scaling(g, 10, 1);
    RunConfig rc;
    rc.horizon = 6.0;
    rc.stop_when_observed = false;
    rc.keep_event_log = true;
    Rng rng(42);
    Trajectory traj = run(g, sc, rc, rng);
    std::vector<long long> net{1, 0};
    for (const auto& rec : traj.event_log) net[rec.trait] += rec.delta;
    CHECK(net == traj.final_counts);
}
