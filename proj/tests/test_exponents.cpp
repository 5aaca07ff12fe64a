#include <doctest.h>

#include <random>
#include <set>

#include "branchwalk/exponents.hpp"
#include "branchwalk/walks.hpp"

using namespace branchwalk;

namespace {

TraitGraph chain(std::vector<Rational> lambdas, std::vector<Rational> labels) {
    std::vector<Rational> birth, death;
    for (const auto& l : lambdas) {
        Rational b = (l > 0 ? l : Rational(0)) + Rational(1);
        birth.push_back(b);
        death.push_back(b - l);
    }
    std::vector<TraitGraph::Edge> edges;
    for (size_t i = 0; i < labels.size(); ++i)
        edges.push_back({static_cast<int>(i), static_cast<int>(i) + 1, labels[i], Rational(1)});
    return make_graph(static_cast<int>(lambdas.size()), edges, birth, death);
}

}  // namespace

TEST_CASE("piecewise linear hinge and eval") {
    PiecewiseLinear f = hinge(Rational(2), Rational(3, 2));
    CHECK(f.eval(Rational(1)) == Rational(0));
    CHECK(f.eval(Rational(3, 2)) == Rational(0));
    CHECK(f.eval(Rational(2)) == Rational(1));
    CHECK(f.eval(2.5) == doctest::Approx(2.0));
}

TEST_CASE("golden-graph target limit is a lambda0 hinge at t=4") {
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
    ExponentResult res = run_exponent_algorithm(g);
    CHECK(res.x[3] == hinge(Rational(1, 2), Rational(4)));
    CHECK(res.x[0] == hinge(Rational(1, 2), Rational(0)));
}

TEST_CASE("mono-directional closed form, spec example") {
    // lambda = (1, 2, 1/2), labels (1, 1): slopes (1, 2, 2), kinks (0, 1, 3/2)
    auto out = closed_form_mono_directional({Rational(1), Rational(2), Rational(1, 2)},
                                          {Rational(1), Rational(1)});
    CHECK(out[0] == hinge(Rational(1), Rational(0)));
    CHECK(out[1] == hinge(Rational(2), Rational(1)));
    CHECK(out[2] == hinge(Rational(2), Rational(3, 2)));

    auto neutral = closed_form_mono_directional({Rational(1), Rational(1)}, {Rational(1)});
    CHECK(neutral[1] == hinge(Rational(1), Rational(1)));
}

TEST_CASE("algorithm matches the mono-directional closed form") {
    TraitGraph g = chain({Rational(1), Rational(2), Rational(1, 2)}, {Rational(1), Rational(1)});
    ExponentResult res = run_exponent_algorithm(g);
    auto closed = closed_form_mono_directional({Rational(1), Rational(2), Rational(1, 2)},
                                             {Rational(1), Rational(1)});
    for (int v = 0; v < 3; ++v) CHECK(res.x[v] == closed[v]);

    // deleterious tail grows at the driving rate lambda_max = lambda(0), not
    // its own rate
    TraitGraph h = chain({Rational(1), Rational(1, 2)}, {Rational(2)});
    ExponentResult hres = run_exponent_algorithm(h);
    CHECK(hres.x[1] == hinge(Rational(1), Rational(2)));
    auto closed2 = closed_form_mono_directional({Rational(1), Rational(1, 2)}, {Rational(2)});
    CHECK(hres.x[1] == closed2[1]);
}

TEST_CASE("closed form under non-increasing rates uses t(v)") {
    TraitGraph diamond = make_graph(4,
                                    {{0, 1, Rational(1), Rational(1)},
                                     {0, 2, Rational(3), Rational(1)},
                                     {1, 3, Rational(2), Rational(1)},
                                     {2, 3, Rational(1), Rational(1)}},
                                    std::vector<Rational>(4, Rational(1)),
                                    std::vector<Rational>(4, Rational(1, 2)));
    auto out = closed_form_non_increasing(diamond);
    CHECK(out[0] == hinge(Rational(1, 2), Rational(0)));
    CHECK(out[3] == hinge(Rational(1, 2), Rational(3)));  // min(1+2, 3+1)
    ExponentResult res = run_exponent_algorithm(diamond);
    for (int v = 0; v < 4; ++v) CHECK(res.x[v] == out[v]);
}

TEST_CASE("closed_form_non_increasing rejects selective graphs") {
    TraitGraph g = chain({Rational(1), Rational(2)}, {Rational(1)});
    CHECK_THROWS_AS(closed_form_non_increasing(g), NotNonIncreasing);
}

TEST_CASE("algorithm rejects non-positive wild growth") {
    TraitGraph g = make_graph(1, {}, {Rational(1)}, {Rational(1)});
    CHECK_THROWS_AS(run_exponent_algorithm(g), NonPositiveWildGrowth);
}

TEST_CASE("selective takeover raises the slope of an alive trait") {
    // wild (lambda 1) -> slow (1/2) early; driver (lambda 2) born later takes
    // over slow through the edge driver->slow at t = 2
    TraitGraph g = make_graph(3,
                              {{0, 1, Rational(1, 2), Rational(1)},
                               {0, 2, Rational(1), Rational(1)},
                               {2, 1, Rational(1, 2), Rational(1)}},
                              {Rational(6, 5), Rational(7, 10), Rational(11, 5)},
                              {Rational(1, 5), Rational(1, 5), Rational(1, 5)});
    ExponentResult res = run_exponent_algorithm(g);
    bool has_takeover = false;
    for (const auto& ev : res.events)
        has_takeover |= ev.kind == ExponentEvent::Kind::SlopeTakeover;
    CHECK(has_takeover);
    // x_slow: (t - 1/2)_+ until 2, then slope 2
    PiecewiseLinear expected;
    expected.breakpoints = {Rational(0), Rational(1, 2), Rational(2)};
    expected.values = {Rational(0), Rational(0), Rational(3, 2)};
    expected.slopes = {Rational(0), Rational(1), Rational(2)};
    CHECK(res.x[1] == expected);
    CHECK(res.x[2] == hinge(Rational(2), Rational(1)));
}

TEST_CASE("exponent functions are continuous, non-decreasing, slopes from the rate set") {
    std::mt19937 gen(11);
    std::uniform_int_distribution<int> nv_dist(2, 6), pick(0, 2), num(1, 4), den(1, 3);
    for (int trial = 0; trial < 40; ++trial) {
        int nv = nv_dist(gen);
        std::vector<Rational> birth{Rational(1)}, death{Rational(1, 2)};
        for (int v = 1; v < nv; ++v) {
            Rational lv;
            int m = pick(gen);
            if (m == 0)
                lv = Rational(1, 2);
            else if (m == 1)
                lv = Rational(1, 2) - Rational(num(gen), 2 * den(gen));
            else
                lv = Rational(1, 2) + Rational(num(gen), den(gen));
            Rational b = (lv > 0 ? lv : Rational(0)) + Rational(1);
            birth.push_back(b);
            death.push_back(b - lv);
        }
        std::vector<TraitGraph::Edge> edges;
        std::set<std::pair<int, int>> used;
        auto add = [&](int a, int b) {
            if (a == b || !used.insert({a, b}).second) return;
            edges.push_back({a, b, Rational(num(gen), den(gen)), Rational(1)});
        };
        for (int v = 1; v < nv; ++v) {
            std::uniform_int_distribution<int> parent(0, v - 1);
            add(parent(gen), v);
        }
        std::uniform_int_distribution<int> any(0, nv - 1);
        for (int i = 0; i < nv; ++i) add(any(gen), any(gen));
        TraitGraph g = make_graph(nv, edges, birth, death);

        ExponentResult res = run_exponent_algorithm(g);
        std::set<Rational> slope_set{Rational(0)};
        for (int v = 0; v < nv; ++v) slope_set.insert(g.lambda(v));
        for (int v = 0; v < nv; ++v) {
            const PiecewiseLinear& f = res.x[v];
            for (size_t i = 0; i < f.slopes.size(); ++i) {
                CHECK(slope_set.count(f.slopes[i]) == 1);
                if (i) {
                    CHECK(f.slopes[i] > f.slopes[i - 1]);  // recorded only on change, upward
                    // continuity: value matches extension of the previous piece
                    Rational expect = f.values[i - 1] +
                                      f.slopes[i - 1] * (f.breakpoints[i] - f.breakpoints[i - 1]);
                    CHECK(f.values[i] == expect);
                }
            }
            CHECK(static_cast<int>(res.step_times.size()) <= nv * nv + nv + 1);
        }
        // under selective rates births can only be earlier than the
        // non-increasing prediction
        for (int v = 0; v < nv; ++v) {
            Rational tv = admissible_set(g, v).t_v;
            for (int k = 0; k <= 20; ++k) {
                Rational t(k, 2);
                Rational bound = (t - tv) > 0 ? g.lambda0() * (t - tv) : Rational(0);
                CHECK(res.x[v].eval(t) >= bound);
            }
        }
    }
}

TEST_CASE("zero-delay takeover cascade lands on one breakpoint") {
    // u is born from two tied parents and attaches to one of them; when the
    // other parent is captured by a faster trait, the pair (parent, u) is
    // already exactly at its drive threshold, so the capture must cascade to
    // u at the same instant.
    // vertices: 0 (lambda 1), a=1, b=2, u=3 neutral, w=4 (lambda 3)
    TraitGraph g = make_graph(5,
                              {{0, 1, Rational(1), Rational(1)},
                               {0, 2, Rational(1), Rational(1)},
                               {1, 3, Rational(1), Rational(1)},
                               {2, 3, Rational(1), Rational(1)},
                               {0, 4, Rational(3), Rational(1)},
                               {4, 2, Rational(1), Rational(1)}},
                              {Rational(2), Rational(2), Rational(2), Rational(2), Rational(4)},
                              {Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)});
    ExponentResult res = run_exponent_algorithm(g);
    PiecewiseLinear expected_b;
    expected_b.breakpoints = {Rational(0), Rational(1), Rational(9, 2)};
    expected_b.values = {Rational(0), Rational(0), Rational(7, 2)};
    expected_b.slopes = {Rational(0), Rational(1), Rational(3)};
    CHECK(res.x[2] == expected_b);
    PiecewiseLinear expected_u;
    expected_u.breakpoints = {Rational(0), Rational(2), Rational(9, 2)};
    expected_u.values = {Rational(0), Rational(0), Rational(5, 2)};
    expected_u.slopes = {Rational(0), Rational(1), Rational(3)};
    CHECK(res.x[3] == expected_u);
    // both step at the same instant; step times recorded once
    int count_45 = 0;
    for (const auto& d : res.step_times) count_45 += d == Rational(9, 2);
    CHECK(count_45 == 1);
}

TEST_CASE("event log flags intrinsic-drive ties") {
    // newborn whose own rate exactly equals the driving slope
    TraitGraph g = chain({Rational(1), Rational(1)}, {Rational(1)});
    ExponentResult res = run_exponent_algorithm(g);
    REQUIRE(res.events.size() == 1);
    CHECK(res.events[0].kind == ExponentEvent::Kind::Birth);
    CHECK(res.events[0].intrinsic_tie);
    CHECK(res.events[0].nu_plus == std::vector<TraitId>{0});
}
