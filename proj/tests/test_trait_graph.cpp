#include <doctest.h>

#include <algorithm>
#include <random>

#include "branchwalk/scaling.hpp"
#include "branchwalk/trait_graph.hpp"

using namespace branchwalk;

namespace {

TraitGraph two_vertex(Rational beta1 = Rational(1, 2)) {
    return make_graph(2, {{0, 1, Rational(1), Rational(1)}}, {Rational(1), Rational(1)},
                      {Rational(1, 2), beta1});
}

}  // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("1.5e-2") == Rational(3, 200));
    CHECK(parse_rational("-0.125") == Rational(-1, 8));
    CHECK(rational_to_string(Rational(3, 4)) == "3/4");
    CHECK(rational_to_string(Rational(8, 4)) == "2");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("validate minimal legal graph") {
    CHECK(validate(two_vertex()).ok());
}

TEST_CASE("validate flags self-loops") {
    TraitGraph g = make_graph(2,
                              {{0, 1, Rational(1), Rational(1)}, {1, 1, Rational(1), Rational(1)}},
                              {Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)});
    auto report = validate(g);
    REQUIRE(!report.ok());
    bool found = false;
    for (const auto& v : report.violations) found |= v.find("self-loop") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate flags unreachable vertices") {
    TraitGraph g = make_graph(3, {{0, 1, Rational(1), Rational(1)}},
                              {Rational(1), Rational(1), Rational(1)},
                              {Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    auto report = validate(g);
    REQUIRE(!report.ok());
    bool found = false;
    for (const auto& v : report.violations)
        found |= v.find("unreachable vertex 2") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate flags duplicate edges, bad labels, bad lambda0") {
    TraitGraph g = make_graph(2,
                              {{0, 1, Rational(1), Rational(1)}, {0, 1, Rational(2), Rational(1)}},
                              {Rational(1), Rational(1)}, {Rational(2), Rational(1, 2)});
    auto report = validate(g);
    CHECK(report.violations.size() >= 2);  // duplicate edge + lambda(0) <= 0

    TraitGraph bad_label = make_graph(2, {{0, 1, Rational(0), Rational(1)}},
                                      {Rational(1), Rational(1)},
                                      {Rational(1, 2), Rational(1, 2)});
    CHECK(!validate(bad_label).ok());
}

TEST_CASE("classify per spec examples") {
    CHECK(classify(two_vertex(Rational(1, 2)))[1] == GrowthClass::Neutral);
    CHECK(classify(two_vertex(Rational(4, 5)))[1] == GrowthClass::Deleterious);
    TraitGraph sel = make_graph(2, {{0, 1, Rational(1), Rational(1)}},
                                {Rational(1), Rational(2)}, {Rational(1, 2), Rational(1, 2)});
    CHECK(classify(sel)[1] == GrowthClass::Selective);
    CHECK(classify(sel)[0] == GrowthClass::Neutral);  // vertex 0 compares to itself
}

TEST_CASE("check_non_increasing") {
    CHECK(check_non_increasing(two_vertex(Rational(1, 2))));
    CHECK(check_non_increasing(two_vertex(Rational(4, 5))));
    TraitGraph sel = make_graph(2, {{0, 1, Rational(1), Rational(1)}},
                                {Rational(1), Rational(2)}, {Rational(1, 2), Rational(1, 2)});
    CHECK(!check_non_increasing(sel));
}

TEST_CASE("total mutation probability") {
    TraitGraph g = two_vertex();
    ScalingParams sc = make_scaling(g, 100, 1);
    CHECK(total_mutation_probability(g, sc, 0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(total_mutation_probability(g, sc, 1) == 0.0);

    TraitGraph g2 = make_graph(3,
                               {{0, 1, Rational(1), Rational(1)}, {0, 2, Rational(2), Rational(1)}},
                               {Rational(1), Rational(1), Rational(1)},
                               {Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    ScalingParams sc2 = make_scaling(g2, 10, 1);
    CHECK(total_mutation_probability(g2, sc2, 0) == doctest::Approx(0.11).epsilon(1e-12));

    // mu = 2, l = 1/10, n = 2: 2 * 2^{-0.1} > 1
    TraitGraph g3 = make_graph(2, {{0, 1, Rational(1, 10), Rational(2)}},
                               {Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)});
    CHECK_THROWS_AS(make_scaling(g3, 2, 1), MutationOverflow);
}

TEST_CASE("total mutation probability decreases in n") {
    TraitGraph g = two_vertex();
    double prev = 2;
    for (long long n : {2, 4, 16, 256, 65536}) {
        ScalingParams sc = make_scaling(g, n, 1);
        double cur = total_mutation_probability(g, sc, 0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("validation is invariant under relabeling that fixes 0") {
    std::mt19937 gen(7);
    TraitGraph g = make_graph(
        4,
        {{0, 1, Rational(1), Rational(1)},
         {1, 2, Rational(1, 2), Rational(1)},
         {0, 3, Rational(3), Rational(1)},
         {3, 1, Rational(2), Rational(0)}},
        {Rational(1), Rational(1), Rational(2, 3), Rational(1)},
        {Rational(1, 2), Rational(1, 2), Rational(1, 3), Rational(1)});
    REQUIRE(validate(g).ok());
    std::vector<int> perm{0, 1, 2, 3};
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(perm.begin() + 1, perm.end(), gen);
        std::vector<TraitGraph::Edge> edges;
        for (auto e : g.edges) {
            e.from = perm[e.from];
            e.to = perm[e.to];
            edges.push_back(e);
        }
        std::vector<Rational> birth(4), death(4);
        for (int v = 0; v < 4; ++v) {
            birth[perm[v]] = g.birth[v];
            death[perm[v]] = g.death[v];
        }
        TraitGraph h = make_graph(4, edges, birth, death);
        CHECK(validate(h).ok());
        auto ch = classify(h), cg = classify(g);
        for (int v = 0; v < 4; ++v) CHECK(ch[perm[v]] == cg[v]);
    }
}

TEST_CASE("classify is a partition") {
    TraitGraph g = make_graph(
        3, {{0, 1, Rational(1), Rational(1)}, {0, 2, Rational(1), Rational(1)}},
        {Rational(1), Rational(3, 2), Rational(1)},
        {Rational(1, 2), Rational(1, 2), Rational(3, 4)});
    auto classes = classify(g);
    CHECK(classes.size() == 3);
    CHECK(classes[0] == GrowthClass::Neutral);
    CHECK(classes[1] == GrowthClass::Selective);
    CHECK(classes[2] == GrowthClass::Deleterious);
}
