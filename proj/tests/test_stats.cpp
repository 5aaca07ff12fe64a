#include <doctest.h>

#include <cmath>
#include <random>

#include "branchwalk/stats.hpp"

using namespace branchwalk;

TEST_CASE("ks test accepts its own distribution and rejects a wrong rate") {
    std::mt19937 gen(99);
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> sample;
    for (int i = 0; i < 10000; ++i) sample.push_back(exp1(gen));
    CHECK(ks_test_exponential(sample, 1.0).p_value > 0.01);
    // 2x wrong rate at 1e4 draws is decisively rejected
    CHECK(ks_test_exponential(sample, 2.0).p_value < 1e-6);
}

TEST_CASE("ks test guards") {
    CHECK_THROWS_AS(ks_test_exponential({1, 1, 1, 1, 1, 1, 1, 1}, 1.0), DegenerateSample);
    CHECK_THROWS(ks_test_exponential({1.0, 2.0}, 1.0));  // too small
}

TEST_CASE("kolmogorov tail endpoints") {
    CHECK(kolmogorov_tail(1e-12) == doctest::Approx(1.0));
    CHECK(kolmogorov_tail(10.0) == doctest::Approx(0.0));
    CHECK(kolmogorov_tail(1.0) == doctest::Approx(0.2699996717).epsilon(1e-6));
}

TEST_CASE("summarize") {
    SampleSummary s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0));
    CHECK(s.count == 4);
}

TEST_CASE("binomial band") {
    CHECK(binomial_within_ci(0.505, 0.5, 4000, 2.5758));
    CHECK(!binomial_within_ci(0.55, 0.5, 4000, 2.5758));
}

TEST_CASE("trend acceptance") {
    CHECK(trend_decreasing({3.0, 2.0, 1.0}, {0.1, 0.1, 0.1}));
    // one small inversion within 2 SE is tolerated
    CHECK(trend_decreasing({3.0, 2.0, 2.1}, {0.1, 0.1, 0.1}));
    // a large inversion is not
    CHECK(!trend_decreasing({3.0, 2.0, 2.5}, {0.1, 0.1, 0.1}));
    // two inversions are not
    CHECK(!trend_decreasing({3.0, 3.05, 2.0, 2.05}, {0.1, 0.1, 0.1, 0.1}));
}

TEST_CASE("ols slope") {
    CHECK(ols_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
    CHECK_THROWS(ols_slope({1, 1}, {0, 1}));
}
