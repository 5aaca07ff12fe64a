#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace branchwalk {

struct DegenerateSample : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KsResult {
    double statistic = 0;
    double p_value = 0;
};

// Two-sided one-sample Kolmogorov-Smirnov test against an exact CDF.
// Requires at least 8 observations and a non-constant sample.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

KsResult ks_test_exponential(const std::vector<double>& sample, double rate);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0;
    double variance = 0;  // unbiased
    double std_error = 0;
};

SampleSummary summarize(const std::vector<double>& sample);

// |p_hat - p0| within the z-quantile binomial band around p0.
bool binomial_within_ci(double p_hat, double p0, std::size_t trials, double z);

// Trend acceptance for sequences expected to decrease with n: monotone
// non-increase, allowing up to `max_inversions` steps that go up by no more
// than `se_slack` standard errors of the difference.
bool trend_decreasing(const std::vector<double>& values, const std::vector<double>& std_errors,
                      double se_slack = 2.0, int max_inversions = 1);

// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace branchwalk
