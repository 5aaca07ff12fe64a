#include "branchwalk/stats.hpp"

#include <algorithm>
#include <cmath>

namespace branchwalk {

double kolmogorov_tail(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0;
    double sign = 1;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.size() < 8) throw std::invalid_argument("KS test needs at least 8 observations");
    std::sort(sample.begin(), sample.end());
    if (sample.front() == sample.back())
        throw DegenerateSample("KS test on a constant sample");
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    const double sq = std::sqrt(n);
    KsResult res;
    res.statistic = d;
    res.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
    return res;
}

KsResult ks_test_exponential(const std::vector<double>& sample, double rate) {
    return ks_test(sample, [rate](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-rate * x); });
}

SampleSummary summarize(const std::vector<double>& sample) {
    SampleSummary s;
    s.count = sample.size();
    if (sample.empty()) return s;
    double sum = 0;
    for (double x : sample) sum += x;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0;
        for (double x : sample) ss += (x - s.mean) * (x - s.mean);
        s.variance = ss / static_cast<double>(s.count - 1);
        s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
    }
    return s;
}

bool binomial_within_ci(double p_hat, double p0, std::size_t trials, double z) {
    double half = z * std::sqrt(p0 * (1.0 - p0) / static_cast<double>(trials));
    return std::abs(p_hat - p0) <= half;
}

bool trend_decreasing(const std::vector<double>& values, const std::vector<double>& std_errors,
                      double se_slack, int max_inversions) {
    if (values.size() != std_errors.size() || values.size() < 2)
        throw std::invalid_argument("trend check needs matched values and errors");
    int inversions = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) continue;
        double se = std::hypot(std_errors[i], std_errors[i - 1]);
        if (values[i] - values[i - 1] > se_slack * se) return false;
        if (++inversions > max_inversions) return false;
    }
    return true;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("OLS slope needs at least two matched points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("OLS slope with constant abscissae");
    return sxy / sxx;
}

}  // namespace branchwalk
