#ifndef EXCURSION_STATS_HPP
#define EXCURSION_STATS_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "excursion/normal.hpp"

namespace excursion {

// Outcome of one statistical test. pass <=> statistic < threshold.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    double alpha = 0.0;
    bool pass = false;
    std::pair<std::size_t, std::size_t> sample_sizes{0, 0};
};

struct MomentSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;    // unbiased
    double se_mean = 0.0;     // sqrt(variance / count)
    double se_variance = 0.0; // variance * sqrt(2 / (count - 1)), gaussian approximation
};

// Asymptotic Kolmogorov critical constant c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_constant(double alpha);

// Sup-distance between the empirical CDF of xs and a theoretical CDF.
// Copies and sorts internally.
template <class Cdf>
double ks_statistic_vs_cdf(std::span<const double> xs, Cdf&& cdf) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, hi - f, f - lo});
    }
    return d;
}

// One-sample KS against N(mean, variance) with the asymptotic critical value
// c(alpha)/sqrt(n). Throws std::invalid_argument on empty input, variance <= 0
// or alpha outside (0,1).
TestReport ks_one_sample_normal(std::span<const double> xs, double mean, double variance,
                                double alpha, std::string name = "ks_one_sample_normal");

// Two-sample KS with critical value c(alpha) * sqrt((n+m)/(n*m)). Ties are
// handled by evaluating both empirical CDFs immediately after each merged
// point. Throws std::invalid_argument on empty inputs or bad alpha.
TestReport ks_two_sample(std::span<const double> xs, std::span<const double> ys, double alpha,
                         std::string name = "ks_two_sample");

// Single-pass Welford mean/variance. Requires at least two values.
MomentSummary moment_summary(std::span<const double> xs);

} // namespace excursion

#endif // EXCURSION_STATS_HPP
