#include "excursion/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace excursion {

double ks_critical_constant(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("ks_critical_constant: alpha must lie in (0,1)");
    }
    return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

TestReport ks_one_sample_normal(std::span<const double> xs, double mean, double variance,
                                double alpha, std::string name) {
    if (xs.empty()) throw std::invalid_argument("ks_one_sample_normal: empty sample");
    if (!(variance > 0.0)) throw std::invalid_argument("ks_one_sample_normal: variance must be > 0");
    const double c = ks_critical_constant(alpha);

    const double sd = std::sqrt(variance);
    const double d = ks_statistic_vs_cdf(xs, [&](double x) { return normal_cdf((x - mean) / sd); });

    TestReport report;
    report.name = std::move(name);
    report.statistic = d;
    report.threshold = c / std::sqrt(static_cast<double>(xs.size()));
    report.alpha = alpha;
    report.pass = report.statistic < report.threshold;
    report.sample_sizes = {xs.size(), 0};
    return report;
}

TestReport ks_two_sample(std::span<const double> xs, std::span<const double> ys, double alpha,
                         std::string name) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    const double c = ks_critical_constant(alpha);

    std::vector<double> a(xs.begin(), xs.end());
    std::vector<double> b(ys.begin(), ys.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (i < a.size() && (j == b.size() || a[i] <= b[j])) {
            v = a[i];
        } else {
            v = b[j];
        }
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }

    TestReport report;
    report.name = std::move(name);
    report.statistic = d;
    report.threshold = c * std::sqrt((n + m) / (n * m));
    report.alpha = alpha;
    report.pass = report.statistic < report.threshold;
    report.sample_sizes = {a.size(), b.size()};
    return report;
}

MomentSummary moment_summary(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("moment_summary: need at least two values");
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (double x : xs) {
        ++count;
        const double d1 = x - mean;
        mean += d1 / static_cast<double>(count);
        m2 += d1 * (x - mean);
    }
    MomentSummary s;
    s.count = count;
    s.mean = mean;
    s.variance = m2 / static_cast<double>(count - 1);
    if (s.variance < 0.0) s.variance = 0.0;
    s.se_mean = std::sqrt(s.variance / static_cast<double>(count));
    s.se_variance = s.variance * std::sqrt(2.0 / static_cast<double>(count - 1));
    return s;
}

} // namespace excursion
