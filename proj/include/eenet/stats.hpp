#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace eenet {

/// Neumaier compensated summation; the result depends only on element order,
/// not on how work was distributed across threads.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0, correction = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            correction += (sum - t) + v;
        else
            correction += (v - t) + sum;
        sum = t;
    }
    return sum + correction;
}

/// Monte-Carlo mean with a 95% confidence half-width.
struct McEstimate {
    double mean = 0.0;
    double half_width = 0.0; // 1.96 * sample std / sqrt(n)
    long trials_used = 0;
};

inline McEstimate mc_estimate(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("mc estimate needs at least one sample");
    McEstimate e;
    e.trials_used = static_cast<long>(samples.size());
    e.mean = compensated_sum(samples) / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double d = samples[i] - e.mean;
            sq[i] = d * d;
        }
        const double var = compensated_sum(sq) / static_cast<double>(samples.size() - 1);
        e.half_width = 1.96 * std::sqrt(var / static_cast<double>(samples.size()));
    }
    return e;
}

/// Survival function of the Kolmogorov distribution,
/// Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
inline double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    double q = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
        q += term;
        if (std::abs(term) < 1e-14) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test against a given CDF. Uses the Stephens
/// finite-sample correction for the p-value.
inline KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("KS test needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    const double adj = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
    return {d, kolmogorov_survival(adj), samples.size()};
}

/// Two-sample Kolmogorov-Smirnov test.
inline KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    const double adj = d * (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne));
    return {d, kolmogorov_survival(adj), a.size() + b.size()};
}

/// CDF of the Rayleigh distribution with scale sigma.
inline double rayleigh_cdf(double x, double sigma) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-x * x / (2.0 * sigma * sigma));
}

} // namespace eenet
