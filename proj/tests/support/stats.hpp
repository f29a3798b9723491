#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

// Small statistics helpers for the test and acceptance suites. These are
// oracles: they must stay independent of the library implementation.
namespace test_stats {

inline double mean(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

inline double rms(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x * x;
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic two-sample KS rejection threshold at the given significance.
inline double ks_critical(double significance, std::size_t n, std::size_t m) {
    const double c = std::sqrt(-std::log(significance / 2.0) / 2.0);
    return c * std::sqrt(static_cast<double>(n + m) /
                         (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace test_stats
