#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace emdr::stats {

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

// population variance (denominator n)
inline double variance(std::span<const double> x) {
    const double mu = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - mu) * (v - mu);
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

// Pearson correlation; returns NaN when either side has zero variance.
inline double correlation(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::nan("");
    return sab / std::sqrt(saa * sbb);
}

} // namespace emdr::stats
