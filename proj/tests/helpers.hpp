#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

// Test-side generators and independent oracles. Everything here must stay
// independent of the library's computation paths.
namespace oracle {

inline std::vector<double> sine(std::size_t n, double period, double amp = 1.0,
                                double phase = 0.0, double offset = 0.0) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t)
        v[t] = offset + amp * std::sin(2.0 * M_PI * static_cast<double>(t) / period + phase);
    return v;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed,
                                       double sd = 1.0) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = g(eng);
    return v;
}

// strict-neighbour extrema scan (no plateau logic; oracle for non-flat inputs)
struct ScanResult {
    std::vector<std::size_t> maxima, minima;
};
inline ScanResult scan_extrema(std::span<const double> x) {
    ScanResult r;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (x[i] > x[i - 1] && x[i] > x[i + 1]) r.maxima.push_back(i);
        if (x[i] < x[i - 1] && x[i] < x[i + 1]) r.minima.push_back(i);
    }
    return r;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// OLS with intercept via Eigen householder QR
inline std::vector<double> ols(const std::vector<std::vector<double>>& cols,
                               std::span<const double> y) {
    const std::size_t n = y.size(), p = cols.size();
    Eigen::MatrixXd X(n, p + 1);
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X(static_cast<long>(i), 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j)
            X(static_cast<long>(i), static_cast<long>(j) + 1) = cols[j][i];
        Y(static_cast<long>(i)) = y[i];
    }
    Eigen::VectorXd b = X.householderQr().solve(Y);
    std::vector<double> out(p + 1); // [intercept, beta...]
    for (std::size_t j = 0; j <= p; ++j) out[j] = b(static_cast<long>(j));
    return out;
}

// Columns centered, Gram-Schmidt orthogonalised, then scaled to sum(x^2) = n
// so the lasso's standardized coordinate-descent closed form applies.
inline std::vector<std::vector<double>> orthonormal_design(std::size_t n,
                                                           std::size_t p,
                                                           std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> cols(p, std::vector<double>(n));
    for (auto& c : cols)
        for (auto& x : c) x = g(eng);
    for (std::size_t j = 0; j < p; ++j) {
        double mu = 0.0;
        for (double v : cols[j]) mu += v;
        mu /= static_cast<double>(n);
        for (double& v : cols[j]) v -= mu;
        for (std::size_t k = 0; k < j; ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += cols[j][i] * cols[k][i];
            d /= static_cast<double>(n); // <x_k, x_k> = n
            for (std::size_t i = 0; i < n; ++i) cols[j][i] -= d * cols[k][i];
        }
        double s2 = 0.0;
        for (double v : cols[j]) s2 += v * v;
        const double scale = std::sqrt(static_cast<double>(n) / s2);
        for (double& v : cols[j]) v *= scale;
    }
    return cols;
}

inline double soft(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

} // namespace oracle
