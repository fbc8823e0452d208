#pragma once

#include <cmath>

#include "emdr/regression.hpp"
#include "helpers.hpp"

// Synthetic generative fixtures shared by the regression tests and the
// acceptance suite. The planted tones are the ground truth the fitted
// models are checked against.
namespace fixture {

struct Planted {
    emdr::TimeSeries y;
    emdr::MultichannelSeries predictors;
    std::vector<double> fast; // planted fast tone of the first predictor
    std::vector<double> slow; // planted slow tone of the first predictor
};

// X1 = fast + slow tone; Y = beta_slow * slow + noise(sigma).
inline Planted single_scale(std::size_t n, std::uint64_t seed,
                            double beta_slow = 2.0, double sigma = 0.1,
                            bool add_decoy_channel = false) {
    const double ph1 = 0.61 * static_cast<double>(seed % 17);
    const double ph2 = 1.13 * static_cast<double>(seed % 13);
    Planted fx;
    fx.fast = oracle::sine(n, 8.0, 1.0, ph1);
    fx.slow = oracle::sine(n, 64.0, 1.0, ph2);

    emdr::TimeSeries x1;
    x1.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) x1.values[t] = fx.fast[t] + fx.slow[t];
    fx.predictors.names.push_back("x1");
    fx.predictors.channels.push_back(std::move(x1));

    if (add_decoy_channel) {
        emdr::TimeSeries x2;
        x2.values = oracle::white_noise(n, seed * 31 + 5);
        // smooth the decoy a little so it has multi-scale content
        for (std::size_t t = 1; t < n; ++t)
            x2.values[t] = 0.6 * x2.values[t - 1] + x2.values[t];
        fx.predictors.names.push_back("x2");
        fx.predictors.channels.push_back(std::move(x2));
    }

    auto noise = oracle::white_noise(n, seed * 77 + 3, sigma);
    fx.y.values.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        fx.y.values[t] = beta_slow * fx.slow[t] + noise[t];
    return fx;
}

// Y loads on both planted scales: the multi-scale design-ordering fixture.
inline Planted multi_scale(std::size_t n, std::uint64_t seed,
                           double sigma = 0.25) {
    auto fx = single_scale(n, seed, 2.0, sigma, /*add_decoy_channel=*/true);
    auto noise = oracle::white_noise(n, seed * 77 + 3, sigma);
    for (std::size_t t = 0; t < n; ++t)
        fx.y.values[t] = 2.0 * fx.slow[t] + 0.5 * fx.fast[t] + noise[t];
    return fx;
}

// AR(1) design with one strong planted coefficient, for bootstrap checks.
struct BootstrapFixture {
    emdr::DesignMatrix design;
    std::vector<double> y;
};

inline BootstrapFixture ar1_planted(std::size_t n, std::size_t p,
                                    std::uint64_t seed, double beta = 2.0,
                                    double sigma = 0.1) {
    BootstrapFixture fx;
    for (std::size_t j = 0; j < p; ++j) {
        auto col = oracle::white_noise(n, seed * 211 + j);
        for (std::size_t t = 1; t < n; ++t)
            col[t] = 0.6 * col[t - 1] + col[t];
        fx.design.names.push_back("x" + std::to_string(j + 1));
        fx.design.columns.push_back(std::move(col));
    }
    auto noise = oracle::white_noise(n, seed * 499 + 13, sigma);
    fx.y.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        fx.y[t] = beta * fx.design.columns[0][t] + noise[t];
    return fx;
}

} // namespace fixture
