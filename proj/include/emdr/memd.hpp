#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emdr/emd.hpp"
#include "emdr/types.hpp"

namespace emdr {

struct DirectionSet {
    std::vector<std::vector<double>> vectors; // unit vectors, dimension p
    std::size_t dimension() const { return vectors.empty() ? 0 : vectors[0].size(); }
    std::size_t count() const { return vectors.size(); }
};

struct NoiseConfig {
    int n_noise = 2;
    double variance_ratio = 0.10;
    std::uint64_t seed = 0;
};

struct MultivariateDecomposition {
    std::vector<std::string> names;
    std::vector<Decomposition> per_channel; // aligned with names
    std::size_t K = 0;
    std::vector<std::string> warnings;

    const Decomposition& channel(const std::string& name) const;
};

// Quasi-uniform unit vectors on the (p-1)-sphere from a Hammersley point
// set; the seed rotates the sequence offset only, so the set of directions
// is seed-invariant while remaining deterministic.
DirectionSet generate_directions(std::size_t p, std::size_t count,
                                 std::uint64_t seed);

// Joint sifting via scalar projections: per direction, the p-variate samples
// at the projection's maxima are spline-interpolated to an envelope curve;
// the direction average is the multivariate mean that gets subtracted.
// Extraction stops when fewer than 3 projections still oscillate.
MultivariateDecomposition memd_decompose(const MultichannelSeries& series,
                                         const DirectionSet& dirs,
                                         const SiftParams& params,
                                         unsigned n_threads = 1);

struct MemdOptions {
    std::size_t n_directions = 128;
    bool standardize = true; // zero mean / unit variance per channel, undone on output
    unsigned n_threads = 1;
};

// NA-MEMD: appends n_noise white Gaussian channels (variance = variance_ratio
// x mean of per-channel variances), decomposes jointly, discards the noise
// channels' IMFs.
MultivariateDecomposition na_memd_decompose(const MultichannelSeries& series,
                                            const NoiseConfig& noise,
                                            const SiftParams& params,
                                            const MemdOptions& options = {});

} // namespace emdr
