#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "emdr/regression.hpp"

namespace emdr {

// Every tunable of the pipeline; defaults match the reference parameterisation
// (128 projections, 2 noise channels at 10% variance, Rilling thresholds,
// 10-fold blocked CV, 500 bootstrap replications).
struct RunConfig {
    std::string response;
    std::vector<std::string> predictors;
    std::string date_column;  // empty = none
    std::string design = "both"; // r1 | r2 | both

    double theta1 = 0.05;
    double theta2 = 0.5;
    double alpha = 0.05;
    int max_sift_iters = 200;
    int max_imfs = 0; // 0 = until residue criterion
    std::string boundary = "mirror"; // mirror | clamp

    int n_noise = 2;
    double noise_variance_ratio = 0.10;
    std::size_t directions = 128;
    bool standardize = true;

    int cv_folds = 10;
    std::string cv_scheme = "blocks"; // blocks | random
    int n_lambda = 100;
    double lambda_ratio = 1e-4;

    int bootstrap_reps = 500;
    std::size_t block_len = 0; // 0 = auto ceil(n^(1/3))

    std::uint64_t seed = 0;
    int threads = 1; // <=0 = auto

    // Flat key = value file; '#' comments; unknown keys are hard errors.
    static RunConfig load(const std::string& path);

    void validate() const;
    EmdrOptions to_options() const;
    SiftParams sift_params() const;

    // Full echo including defaults the user never set (manifest completeness).
    std::map<std::string, std::string> echo() const;
};

} // namespace emdr
