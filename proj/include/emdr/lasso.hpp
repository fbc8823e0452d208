#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emdr/errors.hpp"

namespace emdr {

struct DesignMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns; // [col][row]

    std::size_t n_rows() const { return columns.empty() ? 0 : columns[0].size(); }
    std::size_t n_cols() const { return columns.size(); }
};

struct ScaleInfo {
    std::vector<std::size_t> kept; // original column indices that survived
    std::vector<double> col_mean;  // per kept column
    std::vector<double> col_sd;    // population sd (denominator n)
    double y_mean = 0.0;
};

struct StandardizedDesign {
    std::vector<std::vector<double>> columns; // kept columns, mean 0 / sd 1
    std::vector<double> y_centered;
    ScaleInfo scale;
    std::size_t p_original = 0;
    std::vector<std::string> warnings;

    std::size_t n_rows() const { return y_centered.size(); }
    std::size_t n_cols() const { return columns.size(); }
};

// Drops zero-variance columns with a warning; the remaining columns get
// mean 0 and population sd 1; y is centered.
StandardizedDesign standardize(const DesignMatrix& design,
                               std::span<const double> y);

struct LassoFit {
    double lambda = 0.0;
    std::vector<double> beta;     // original scale, length p_original
    std::vector<double> beta_std; // standardized coords, kept columns
    double intercept = 0.0;
    std::size_t df = 0; // nonzero coefficients
    double rss = 0.0;
    bool converged = true;
    int n_sweeps = 0;
    double final_gap = 0.0;
    bool objective_monotone = true;
};

// Cyclic soft-threshold coordinate descent on the standardized problem
//   (1/(2n)) * ||y_c - X b||^2 + lambda * sum |b_j|.
// Stops when the largest coefficient change in a sweep is < 1e-7, capped at
// 10000 sweeps (non-convergence is flagged on the fit, not thrown).
LassoFit lasso_coordinate_descent(const StandardizedDesign& sd, double lambda,
                                  const std::vector<double>* warm_start = nullptr);

double lambda_max(const StandardizedDesign& sd);

// Log-spaced descending grid from lambda_max to ratio * lambda_max;
// grid[0] == lambda_max exactly.
std::vector<double> lambda_path(const StandardizedDesign& sd, int n_lambda = 100,
                                double ratio = 1e-4);

// Warm-started fits along a descending grid.
std::vector<LassoFit> lasso_path_fit(const StandardizedDesign& sd,
                                     const std::vector<double>& grid);

enum class CvScheme { Random, ContiguousBlocks };

struct CvResult {
    std::vector<double> lambda_grid;
    std::vector<double> cv_mean;
    std::vector<double> cv_se;
    std::size_t min_index = 0;
    std::size_t one_se_index = 0;
    double lambda_min = 0.0;
    double lambda_1se = 0.0;
};

CvResult cross_validate(const DesignMatrix& design, std::span<const double> y,
                        const std::vector<double>& grid, int k,
                        CvScheme scheme, std::uint64_t seed,
                        unsigned n_threads = 1);

double r_squared(const LassoFit& fit, std::span<const double> y);

// (RSS/n) / (1 - df_eff/n)^2 with df_eff = df + 1 (intercept included);
// +inf when df_eff >= n.
double gcv(const LassoFit& fit, std::size_t n);

// Max KKT violation at the fitted point: for active coefficients
// | <x_j, r>/n - lambda*sign(b_j) |, for inactive ones
// max(0, |<x_j, r>/n| - lambda).
double kkt_violation(const StandardizedDesign& sd, const LassoFit& fit);

} // namespace emdr
