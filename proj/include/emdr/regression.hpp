#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emdr/lasso.hpp"
#include "emdr/memd.hpp"

namespace emdr {

enum class EmdrDesign { R1, R2 };

struct EmdrOptions {
    SiftParams sift;
    NoiseConfig noise; // seed field is overwritten with the master seed
    std::size_t n_directions = 128;
    bool standardize = true;
    int cv_folds = 10;
    CvScheme cv_scheme = CvScheme::ContiguousBlocks;
    int n_lambda = 100;
    double lambda_ratio = 1e-4;
    std::uint64_t seed = 0;
    unsigned n_threads = 1;
    std::string response_name = "y";
};

// (lag, |ccf| at that lag); lag in [0, max_lag], ties toward the smallest lag.
struct LagChoice {
    int lag = 0;
    double ccf = 0.0;
};

LagChoice select_lag(std::span<const double> imf, std::span<const double> target,
                     int max_lag);

// One design column of an EMD-regression submodel.
struct EmdrColumn {
    std::string predictor;
    int order = 0; // IMF order >= 1; 0 marks the residue/trend column
    int lag = 0;
    double ccf = 0.0;
    int max_lag = 0;
    double mean_period = 0.0; // NaN for residue / trend-like components
    double amplitude = 0.0;   // peak-to-peak for IMFs, range for residues
};

struct EmdrSubmodel {
    std::string label; // "r1", "imf_<k>", "trend"
    int order = -1;    // -1: R1 joint model, 1..K: per-order, 0: trend
    std::vector<EmdrColumn> columns;
    DesignMatrix design;          // trimmed, lagged, original scale
    std::vector<double> response; // trimmed target
    CvResult cv;
    LassoFit fit;
    std::vector<double> fitted; // intercept + design * beta, stored row order
    double r2 = 0.0;
    double gcv_value = 0.0;
};

struct EmdrModel {
    EmdrDesign design = EmdrDesign::R1;
    MultivariateDecomposition decomposition; // predictors (R1) or Y+predictors (R2)
    std::string response_name;
    std::vector<std::string> predictor_names;
    std::size_t K = 0;
    std::size_t trim = 0;   // rows dropped from the front (max selected lag)
    std::size_t n_rows = 0; // rows after trimming
    std::vector<EmdrSubmodel> submodels; // R1: 1; R2: K then trend
    std::vector<std::string> warnings;
};

// NA-MEMD on the predictors only; a single Lasso of raw Y on all lagged
// predictor IMFs and residues, lambda by the one-standard-error rule.
EmdrModel fit_emdr1(const TimeSeries& y, const MultichannelSeries& predictors,
                    const EmdrOptions& options);

// Joint NA-MEMD over {Y} + predictors; per-order Lasso of C_Yk on the
// same-order predictor IMFs plus a trend model, lambda by lambda_min.
EmdrModel fit_emdr2(const TimeSeries& y, const MultichannelSeries& predictors,
                    const EmdrOptions& options);

// Sum of per-order and trend predictions (R2 only). With the model's own
// decomposition this reproduces the stored fitted values bit-exactly.
std::vector<double> predict_r2(const EmdrModel& model,
                               const MultivariateDecomposition& predictor_dec);

// Training R^2 of the whole design: the single submodel for R1, the summed
// per-order prediction against the raw response for R2.
double overall_r_squared(const EmdrModel& model, const TimeSeries& y);

// GCV of the whole design with df_eff summed over submodels (+1 intercept each).
double overall_gcv(const EmdrModel& model, const TimeSeries& y);

struct SensitivityRow {
    std::string submodel;
    std::string predictor;
    int order = 0;            // 0 = trend row
    double mean_period = 0.0; // NaN on trend rows
    int lag = 0;
    double beta = 0.0;
    double amplitude = 0.0;
    double sensitivity = 0.0; // beta * amplitude, exact product
    double ci_lower = 0.0, ci_upper = 0.0;
    bool has_ci = false;
    bool significant = false;
};

// One row per retained (nonzero) coefficient across all submodels.
std::vector<SensitivityRow> sensitivities(const EmdrModel& model);

struct CoefInterval {
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool significant = false; // CI excludes zero
};

// Moving-block bootstrap of a fixed-lambda Lasso refit over the joint
// (response, design) rows. Decomposition and lags are not recomputed.
std::vector<CoefInterval> bootstrap_lasso_ci(const DesignMatrix& design,
                                             std::span<const double> y,
                                             double lambda, int B,
                                             std::size_t block_len,
                                             std::uint64_t seed,
                                             unsigned n_threads = 1,
                                             const LassoFit* center = nullptr);

struct BootstrapResult {
    int B = 0;
    std::size_t block_len = 0;
    // aligned with model.submodels and each submodel's design columns
    std::vector<std::vector<CoefInterval>> per_submodel;
};

std::size_t auto_block_length(std::size_t n); // ceil(n^(1/3))

// Shared replication row patterns across submodels (same trimmed length).
BootstrapResult block_bootstrap(const EmdrModel& model, int B,
                                std::size_t block_len, std::uint64_t seed,
                                unsigned n_threads = 1);

// Attaches coefficient CIs (scaled by the fixed amplitudes) to table rows.
void attach_bootstrap(std::vector<SensitivityRow>& rows, const EmdrModel& model,
                      const BootstrapResult& boot);

} // namespace emdr
