#include "emdr/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "emdr/parallel.hpp"
#include "emdr/rng.hpp"
#include "emdr/stats.hpp"

namespace emdr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double range_of(std::span<const double> v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

std::vector<double> predict_linear(const DesignMatrix& design,
                                   const LassoFit& fit) {
    const std::size_t n = design.n_rows();
    std::vector<double> pred(n, fit.intercept);
    for (std::size_t j = 0; j < design.n_cols(); ++j) {
        if (fit.beta[j] == 0.0) continue;
        const auto& col = design.columns[j];
        for (std::size_t i = 0; i < n; ++i) pred[i] += fit.beta[j] * col[i];
    }
    return pred;
}

// Column description for one channel's component against a lag target.
EmdrColumn describe_column(const std::string& predictor, int order,
                           const Imf* imf, std::span<const double> residue,
                           std::span<const double> lag_target,
                           std::size_t series_len,
                           std::vector<std::string>& warnings) {
    EmdrColumn col;
    col.predictor = predictor;
    col.order = order;
    if (order == 0) {
        col.mean_period = kNaN;
        col.ccf = kNaN;
        col.amplitude = range_of(residue);
        return col;
    }
    double period = kNaN;
    try {
        period = mean_period(*imf);
    } catch (const TooFewPeaks&) {
        warnings.push_back("trend-like IMF (lag forced to 0): " + predictor +
                           " order " + std::to_string(order));
    }
    col.mean_period = period;
    int max_lag = 0;
    if (std::isfinite(period))
        max_lag = static_cast<int>(
            std::min(std::floor(period), static_cast<double>(series_len) / 4.0));
    col.max_lag = max_lag;
    if (max_lag > 0) {
        auto choice = select_lag(imf->values, lag_target, max_lag);
        col.lag = choice.lag;
        col.ccf = choice.ccf;
    }
    try {
        col.amplitude = peak_to_peak_amplitude(*imf);
    } catch (const TooFewExtrema&) {
        col.amplitude = range_of(imf->values);
        warnings.push_back("amplitude fell back to range for " + predictor +
                           " order " + std::to_string(order));
    }
    return col;
}

// Lagged, front-trimmed design: row t of the output corresponds to sample
// trim + t; a column with lag L reads source[trim + t - L].
void build_design(EmdrSubmodel& sub, const MultivariateDecomposition& dec,
                  std::size_t trim, std::size_t n_total) {
    const std::size_t rows = n_total - trim;
    sub.design.names.clear();
    sub.design.columns.clear();
    for (const auto& col : sub.columns) {
        const Decomposition& ch = dec.channel(col.predictor);
        const std::vector<double>& src =
            col.order == 0 ? ch.residue
                           : ch.imfs[static_cast<std::size_t>(col.order - 1)].values;
        std::vector<double> v(rows);
        for (std::size_t t = 0; t < rows; ++t)
            v[t] = src[trim + t - static_cast<std::size_t>(col.lag)];
        sub.design.columns.push_back(std::move(v));
        sub.design.names.push_back(
            col.predictor + (col.order == 0 ? "_residue"
                                            : "_imf_" + std::to_string(col.order)));
    }
}

void finalize_submodel(EmdrSubmodel& sub, const EmdrOptions& options,
                       bool one_se_rule, std::vector<std::string>& warnings) {
    auto sd = standardize(sub.design, sub.response);
    for (auto& w : sd.warnings) warnings.push_back(sub.label + ": " + w);

    auto grid = lambda_path(sd, options.n_lambda, options.lambda_ratio);
    sub.cv = cross_validate(sub.design, sub.response, grid, options.cv_folds,
                            options.cv_scheme,
                            derive_seed(options.seed, seed_stream::cv_folds),
                            options.n_threads);
    auto fits = lasso_path_fit(sd, grid);
    const std::size_t pick = one_se_rule ? sub.cv.one_se_index : sub.cv.min_index;
    sub.fit = fits[pick];
    if (!sub.fit.converged)
        warnings.push_back("NoConvergence: " + sub.label + " final gap " +
                           std::to_string(sub.fit.final_gap));
    sub.fitted = predict_linear(sub.design, sub.fit);
    sub.r2 = r_squared(sub.fit, sub.response);
    sub.gcv_value = gcv(sub.fit, sub.response.size());
}

} // namespace

LagChoice select_lag(std::span<const double> imf, std::span<const double> target,
                     int max_lag) {
    if (imf.size() != target.size())
        throw ChannelLengthMismatch("select_lag inputs differ in length");
    const std::size_t n = imf.size();
    max_lag = std::min<int>(max_lag, static_cast<int>(n) - 3);
    if (max_lag < 0) max_lag = 0;

    // All candidate lags are scored on the same target rows t = max_lag..n-1
    // (the rows a lagged design would keep). Per-lag overlap windows would
    // systematically favour larger lags by shedding boundary samples, and
    // periodic IMFs need genuine ties so the smallest lag can win them.
    // |ccf| differences below the tie window cannot separate lags on an
    // autocorrelated IMF (a half-period flip scores within ~3e-3 of lag 0);
    // a real lag shows up at the 0.1 scale.
    constexpr double kTieTol = 1e-2;
    const std::size_t m = n - static_cast<std::size_t>(max_lag);

    LagChoice best;
    double best_abs = -1.0;
    for (int lag = 0; lag <= max_lag; ++lag) {
        const std::size_t start = static_cast<std::size_t>(max_lag - lag);
        const double c =
            stats::correlation(imf.subspan(start, m),
                               target.subspan(static_cast<std::size_t>(max_lag), m));
        if (std::isnan(c)) continue; // degenerate window at this lag
        if (std::abs(c) > best_abs + kTieTol) {
            best_abs = std::abs(c);
            best.lag = lag;
            best.ccf = c;
        }
    }
    if (best_abs < 0.0)
        throw DegenerateSeries("zero variance in every lag window");
    return best;
}

EmdrModel fit_emdr1(const TimeSeries& y, const MultichannelSeries& predictors,
                    const EmdrOptions& options) {
    const std::size_t n = y.size();
    for (const auto& ch : predictors.channels)
        if (ch.size() != n) throw ChannelLengthMismatch("predictor length != y length");
    if (!y.all_finite()) throw NonFiniteInput("response has NaN/Inf");

    EmdrModel model;
    model.design = EmdrDesign::R1;
    model.response_name = options.response_name;
    model.predictor_names = predictors.names;
    for (const auto& name : predictors.names)
        if (name == model.response_name)
            throw ConfigError("response appears among the predictors");

    NoiseConfig noise = options.noise;
    noise.seed = options.seed;
    MemdOptions mopt{options.n_directions, options.standardize, options.n_threads};
    model.decomposition = na_memd_decompose(predictors, noise, options.sift, mopt);
    model.K = model.decomposition.K;
    for (auto& w : model.decomposition.warnings) model.warnings.push_back(w);
    if (model.K == 0) throw DegenerateSeries("decomposition produced no IMFs");

    EmdrSubmodel sub;
    sub.label = "r1";
    sub.order = -1;
    for (std::size_t j = 0; j < predictors.names.size(); ++j) {
        const auto& dec = model.decomposition.per_channel[j];
        for (std::size_t k = 0; k < model.K; ++k)
            sub.columns.push_back(describe_column(predictors.names[j],
                                                  static_cast<int>(k + 1),
                                                  &dec.imfs[k], dec.residue,
                                                  y.values, n, model.warnings));
        sub.columns.push_back(describe_column(predictors.names[j], 0, nullptr,
                                              dec.residue, y.values, n,
                                              model.warnings));
    }

    std::size_t trim = 0;
    for (const auto& c : sub.columns)
        trim = std::max(trim, static_cast<std::size_t>(c.lag));
    model.trim = trim;
    model.n_rows = n - trim;

    build_design(sub, model.decomposition, trim, n);
    sub.response.assign(y.values.begin() + static_cast<long>(trim), y.values.end());
    finalize_submodel(sub, options, /*one_se_rule=*/true, model.warnings);
    model.submodels.push_back(std::move(sub));
    return model;
}

EmdrModel fit_emdr2(const TimeSeries& y, const MultichannelSeries& predictors,
                    const EmdrOptions& options) {
    const std::size_t n = y.size();
    for (const auto& ch : predictors.channels)
        if (ch.size() != n) throw ChannelLengthMismatch("predictor length != y length");
    if (!y.all_finite()) throw NonFiniteInput("response has NaN/Inf");

    EmdrModel model;
    model.design = EmdrDesign::R2;
    model.response_name = options.response_name;
    model.predictor_names = predictors.names;
    for (const auto& name : predictors.names)
        if (name == model.response_name)
            throw ConfigError("response appears among the predictors");

    MultichannelSeries joint;
    joint.names.push_back(model.response_name); // distinct from predictors by guard
    joint.channels.push_back(y);
    for (std::size_t j = 0; j < predictors.n_channels(); ++j) {
        joint.names.push_back(predictors.names[j]);
        joint.channels.push_back(predictors.channels[j]);
    }

    NoiseConfig noise = options.noise;
    noise.seed = options.seed;
    MemdOptions mopt{options.n_directions, options.standardize, options.n_threads};
    model.decomposition = na_memd_decompose(joint, noise, options.sift, mopt);
    model.K = model.decomposition.K;
    for (auto& w : model.decomposition.warnings) model.warnings.push_back(w);
    if (model.K == 0) throw DegenerateSeries("decomposition produced no IMFs");

    const Decomposition& ydec = model.decomposition.channel(model.response_name);

    // one submodel per order plus the trend; lags bound to the same-order
    // response IMF, trimming shared so Eq.-style summation stays aligned
    std::vector<EmdrSubmodel> subs;
    for (std::size_t k = 0; k < model.K; ++k) {
        EmdrSubmodel sub;
        sub.label = "imf_" + std::to_string(k + 1);
        sub.order = static_cast<int>(k + 1);
        for (const auto& name : predictors.names) {
            const auto& dec = model.decomposition.channel(name);
            sub.columns.push_back(describe_column(name, static_cast<int>(k + 1),
                                                  &dec.imfs[k], dec.residue,
                                                  ydec.imfs[k].values, n,
                                                  model.warnings));
        }
        subs.push_back(std::move(sub));
    }
    {
        EmdrSubmodel trend;
        trend.label = "trend";
        trend.order = 0;
        for (const auto& name : predictors.names) {
            const auto& dec = model.decomposition.channel(name);
            trend.columns.push_back(describe_column(name, 0, nullptr, dec.residue,
                                                    ydec.residue, n,
                                                    model.warnings));
        }
        subs.push_back(std::move(trend));
    }

    std::size_t trim = 0;
    for (const auto& sub : subs)
        for (const auto& c : sub.columns)
            trim = std::max(trim, static_cast<std::size_t>(c.lag));
    model.trim = trim;
    model.n_rows = n - trim;

    for (auto& sub : subs) {
        build_design(sub, model.decomposition, trim, n);
        const std::vector<double>& target =
            sub.order == 0 ? ydec.residue
                           : ydec.imfs[static_cast<std::size_t>(sub.order - 1)].values;
        sub.response.assign(target.begin() + static_cast<long>(trim), target.end());
        finalize_submodel(sub, options, /*one_se_rule=*/false, model.warnings);
        model.submodels.push_back(std::move(sub));
    }
    return model;
}

std::vector<double> predict_r2(const EmdrModel& model,
                               const MultivariateDecomposition& predictor_dec) {
    if (model.design != EmdrDesign::R2)
        throw DesignMismatch("predict_r2 requires an R2 model");
    if (predictor_dec.K < model.K)
        throw DesignMismatch("decomposition has fewer IMF orders than the model");

    std::vector<double> sum;
    for (const auto& sub : model.submodels) {
        EmdrSubmodel scratch;
        scratch.columns = sub.columns;
        const std::size_t n_total = predictor_dec.per_channel.front().source_len;
        if (n_total < model.trim + 1)
            throw DesignMismatch("series shorter than the model trim");
        build_design(scratch, predictor_dec, model.trim, n_total);
        auto pred = predict_linear(scratch.design, sub.fit);
        if (sum.empty())
            sum = std::move(pred);
        else {
            if (pred.size() != sum.size())
                throw DesignMismatch("submodel prediction length mismatch");
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += pred[i];
        }
    }
    return sum;
}

namespace {

// residual/total sums against the trimmed raw response
std::pair<double, double> overall_rss_tss(const EmdrModel& model,
                                          const TimeSeries& y) {
    std::vector<double> pred;
    if (model.design == EmdrDesign::R1)
        pred = model.submodels.front().fitted;
    else
        pred = predict_r2(model, model.decomposition);
    const std::size_t trim = model.trim;
    if (y.size() != trim + pred.size())
        throw DesignMismatch("response length does not match the fitted model");
    std::span<const double> yt(y.values.data() + trim, pred.size());
    const double mu = stats::mean(yt);
    double rss = 0.0, tss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        rss += (yt[i] - pred[i]) * (yt[i] - pred[i]);
        tss += (yt[i] - mu) * (yt[i] - mu);
    }
    if (tss <= 0.0) throw ZeroVarianceResponse("response has zero variance");
    return {rss, tss};
}

} // namespace

double overall_r_squared(const EmdrModel& model, const TimeSeries& y) {
    auto [rss, tss] = overall_rss_tss(model, y);
    return 1.0 - rss / tss;
}

double overall_gcv(const EmdrModel& model, const TimeSeries& y) {
    auto [rss, tss] = overall_rss_tss(model, y);
    (void)tss;
    const double n = static_cast<double>(model.n_rows);
    double df_eff = 0.0;
    for (const auto& sub : model.submodels)
        df_eff += static_cast<double>(sub.fit.df) + 1.0;
    if (df_eff >= n) return std::numeric_limits<double>::infinity();
    const double denom = 1.0 - df_eff / n;
    return (rss / n) / (denom * denom);
}

std::vector<SensitivityRow> sensitivities(const EmdrModel& model) {
    std::vector<SensitivityRow> rows;
    for (const auto& sub : model.submodels) {
        for (std::size_t j = 0; j < sub.columns.size(); ++j) {
            const double beta = sub.fit.beta[j];
            if (beta == 0.0) continue;
            SensitivityRow row;
            row.submodel = sub.label;
            row.predictor = sub.columns[j].predictor;
            row.order = sub.columns[j].order;
            row.mean_period = sub.columns[j].mean_period;
            row.lag = sub.columns[j].lag;
            row.beta = beta;
            row.amplitude = sub.columns[j].amplitude;
            row.sensitivity = beta * sub.columns[j].amplitude;
            rows.push_back(row);
        }
    }
    return rows;
}

std::size_t auto_block_length(std::size_t n) {
    return static_cast<std::size_t>(
        std::ceil(std::cbrt(static_cast<double>(n))));
}

namespace {

std::vector<std::size_t> block_resample_rows(std::size_t n, std::size_t block_len,
                                             std::mt19937_64& engine) {
    std::uniform_int_distribution<std::size_t> start(0, n - block_len);
    std::vector<std::size_t> rows;
    rows.reserve(n + block_len);
    while (rows.size() < n) {
        const std::size_t s = start(engine);
        for (std::size_t i = 0; i < block_len && rows.size() < n + block_len; ++i)
            rows.push_back(s + i);
    }
    rows.resize(n);
    return rows;
}

CoefInterval percentile_interval(std::vector<double>& draws, double point) {
    std::sort(draws.begin(), draws.end());
    auto quantile = [&](double q) {
        const double h = q * static_cast<double>(draws.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, draws.size() - 1);
        return draws[lo] + (h - static_cast<double>(lo)) * (draws[hi] - draws[lo]);
    };
    CoefInterval ci;
    ci.point = point;
    ci.lower = quantile(0.025);
    ci.upper = quantile(0.975);
    ci.significant = ci.lower > 0.0 || ci.upper < 0.0;
    return ci;
}

} // namespace

std::vector<CoefInterval> bootstrap_lasso_ci(const DesignMatrix& design,
                                             std::span<const double> y,
                                             double lambda, int B,
                                             std::size_t block_len,
                                             std::uint64_t seed,
                                             unsigned n_threads,
                                             const LassoFit* center) {
    const std::size_t n = design.n_rows();
    if (B < 2) throw ConfigError("bootstrap needs B >= 2");
    if (block_len < 1 || block_len > n / 2)
        throw BadBlockLength("block length must be in [1, n/2]");

    const std::size_t p = design.n_cols();
    std::vector<std::vector<double>> draws(
        static_cast<std::size_t>(B), std::vector<double>(p, 0.0));

    parallel_for(static_cast<std::size_t>(B), n_threads, [&](std::size_t b) {
        auto engine =
            make_engine(derive_seed(seed, seed_stream::bootstrap, b));
        auto rows = block_resample_rows(n, block_len, engine);
        DesignMatrix dm;
        dm.names = design.names;
        dm.columns.resize(p);
        for (std::size_t j = 0; j < p; ++j) {
            dm.columns[j].resize(n);
            for (std::size_t i = 0; i < n; ++i)
                dm.columns[j][i] = design.columns[j][rows[i]];
        }
        std::vector<double> yb(n);
        for (std::size_t i = 0; i < n; ++i) yb[i] = y[rows[i]];

        auto sd = standardize(dm, yb);
        // warm start from the center fit when column sets agree
        std::vector<double> warm;
        if (center && sd.n_cols() == sd.p_original &&
            center->beta_std.size() == sd.n_cols())
            warm = center->beta_std;
        auto fit = lasso_coordinate_descent(sd, lambda,
                                            warm.empty() ? nullptr : &warm);
        draws[b] = fit.beta;
    });

    std::vector<CoefInterval> out(p);
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> dj(static_cast<std::size_t>(B));
        for (int b = 0; b < B; ++b) dj[static_cast<std::size_t>(b)] =
            draws[static_cast<std::size_t>(b)][j];
        out[j] = percentile_interval(dj, center ? center->beta[j] : 0.0);
    }
    return out;
}

BootstrapResult block_bootstrap(const EmdrModel& model, int B,
                                std::size_t block_len, std::uint64_t seed,
                                unsigned n_threads) {
    BootstrapResult res;
    res.B = B;
    res.block_len = block_len == 0 ? auto_block_length(model.n_rows) : block_len;
    for (std::size_t s = 0; s < model.submodels.size(); ++s) {
        const auto& sub = model.submodels[s];
        res.per_submodel.push_back(bootstrap_lasso_ci(
            sub.design, sub.response, sub.fit.lambda, B, res.block_len,
            derive_seed(seed, seed_stream::bootstrap, 0x1000 + s), n_threads,
            &sub.fit));
    }
    return res;
}

void attach_bootstrap(std::vector<SensitivityRow>& rows, const EmdrModel& model,
                      const BootstrapResult& boot) {
    for (auto& row : rows) {
        for (std::size_t s = 0; s < model.submodels.size(); ++s) {
            const auto& sub = model.submodels[s];
            if (sub.label != row.submodel) continue;
            for (std::size_t j = 0; j < sub.columns.size(); ++j) {
                if (sub.columns[j].predictor != row.predictor ||
                    sub.columns[j].order != row.order)
                    continue;
                const CoefInterval& ci = boot.per_submodel[s][j];
                const double a = row.amplitude;
                row.ci_lower = std::min(ci.lower * a, ci.upper * a);
                row.ci_upper = std::max(ci.lower * a, ci.upper * a);
                row.has_ci = true;
                row.significant = ci.significant;
            }
        }
    }
}

} // namespace emdr
