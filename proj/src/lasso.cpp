#include "emdr/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "emdr/parallel.hpp"
#include "emdr/rng.hpp"
#include "emdr/stats.hpp"

namespace emdr {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

constexpr double kCoefTol = 1e-7;
constexpr int kMaxSweeps = 10000;

} // namespace

StandardizedDesign standardize(const DesignMatrix& design,
                               std::span<const double> y) {
    const std::size_t n = design.n_rows();
    if (n < 3) throw TooFewRows("standardize needs n >= 3");
    if (y.size() != n) throw ChannelLengthMismatch("y length != design rows");

    StandardizedDesign out;
    out.p_original = design.n_cols();
    out.scale.y_mean = stats::mean(y);
    out.y_centered.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.y_centered[i] = y[i] - out.scale.y_mean;

    for (std::size_t j = 0; j < design.n_cols(); ++j) {
        const auto& col = design.columns[j];
        for (double v : col)
            if (!std::isfinite(v)) throw NonFiniteInput("design column " +
                                                        design.names[j]);
        const double mu = stats::mean(col);
        const double sd = stats::sd(col);
        if (sd < 1e-13 * (1.0 + std::abs(mu))) {
            out.warnings.push_back("DegenerateColumn: dropped constant column " +
                                   (j < design.names.size() ? design.names[j]
                                                            : std::to_string(j)));
            continue;
        }
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = (col[i] - mu) / sd;
        out.columns.push_back(std::move(z));
        out.scale.kept.push_back(j);
        out.scale.col_mean.push_back(mu);
        out.scale.col_sd.push_back(sd);
    }
    return out;
}

LassoFit lasso_coordinate_descent(const StandardizedDesign& sd, double lambda,
                                  const std::vector<double>* warm_start) {
    const std::size_t n = sd.n_rows();
    const std::size_t p = sd.n_cols();
    const double dn = static_cast<double>(n);

    std::vector<double> b(p, 0.0);
    if (warm_start && warm_start->size() == p) b = *warm_start;

    std::vector<double> r = sd.y_centered;
    for (std::size_t j = 0; j < p; ++j)
        if (b[j] != 0.0)
            for (std::size_t i = 0; i < n; ++i) r[i] -= b[j] * sd.columns[j][i];

    auto objective = [&]() {
        double l1 = 0.0;
        for (double v : b) l1 += std::abs(v);
        return dot(r, r) / (2.0 * dn) + lambda * l1;
    };

    LassoFit fit;
    fit.lambda = lambda;
    fit.objective_monotone = true;

    double prev_obj = objective();
    double gap = std::numeric_limits<double>::infinity();
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        gap = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const auto& xj = sd.columns[j];
            // <x_j, x_j> = n for standardized columns
            const double rho = dot(xj, r) / dn + b[j];
            const double bj = soft_threshold(rho, lambda);
            const double delta = bj - b[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) r[i] -= delta * xj[i];
                b[j] = bj;
            }
            gap = std::max(gap, std::abs(delta));
        }
        const double obj = objective();
        if (obj > prev_obj + 1e-12 * (1.0 + std::abs(prev_obj)))
            fit.objective_monotone = false;
        prev_obj = obj;
        if (gap < kCoefTol) {
            ++sweep;
            break;
        }
    }
    fit.n_sweeps = sweep;
    fit.final_gap = gap;
    fit.converged = gap < kCoefTol;

    fit.beta_std = b;
    fit.beta.assign(sd.p_original, 0.0);
    fit.intercept = sd.scale.y_mean;
    for (std::size_t j = 0; j < p; ++j) {
        if (b[j] == 0.0) continue;
        ++fit.df;
        const double orig = b[j] / sd.scale.col_sd[j];
        fit.beta[sd.scale.kept[j]] = orig;
        fit.intercept -= orig * sd.scale.col_mean[j];
    }
    fit.rss = dot(r, r);
    return fit;
}

double lambda_max(const StandardizedDesign& sd) {
    double m = 0.0;
    for (const auto& col : sd.columns)
        m = std::max(m, std::abs(dot(col, sd.y_centered)) /
                            static_cast<double>(sd.n_rows()));
    return m;
}

std::vector<double> lambda_path(const StandardizedDesign& sd, int n_lambda,
                                double ratio) {
    const double lmax = lambda_max(sd);
    if (lmax <= 0.0)
        throw AllZeroCorrelation("all predictors uncorrelated with response");
    std::vector<double> grid(static_cast<std::size_t>(n_lambda));
    const double log_max = std::log(lmax);
    const double log_min = std::log(lmax * ratio);
    for (int i = 0; i < n_lambda; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(log_max + (log_min - log_max) * static_cast<double>(i) /
                                   static_cast<double>(n_lambda - 1));
    grid[0] = lmax; // exact boundary
    return grid;
}

std::vector<LassoFit> lasso_path_fit(const StandardizedDesign& sd,
                                     const std::vector<double>& grid) {
    std::vector<LassoFit> fits;
    fits.reserve(grid.size());
    const std::vector<double>* warm = nullptr;
    for (double lambda : grid) {
        fits.push_back(lasso_coordinate_descent(sd, lambda, warm));
        warm = &fits.back().beta_std;
    }
    return fits;
}

CvResult cross_validate(const DesignMatrix& design, std::span<const double> y,
                        const std::vector<double>& grid, int k,
                        CvScheme scheme, std::uint64_t seed,
                        unsigned n_threads) {
    const std::size_t n = design.n_rows();
    if (k < 2) throw ConfigError("cross-validation needs k >= 2");
    if (n < 2 * static_cast<std::size_t>(k))
        throw TooFewRows("cross-validation needs n >= 2k");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (scheme == CvScheme::Random) {
        auto engine = make_engine(derive_seed(seed, seed_stream::cv_folds));
        std::shuffle(order.begin(), order.end(), engine);
    }

    // fold f holds rows order[f*n/k .. (f+1)*n/k)
    std::vector<std::size_t> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t f = i * static_cast<std::size_t>(k) / n;
        fold_of[order[i]] = std::min<std::size_t>(f, static_cast<std::size_t>(k) - 1);
    }

    const std::size_t L = grid.size();
    std::vector<std::vector<double>> fold_err(
        static_cast<std::size_t>(k), std::vector<double>(L, 0.0));

    parallel_for(static_cast<std::size_t>(k), n_threads, [&](std::size_t f) {
        DesignMatrix train;
        train.names = design.names;
        train.columns.resize(design.n_cols());
        std::vector<double> y_train;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of[i] == f) {
                test_rows.push_back(i);
            } else {
                for (std::size_t j = 0; j < design.n_cols(); ++j)
                    train.columns[j].push_back(design.columns[j][i]);
                y_train.push_back(y[i]);
            }
        }
        auto sd = standardize(train, y_train);
        auto fits = lasso_path_fit(sd, grid);
        for (std::size_t li = 0; li < L; ++li) {
            const LassoFit& fit = fits[li];
            double se = 0.0;
            for (std::size_t i : test_rows) {
                double pred = fit.intercept;
                for (std::size_t j = 0; j < design.n_cols(); ++j)
                    if (fit.beta[j] != 0.0) pred += fit.beta[j] * design.columns[j][i];
                const double e = y[i] - pred;
                se += e * e;
            }
            fold_err[f][li] = se / static_cast<double>(test_rows.size());
        }
    });

    CvResult res;
    res.lambda_grid = grid;
    res.cv_mean.resize(L);
    res.cv_se.resize(L);
    const double dk = static_cast<double>(k);
    for (std::size_t li = 0; li < L; ++li) {
        double m = 0.0;
        for (int f = 0; f < k; ++f) m += fold_err[static_cast<std::size_t>(f)][li];
        m /= dk;
        double v = 0.0;
        for (int f = 0; f < k; ++f) {
            const double d = fold_err[static_cast<std::size_t>(f)][li] - m;
            v += d * d;
        }
        v /= (dk - 1.0); // sample variance of fold errors
        res.cv_mean[li] = m;
        res.cv_se[li] = std::sqrt(v / dk);
    }

    res.min_index = 0;
    for (std::size_t li = 1; li < L; ++li)
        if (res.cv_mean[li] < res.cv_mean[res.min_index]) res.min_index = li;
    res.lambda_min = grid[res.min_index];

    const double bar = res.cv_mean[res.min_index] + res.cv_se[res.min_index];
    res.one_se_index = res.min_index;
    for (std::size_t li = 0; li <= res.min_index; ++li) {
        if (res.cv_mean[li] <= bar) {
            res.one_se_index = li;
            break;
        }
    }
    res.lambda_1se = grid[res.one_se_index];
    return res;
}

double r_squared(const LassoFit& fit, std::span<const double> y) {
    const double mu = stats::mean(y);
    double tss = 0.0;
    for (double v : y) tss += (v - mu) * (v - mu);
    if (tss <= 0.0) throw ZeroVarianceResponse("response has zero variance");
    return 1.0 - fit.rss / tss;
}

double gcv(const LassoFit& fit, std::size_t n) {
    const double dn = static_cast<double>(n);
    const double df_eff = static_cast<double>(fit.df) + 1.0;
    if (df_eff >= dn) return std::numeric_limits<double>::infinity();
    const double denom = 1.0 - df_eff / dn;
    return (fit.rss / dn) / (denom * denom);
}

double kkt_violation(const StandardizedDesign& sd, const LassoFit& fit) {
    const std::size_t n = sd.n_rows();
    std::vector<double> r = sd.y_centered;
    for (std::size_t j = 0; j < sd.n_cols(); ++j)
        if (fit.beta_std[j] != 0.0)
            for (std::size_t i = 0; i < n; ++i)
                r[i] -= fit.beta_std[j] * sd.columns[j][i];

    double worst = 0.0;
    for (std::size_t j = 0; j < sd.n_cols(); ++j) {
        const double g = dot(sd.columns[j], r) / static_cast<double>(n);
        if (fit.beta_std[j] != 0.0) {
            const double s = fit.beta_std[j] > 0.0 ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(g - fit.lambda * s));
        } else {
            worst = std::max(worst, std::max(0.0, std::abs(g) - fit.lambda));
        }
    }
    return worst;
}

} // namespace emdr
