#include "emdr/memd.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "emdr/parallel.hpp"
#include "emdr/rng.hpp"
#include "emdr/stats.hpp"

namespace emdr {

namespace {

double radical_inverse(std::size_t i, unsigned base) {
    double inv_base = 1.0 / base, f = inv_base, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv_base;
    }
    return r;
}

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.15e-9 over (0, 1).
double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

void normalize(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
}

using Matrix = std::vector<std::vector<double>>; // [channel][t]

std::vector<double> project(const Matrix& h, const std::vector<double>& dir,
                            std::size_t n) {
    std::vector<double> s(n, 0.0);
    for (std::size_t ch = 0; ch < h.size(); ++ch) {
        const double w = dir[ch];
        const auto& col = h[ch];
        for (std::size_t t = 0; t < n; ++t) s[t] += w * col[t];
    }
    return s;
}

std::size_t count_oscillating(const Matrix& resid, const DirectionSet& dirs,
                              std::size_t n) {
    std::size_t c = 0;
    for (const auto& d : dirs.vectors) {
        auto s = project(resid, d, n);
        if (find_extrema(s).total() >= 3) ++c;
    }
    return c;
}

} // namespace

const Decomposition& MultivariateDecomposition::channel(
    const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return per_channel[i];
    throw BadDimension("unknown channel: " + name);
}

DirectionSet generate_directions(std::size_t p, std::size_t count,
                                 std::uint64_t seed) {
    if (p < 2) throw BadDimension("direction set needs dimension >= 2");
    if (count < 2 * p)
        throw BadDimension("direction count must be >= 2p");

    static const unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                      23, 29, 31, 37, 41, 43, 47, 53};
    const std::size_t offset = static_cast<std::size_t>(seed % count);

    DirectionSet out;
    out.vectors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t idx = (i + offset) % count;
        const double u1 = (static_cast<double>(idx) + 0.5) / static_cast<double>(count);
        std::vector<double> v(p);
        if (p == 2) {
            const double theta = 2.0 * M_PI * u1;
            v[0] = std::cos(theta);
            v[1] = std::sin(theta);
        } else if (p == 3) {
            // cylindrical equal-area map of the 2D Hammersley point
            const double z = 2.0 * u1 - 1.0;
            const double phi = 2.0 * M_PI * radical_inverse(idx, 2);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            v[0] = rho * std::cos(phi);
            v[1] = rho * std::sin(phi);
            v[2] = z;
        } else {
            // Gaussian-quantile map: quasi-uniform for any dimension
            v[0] = inverse_normal_cdf(u1);
            for (std::size_t j = 1; j < p; ++j) {
                if (j - 1 >= std::size(primes))
                    throw BadDimension("direction dimension too large");
                double u = radical_inverse(idx, primes[j - 1]);
                u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
                v[j] = inverse_normal_cdf(u);
            }
            normalize(v);
        }
        normalize(v);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

MultivariateDecomposition memd_decompose(const MultichannelSeries& series,
                                         const DirectionSet& dirs,
                                         const SiftParams& params,
                                         unsigned n_threads) {
    series.validate();
    const std::size_t p = series.n_channels();
    const std::size_t n = series.length();
    if (n < 8 * p) throw SeriesTooShort("memd needs length >= 8p");
    if (dirs.dimension() != p)
        throw BadDimension("direction set dimension does not match channel count");

    MultivariateDecomposition out;
    out.names = series.names;

    Matrix resid(p);
    for (std::size_t ch = 0; ch < p; ++ch) resid[ch] = series.channels[ch].values;

    std::vector<Matrix> imfs; // [k][channel][t]

    const std::size_t ndir = dirs.count();
    while (params.max_imfs <= 0 ||
           static_cast<int>(imfs.size()) < params.max_imfs) {
        if (count_oscillating(resid, dirs, n) < 3) break;

        Matrix h = resid;
        // per-direction envelope slots, reduced in direction order
        std::vector<Matrix> env(ndir);
        std::vector<char> active(ndir, 0);

        bool emitted = false;
        int iter = 0;
        for (; iter < params.max_sift_iters; ++iter) {
            parallel_for(ndir, n_threads, [&](std::size_t i) {
                auto s = project(h, dirs.vectors[i], n);
                auto ex = find_extrema(s);
                if (ex.maxima.size() < 2) {
                    active[i] = 0;
                    return;
                }
                Matrix e(p);
                for (std::size_t ch = 0; ch < p; ++ch) {
                    std::vector<Extremum> knots;
                    knots.reserve(ex.maxima.size());
                    for (const auto& k : ex.maxima)
                        knots.push_back({k.index, h[ch][static_cast<std::size_t>(k.index)]});
                    e[ch] = spline_envelope(h[ch], knots, params.boundary, n);
                }
                env[i] = std::move(e);
                active[i] = 1;
            });

            std::size_t n_active = 0;
            for (std::size_t i = 0; i < ndir; ++i) n_active += active[i];
            if (n_active == 0) {
                emitted = iter > 0;
                break;
            }

            // multivariate mean and envelope spread
            Matrix m(p, std::vector<double>(n, 0.0));
            for (std::size_t i = 0; i < ndir; ++i) {
                if (!active[i]) continue;
                for (std::size_t ch = 0; ch < p; ++ch)
                    for (std::size_t t = 0; t < n; ++t) m[ch][t] += env[i][ch][t];
            }
            for (std::size_t ch = 0; ch < p; ++ch)
                for (std::size_t t = 0; t < n; ++t)
                    m[ch][t] /= static_cast<double>(n_active);

            std::vector<double> amp(n, 0.0);
            for (std::size_t i = 0; i < ndir; ++i) {
                if (!active[i]) continue;
                for (std::size_t t = 0; t < n; ++t) {
                    double d2 = 0.0;
                    for (std::size_t ch = 0; ch < p; ++ch) {
                        const double d = env[i][ch][t] - m[ch][t];
                        d2 += d * d;
                    }
                    amp[t] += std::sqrt(d2);
                }
            }
            for (std::size_t t = 0; t < n; ++t)
                amp[t] /= static_cast<double>(n_active);

            // Rilling criterion on sigma = ||m|| / amp
            std::size_t considered = 0, below_theta1 = 0;
            bool hard_violated = false;
            for (std::size_t t = 0; t < n && !hard_violated; ++t) {
                if (amp[t] < 1e-12) continue;
                double m2 = 0.0;
                for (std::size_t ch = 0; ch < p; ++ch) m2 += m[ch][t] * m[ch][t];
                const double sigma = std::sqrt(m2) / amp[t];
                ++considered;
                if (sigma >= params.theta2) hard_violated = true;
                if (sigma < params.theta1) ++below_theta1;
            }
            const bool stop =
                !hard_violated &&
                (considered == 0 ||
                 static_cast<double>(below_theta1) >=
                     (1.0 - params.alpha) * static_cast<double>(considered));
            if (stop) {
                emitted = true;
                break;
            }
            for (std::size_t ch = 0; ch < p; ++ch)
                for (std::size_t t = 0; t < n; ++t) h[ch][t] -= m[ch][t];
        }
        if (iter == params.max_sift_iters) {
            out.warnings.push_back("multivariate sift iteration cap hit at IMF " +
                                   std::to_string(imfs.size() + 1));
            emitted = true;
        }
        if (!emitted) break;

        for (std::size_t ch = 0; ch < p; ++ch)
            for (std::size_t t = 0; t < n; ++t) resid[ch][t] -= h[ch][t];
        imfs.push_back(std::move(h));
    }

    out.K = imfs.size();
    out.per_channel.resize(p);
    for (std::size_t ch = 0; ch < p; ++ch) {
        Decomposition& dec = out.per_channel[ch];
        dec.source_len = n;
        for (std::size_t k = 0; k < imfs.size(); ++k) {
            Imf imf;
            imf.values = std::move(imfs[k][ch]);
            imf.order = static_cast<int>(k) + 1;
            imf.dt = series.channels[ch].dt;
            dec.imfs.push_back(std::move(imf));
        }
        dec.residue = std::move(resid[ch]);
    }
    return out;
}

MultivariateDecomposition na_memd_decompose(const MultichannelSeries& series,
                                            const NoiseConfig& noise,
                                            const SiftParams& params,
                                            const MemdOptions& options) {
    // a single data channel is fine here: the noise channels bring the
    // augmented signal up to the >= 2 channels MEMD itself requires
    if (series.channels.empty())
        throw BadDimension("na_memd needs at least one channel");
    for (const auto& c : series.channels) {
        if (c.size() != series.length())
            throw ChannelLengthMismatch("channel lengths differ");
        if (!c.all_finite()) throw NonFiniteInput("channel contains NaN/Inf");
    }
    if (noise.n_noise < 1) throw BadDimension("n_noise must be >= 1");
    if (noise.variance_ratio <= 0.0 || noise.variance_ratio >= 1.0)
        throw BadDimension("variance_ratio must be in (0, 1)");

    const std::size_t p_data = series.n_channels();
    const std::size_t n = series.length();

    MultichannelSeries work;
    work.names = series.names;
    work.channels = series.channels;

    std::vector<double> ch_mean(p_data, 0.0), ch_sd(p_data, 1.0);
    if (options.standardize) {
        for (std::size_t ch = 0; ch < p_data; ++ch) {
            auto& v = work.channels[ch].values;
            ch_mean[ch] = stats::mean(v);
            ch_sd[ch] = stats::sd(v);
            if (ch_sd[ch] <= 0.0)
                throw DegenerateSeries("constant channel cannot be standardized: " +
                                       series.names[ch]);
            for (double& x : v) x = (x - ch_mean[ch]) / ch_sd[ch];
        }
    }

    double var_base = 0.0;
    for (std::size_t ch = 0; ch < p_data; ++ch)
        var_base += stats::variance(work.channels[ch].values);
    var_base /= static_cast<double>(p_data);

    const double noise_sd = std::sqrt(noise.variance_ratio * var_base);
    auto engine = make_engine(derive_seed(noise.seed, seed_stream::noise));
    std::normal_distribution<double> gauss(0.0, noise_sd);
    for (int j = 0; j < noise.n_noise; ++j) {
        TimeSeries ns;
        ns.dt = series.channels[0].dt;
        ns.values.resize(n);
        for (auto& x : ns.values) x = gauss(engine);
        work.channels.push_back(std::move(ns));
        work.names.push_back("__noise_" + std::to_string(j + 1));
    }

    const std::size_t p = work.n_channels();
    auto dirs = generate_directions(p, options.n_directions,
                                    derive_seed(noise.seed, seed_stream::directions));
    auto full = memd_decompose(work, dirs, params, options.n_threads);

    MultivariateDecomposition out;
    out.K = full.K;
    out.warnings = std::move(full.warnings);
    out.names = series.names;
    out.per_channel.assign(full.per_channel.begin(),
                           full.per_channel.begin() + static_cast<long>(p_data));

    if (options.standardize) {
        for (std::size_t ch = 0; ch < p_data; ++ch) {
            Decomposition& dec = out.per_channel[ch];
            for (auto& imf : dec.imfs)
                for (double& x : imf.values) x *= ch_sd[ch];
            for (double& x : dec.residue) x = x * ch_sd[ch] + ch_mean[ch];
        }
    }
    return out;
}

} // namespace emdr
