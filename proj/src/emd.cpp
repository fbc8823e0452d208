#include "emdr/emd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>

#include <fftw3.h>

namespace emdr {

namespace detail {

std::size_t count_interior_extrema(std::span<const double> values) {
    if (values.size() < 3) return 0;
    auto ex = find_extrema(values);
    return ex.total();
}

bool analyze_for_sift(std::span<const double> h, BoundaryPolicy boundary,
                      SiftState& out, std::size_t min_each) {
    out.extrema = find_extrema(h);
    if (out.extrema.maxima.size() < min_each || out.extrema.minima.size() < min_each)
        return false;
    out.env.upper = spline_envelope(h, out.extrema.maxima, boundary, h.size());
    out.env.lower = spline_envelope(h, out.extrema.minima, boundary, h.size());
    out.mean = envelope_mean(out.env);
    return true;
}

} // namespace detail

std::pair<std::vector<double>, std::vector<double>> sift_once(
    std::span<const double> h, BoundaryPolicy boundary) {
    detail::SiftState st;
    if (!detail::analyze_for_sift(h, boundary, st, 2))
        throw InsufficientExtrema("signal is a residue: fewer than 2 maxima or 2 minima");
    std::vector<double> next(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) next[i] = h[i] - st.mean[i];
    return {std::move(next), std::move(st.mean)};
}

bool rilling_stop(std::span<const double> h, const Envelope& env,
                  const SiftParams& params) {
    (void)h;
    const std::size_t n = env.upper.size();
    std::size_t considered = 0, below_theta1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 0.5 * (env.upper[i] - env.lower[i]);
        if (a < 1e-12) continue;
        const double sigma = std::abs(0.5 * (env.upper[i] + env.lower[i])) / a;
        ++considered;
        if (sigma >= params.theta2) return false;
        if (sigma < params.theta1) ++below_theta1;
    }
    if (considered == 0) return true;
    return static_cast<double>(below_theta1) >=
           (1.0 - params.alpha) * static_cast<double>(considered);
}

double Decomposition::reconstruction_error(std::span<const double> source) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        double sum = residue[i];
        for (const auto& imf : imfs) sum += imf.values[i];
        worst = std::max(worst, std::abs(source[i] - sum));
    }
    return worst;
}

Decomposition emd_decompose(const TimeSeries& series, const SiftParams& params) {
    const std::size_t n = series.size();
    if (n < 8) throw SeriesTooShort("emd_decompose needs length >= 8");
    if (!series.all_finite()) throw NonFiniteInput("emd_decompose input has NaN/Inf");

    Decomposition dec;
    dec.source_len = n;
    std::vector<double> residue = series.values;

    const auto [src_lo, src_hi] =
        std::minmax_element(series.values.begin(), series.values.end());
    const double flat_floor = 1e-12 * (*src_hi - *src_lo);

    while (params.max_imfs <= 0 ||
           static_cast<int>(dec.imfs.size()) < params.max_imfs) {
        // numerically flat residues only carry fp dust; their "extrema" must
        // not trigger further extraction
        const auto [r_lo, r_hi] = std::minmax_element(residue.begin(), residue.end());
        if (*r_hi - *r_lo <= flat_floor) break;
        const std::size_t n_ext = detail::count_interior_extrema(residue);
        if (n_ext < 2) {
            if (n_ext == 1)
                dec.warnings.push_back("residue kept a single interior extremum");
            break;
        }

        std::vector<double> h = residue;
        detail::SiftState st;
        bool emitted = false;
        int iter = 0;
        for (; iter < params.max_sift_iters; ++iter) {
            if (!detail::analyze_for_sift(h, params.boundary, st, 1)) {
                if (iter == 0) {
                    // 2 interior extrema but not 2 of each kind: treat as residue
                    emitted = false;
                } else {
                    emitted = true; // prototype degenerated mid-sift, accept it
                }
                break;
            }
            if (rilling_stop(h, st.env, params)) {
                emitted = true;
                break;
            }
            for (std::size_t i = 0; i < n; ++i) h[i] -= st.mean[i];
        }
        if (iter == params.max_sift_iters) {
            dec.warnings.push_back("sift iteration cap hit at IMF " +
                                   std::to_string(dec.imfs.size() + 1));
            emitted = true;
        }
        if (!emitted) break;

        Imf imf;
        imf.values = h;
        imf.order = static_cast<int>(dec.imfs.size()) + 1;
        imf.dt = series.dt;
        for (std::size_t i = 0; i < n; ++i) residue[i] -= h[i];
        dec.imfs.push_back(std::move(imf));
    }

    dec.residue = std::move(residue);

    // post-hoc IMF property check: zero crossings vs extrema differ by <= 1,
    // tolerating violations on up to 1% of candidates before flagging
    std::size_t violations = 0;
    for (const auto& imf : dec.imfs) {
        const auto ex = find_extrema(imf.values);
        std::size_t zc = 0;
        for (std::size_t t = 1; t < n; ++t)
            if ((imf.values[t - 1] < 0.0) != (imf.values[t] < 0.0)) ++zc;
        const long diff = static_cast<long>(zc) - static_cast<long>(ex.total());
        if (diff > 1 || diff < -1) ++violations;
    }
    if (!dec.imfs.empty() &&
        static_cast<double>(violations) >
            0.01 * static_cast<double>(dec.imfs.size()))
        dec.warnings.push_back(
            "IMF count/zero-crossing property violated on " +
            std::to_string(violations) + " of " +
            std::to_string(dec.imfs.size()) + " components");
    return dec;
}

double mean_period(const Imf& imf) {
    auto ex = find_extrema(imf.values);
    if (ex.maxima.size() < 2)
        throw TooFewPeaks("mean_period needs >= 2 maxima");
    double sum = 0.0;
    for (std::size_t i = 1; i < ex.maxima.size(); ++i)
        sum += static_cast<double>(ex.maxima[i].index - ex.maxima[i - 1].index);
    return sum / static_cast<double>(ex.maxima.size() - 1) * imf.dt;
}

double peak_to_peak_amplitude(const Imf& imf) {
    auto ex = find_extrema(imf.values);
    if (ex.maxima.empty() || ex.minima.empty())
        throw TooFewExtrema("peak_to_peak_amplitude needs a maximum and a minimum");
    std::vector<Extremum> all;
    all.reserve(ex.total());
    std::merge(ex.maxima.begin(), ex.maxima.end(), ex.minima.begin(),
               ex.minima.end(), std::back_inserter(all),
               [](const Extremum& a, const Extremum& b) { return a.index < b.index; });
    double sum = 0.0;
    for (std::size_t i = 1; i < all.size(); ++i)
        sum += std::abs(all[i].value - all[i - 1].value);
    return sum / static_cast<double>(all.size() - 1);
}

namespace {
std::mutex fftw_plan_mutex; // FFTW planning is not thread-safe
}

std::vector<double> instantaneous_amplitude(const Imf& imf) {
    const std::size_t n = imf.values.size();
    if (n < 8) throw SeriesTooShort("instantaneous_amplitude needs length >= 8");

    std::vector<std::complex<double>> buf(n), spec(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = imf.values[i];

    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fwd = fftw_plan_dft_1d(static_cast<int>(n),
                               reinterpret_cast<fftw_complex*>(buf.data()),
                               reinterpret_cast<fftw_complex*>(spec.data()),
                               FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(n),
                               reinterpret_cast<fftw_complex*>(spec.data()),
                               reinterpret_cast<fftw_complex*>(buf.data()),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    // analytic-signal multiplier: keep DC and Nyquist, double positive
    // frequencies, zero negative ones
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    if (n % 2 == 0) {
        // spec[n/2] unchanged
        for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    } else {
        for (std::size_t k = (n + 1) / 2; k < n; ++k) spec[k] = 0.0;
    }

    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i)
        amp[i] = std::abs(buf[i]) / static_cast<double>(n);
    return amp;
}

DayOfYearProfile amplitude_by_day_of_year(const Imf& imf,
                                          const CivilDate& start_label) {
    auto amp = instantaneous_amplitude(imf);
    DayOfYearProfile prof;
    std::array<double, 366> sums{};
    for (std::size_t t = 0; t < amp.size(); ++t) {
        const CivilDate d = start_label.plus_days(static_cast<long>(t));
        const int doy = d.day_of_year();
        sums[doy - 1] += amp[t];
        prof.count[doy - 1] += 1;
    }
    for (int d = 0; d < 366; ++d)
        prof.mean[d] = prof.count[d] > 0
                           ? sums[d] / static_cast<double>(prof.count[d])
                           : std::numeric_limits<double>::quiet_NaN();
    return prof;
}

} // namespace emdr
