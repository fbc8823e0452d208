#pragma once

#include <array>
#include <string>
#include <vector>

#include "emdr/signal_core.hpp"
#include "emdr/types.hpp"

namespace emdr {

struct SiftParams {
    double theta1 = 0.05;       // Rilling soft threshold
    double theta2 = 0.5;        // Rilling hard threshold
    double alpha = 0.05;        // tolerated fraction above theta1
    int max_sift_iters = 200;
    int max_imfs = 0;           // 0 = until residue criterion
    BoundaryPolicy boundary = BoundaryPolicy::Mirror;
};

struct Imf {
    std::vector<double> values;
    int order = 1;
    double dt = 1.0;
};

struct Decomposition {
    std::vector<Imf> imfs;
    std::vector<double> residue;
    std::size_t source_len = 0;
    std::vector<std::string> warnings;

    // max_t |x - (sum_k C_k + r)|; telescoping construction keeps this at
    // rounding level.
    double reconstruction_error(std::span<const double> source) const;
};

// One sifting step: h_next = h - m with m the envelope midline of h.
// Throws InsufficientExtrema when h lacks 2 maxima or 2 minima.
std::pair<std::vector<double>, std::vector<double>> sift_once(
    std::span<const double> h, BoundaryPolicy boundary);

// Rilling two-threshold criterion on sigma = |m| / a, a = (u - l)/2.
// Samples with a < 1e-12 are excluded from both tests.
bool rilling_stop(std::span<const double> h, const Envelope& env,
                  const SiftParams& params);

Decomposition emd_decompose(const TimeSeries& series, const SiftParams& params);

// Mean index gap between consecutive maxima, times dt.
double mean_period(const Imf& imf);

// Mean |max - min| over adjacent extrema in index order.
double peak_to_peak_amplitude(const Imf& imf);

// Modulus of the analytic signal; the Hilbert transform is computed in the
// frequency domain (FFT, negative frequencies zeroed).
std::vector<double> instantaneous_amplitude(const Imf& imf);

struct DayOfYearProfile {
    std::array<double, 366> mean{};  // NaN where no samples fall on that day
    std::array<long, 366> count{};
};

DayOfYearProfile amplitude_by_day_of_year(const Imf& imf,
                                          const CivilDate& start_label);

namespace detail {

// Envelope through the current extrema of h; false when either side has
// fewer than min_each knots. sift_once uses 2; the decomposition loop uses 1
// so single-hump residuals can still be driven below 2 interior extrema.
struct SiftState {
    ExtremaSet extrema;
    Envelope env;
    std::vector<double> mean;
};
bool analyze_for_sift(std::span<const double> h, BoundaryPolicy boundary,
                      SiftState& out, std::size_t min_each);

std::size_t count_interior_extrema(std::span<const double> values);

} // namespace detail

} // namespace emdr
