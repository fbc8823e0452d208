#pragma once

#include <span>
#include <vector>

#include "emdr/types.hpp"

namespace emdr {

struct Extremum {
    long index = 0; // may be negative after mirror extension
    double value = 0.0;
};

struct ExtremaSet {
    std::vector<Extremum> maxima;
    std::vector<Extremum> minima;

    std::size_t total() const { return maxima.size() + minima.size(); }
};

struct Envelope {
    std::vector<double> upper;
    std::vector<double> lower;
};

// Interior strict extrema. A plateau flanked by lower (resp. higher)
// neighbours yields one extremum at the plateau midpoint (floor).
// Throws SeriesTooShort if fewer than 3 samples.
ExtremaSet find_extrema(std::span<const double> values);

// Natural cubic spline through `knots` (strictly increasing indices),
// evaluated at sample positions 0..n_samples-1. The boundary policy extends
// the knot set first: Mirror reflects the outermost two knots across the
// series endpoints, ClampEndpoints pins the series endpoint values.
// Throws InsufficientExtrema if fewer than 2 knots remain after extension.
std::vector<double> spline_envelope(std::span<const double> series,
                                    const std::vector<Extremum>& knots,
                                    BoundaryPolicy boundary,
                                    std::size_t n_samples);

std::vector<double> envelope_mean(const Envelope& env);

namespace detail {

// Knot extension used by spline_envelope; exposed for the sifting loops that
// need the same treatment on projection extrema.
std::vector<Extremum> extend_knots(std::span<const double> series,
                                   const std::vector<Extremum>& knots,
                                   BoundaryPolicy boundary,
                                   std::size_t n_samples);

// Plain natural cubic spline through (x, y), evaluated at integer positions
// 0..n_samples-1; extrapolates with the boundary cubics outside [x0, xk].
std::vector<double> natural_cubic_eval(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       std::size_t n_samples);

} // namespace detail

} // namespace emdr
