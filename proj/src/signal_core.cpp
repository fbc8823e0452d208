#include "emdr/signal_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace emdr {

std::string CivilDate::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<CivilDate> CivilDate::parse(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
    CivilDate d;
    d.year = std::stoi(s.substr(0, 4));
    d.month = std::stoi(s.substr(5, 2));
    d.day = std::stoi(s.substr(8, 2));
    static const int mdays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (d.month < 1 || d.month > 12) return std::nullopt;
    int dim = mdays[d.month - 1] + (d.month == 2 && is_leap(d.year) ? 1 : 0);
    if (d.day < 1 || d.day > dim) return std::nullopt;
    return d;
}

ExtremaSet find_extrema(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3) throw SeriesTooShort("find_extrema needs length >= 3");

    ExtremaSet out;
    std::size_t i = 1;
    while (i + 1 <= n - 1) {
        if (values[i] == values[i - 1]) {
            ++i;
            continue;
        }
        // run of equal values [i, j]
        std::size_t j = i;
        while (j + 1 <= n - 1 && values[j + 1] == values[i]) ++j;
        if (j == n - 1) break; // plateau touches the right boundary
        const double left = values[i - 1];
        const double right = values[j + 1];
        const long mid = static_cast<long>((i + j) / 2);
        if (left < values[i] && right < values[i])
            out.maxima.push_back({mid, values[i]});
        else if (left > values[i] && right > values[i])
            out.minima.push_back({mid, values[i]});
        i = j + 1;
    }
    return out;
}

namespace detail {

std::vector<Extremum> extend_knots(std::span<const double> series,
                                   const std::vector<Extremum>& knots,
                                   BoundaryPolicy boundary,
                                   std::size_t n_samples) {
    std::vector<Extremum> ext = knots;
    if (ext.empty()) return ext;
    const long last = static_cast<long>(n_samples) - 1;

    if (boundary == BoundaryPolicy::ClampEndpoints) {
        if (ext.front().index > 0)
            ext.insert(ext.begin(), {0, series[0]});
        if (ext.back().index < last)
            ext.push_back({last, series[n_samples - 1]});
        return ext;
    }

    // Mirror: reflect the outermost two knots across each endpoint.
    const std::size_t m = knots.size();
    std::vector<Extremum> left, right;
    for (std::size_t c = 0; c < std::min<std::size_t>(2, m); ++c) {
        const Extremum& k = knots[c];
        long r = -k.index;
        if (r < ext.front().index && (left.empty() || r < left.back().index))
            left.push_back({r, k.value});
    }
    for (std::size_t c = 0; c < std::min<std::size_t>(2, m); ++c) {
        const Extremum& k = knots[m - 1 - c];
        long r = 2 * last - k.index;
        if (r > ext.back().index && (right.empty() || r > right.back().index))
            right.push_back({r, k.value});
    }
    std::reverse(left.begin(), left.end());
    ext.insert(ext.begin(), left.begin(), left.end());
    ext.insert(ext.end(), right.begin(), right.end());
    return ext;
}

std::vector<double> natural_cubic_eval(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       std::size_t n_samples) {
    const std::size_t k = x.size();
    std::vector<double> out(n_samples);

    if (k == 2) {
        const double slope = (y[1] - y[0]) / (x[1] - x[0]);
        for (std::size_t s = 0; s < n_samples; ++s)
            out[s] = y[0] + slope * (static_cast<double>(s) - x[0]);
        return out;
    }

    // Second derivatives M with natural boundary (M0 = Mk-1 = 0), solved by
    // the Thomas algorithm on the interior tridiagonal system.
    std::vector<double> h(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) h[i] = x[i + 1] - x[i];

    std::vector<double> diag(k, 2.0), rhs(k, 0.0), m(k, 0.0);
    std::vector<double> sub(k, 0.0), sup(k, 0.0);
    for (std::size_t i = 1; i + 1 < k; ++i) {
        sub[i] = h[i - 1] / (h[i - 1] + h[i]);
        sup[i] = h[i] / (h[i - 1] + h[i]);
        rhs[i] = 6.0 *
                 ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]) /
                 (h[i - 1] + h[i]);
    }
    for (std::size_t i = 2; i + 1 < k; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = k - 2; i >= 1; --i) {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        if (i == 1) break;
    }

    std::size_t seg = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double xv = static_cast<double>(s);
        while (seg + 2 < k && xv > x[seg + 1]) ++seg;
        const double hi = h[seg];
        const double a = (x[seg + 1] - xv) / hi;
        const double b = (xv - x[seg]) / hi;
        out[s] = a * y[seg] + b * y[seg + 1] +
                 ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) *
                     (hi * hi) / 6.0;
    }
    return out;
}

} // namespace detail

std::vector<double> spline_envelope(std::span<const double> series,
                                    const std::vector<Extremum>& knots,
                                    BoundaryPolicy boundary,
                                    std::size_t n_samples) {
    auto ext = detail::extend_knots(series, knots, boundary, n_samples);
    if (ext.size() < 2)
        throw InsufficientExtrema("fewer than 2 knots after boundary extension");
    std::vector<double> x(ext.size()), y(ext.size());
    for (std::size_t i = 0; i < ext.size(); ++i) {
        x[i] = static_cast<double>(ext[i].index);
        y[i] = ext[i].value;
    }
    return detail::natural_cubic_eval(x, y, n_samples);
}

std::vector<double> envelope_mean(const Envelope& env) {
    if (env.upper.size() != env.lower.size())
        throw ChannelLengthMismatch("envelope arrays differ in length");
    std::vector<double> m(env.upper.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = 0.5 * (env.upper[i] + env.lower[i]);
    return m;
}

} // namespace emdr
