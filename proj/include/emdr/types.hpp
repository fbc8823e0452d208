#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emdr/errors.hpp"

namespace emdr {

// Proleptic Gregorian calendar date. Arithmetic uses the days-from-civil
// bijection so day offsets and day-of-year are exact for any span.
struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;

    static bool is_leap(int y) {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    }

    // Days since 1970-01-01 (negative before).
    long serial() const {
        int y = year - (month <= 2);
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy =
            (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2) / 5 +
            static_cast<unsigned>(day) - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return static_cast<long>(era) * 146097 + static_cast<long>(doe) - 719468;
    }

    static CivilDate from_serial(long z) {
        z += 719468;
        const long era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const long y = static_cast<long>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp + (mp < 10 ? 3 : -9);
        return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                         static_cast<int>(d)};
    }

    CivilDate plus_days(long n) const { return from_serial(serial() + n); }

    // 1-based day of year; Dec 31 is 366 in leap years.
    int day_of_year() const {
        static const int cum[12] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
        int d = cum[month - 1] + day;
        if (month > 2 && is_leap(year)) ++d;
        return d;
    }

    bool operator==(const CivilDate&) const = default;

    std::string to_string() const;
    // Strict ISO-8601 YYYY-MM-DD; nullopt on malformed or out-of-range input.
    static std::optional<CivilDate> parse(const std::string& s);
};

struct TimeSeries {
    std::vector<double> values;
    double dt = 1.0;
    std::optional<CivilDate> start_label;

    std::size_t size() const { return values.size(); }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

struct MultichannelSeries {
    std::vector<TimeSeries> channels;
    std::vector<std::string> names;

    std::size_t n_channels() const { return channels.size(); }
    std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }

    void validate() const {
        if (channels.size() < 2)
            throw BadDimension("multichannel input needs >= 2 channels");
        for (const auto& c : channels) {
            if (c.size() != length())
                throw ChannelLengthMismatch("channel lengths differ");
            if (!c.all_finite())
                throw NonFiniteInput("channel contains NaN/Inf");
        }
    }
};

enum class BoundaryPolicy { Mirror, ClampEndpoints };

} // namespace emdr
