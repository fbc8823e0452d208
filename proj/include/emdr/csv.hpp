#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emdr/types.hpp"

namespace emdr {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const; // throws ParseError
};

// Minimal RFC-4180-ish reader: comma separated, optional double quotes,
// no embedded newlines.
CsvTable read_csv_file(const std::string& path);

struct SeriesBundle {
    TimeSeries y;
    MultichannelSeries predictors;
    std::optional<CivilDate> start_date;
};

// Parses the named response/predictor columns; the optional date column must
// hold strictly consecutive daily ISO-8601 dates. Row numbers in errors are
// 1-based and count the header line.
SeriesBundle ingest_csv(const std::string& path, const std::string& response,
                        const std::vector<std::string>& predictors,
                        const std::string& date_column);

// 17 significant digits: round-trip exact for 64-bit floats.
std::string format_double(double v);

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

} // namespace emdr
