#include "emdr/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace emdr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError("column '" + name + "' not found in header");
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() && in.eof()) break;
        auto cells = split_line(line);
        if (lineno == 1) {
            for (auto& c : cells) table.header.push_back(trim(c));
        } else {
            if (cells.size() != table.header.size())
                throw ParseError("row " + std::to_string(lineno) + ": expected " +
                                 std::to_string(table.header.size()) +
                                 " cells, got " + std::to_string(cells.size()));
            table.rows.push_back(std::move(cells));
        }
    }
    if (table.header.empty()) throw ParseError("empty file: " + path);
    return table;
}

SeriesBundle ingest_csv(const std::string& path, const std::string& response,
                        const std::vector<std::string>& predictors,
                        const std::string& date_column) {
    auto table = read_csv_file(path);

    auto numeric_column = [&](const std::string& name) {
        const std::size_t ci = table.column_index(name);
        std::vector<double> out;
        out.reserve(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const std::string cell = trim(table.rows[r][ci]);
            const std::size_t row_no = r + 2; // 1-based, header is row 1
            if (cell.empty())
                throw ParseError("row " + std::to_string(row_no) + ", column '" +
                                 name + "': empty cell");
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (errno != 0 || end == cell.c_str() || *end != '\0')
                throw ParseError("row " + std::to_string(row_no) + ", column '" +
                                 name + "': not numeric: '" + cell + "'");
            if (!std::isfinite(v))
                throw ParseError("row " + std::to_string(row_no) + ", column '" +
                                 name + "': non-finite value");
            out.push_back(v);
        }
        return out;
    };

    SeriesBundle bundle;
    if (!date_column.empty()) {
        const std::size_t ci = table.column_index(date_column);
        std::optional<CivilDate> prev;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const std::size_t row_no = r + 2;
            auto d = CivilDate::parse(trim(table.rows[r][ci]));
            if (!d)
                throw ParseError("row " + std::to_string(row_no) + ", column '" +
                                 date_column + "': bad ISO-8601 date");
            if (prev && d->serial() != prev->serial() + 1)
                throw DateGap("row " + std::to_string(row_no) +
                              ": dates are not strictly consecutive days");
            if (r == 0) bundle.start_date = d;
            prev = d;
        }
    }

    bundle.y.values = numeric_column(response);
    bundle.y.start_label = bundle.start_date;
    for (const auto& name : predictors) {
        TimeSeries ts;
        ts.values = numeric_column(name);
        ts.start_label = bundle.start_date;
        bundle.predictors.channels.push_back(std::move(ts));
        bundle.predictors.names.push_back(name);
    }
    return bundle;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

} // namespace emdr
