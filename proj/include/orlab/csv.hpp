#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace orlab {

/// Formats a double with 12 significant digits, locale independent.
inline std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Minimal CSV emitter: header row, comma separation, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) {
        write_strings(header);
    }

    void row(const std::vector<double>& values) {
        std::string line;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) line += ',';
            line += csv_number(values[i]);
        }
        os_ << line << '\n';
    }

    void row_mixed(const std::vector<std::string>& cells) { write_strings(cells); }

private:
    void write_strings(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        os_ << line << '\n';
    }

    std::ostream& os_;
};

} // namespace orlab
