#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace bdpe {

/// Shortest decimal that round-trips to the same binary64 value.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(std::int64_t v) { return std::to_string(v); }

class CsvWriter {
public:
    CsvWriter(std::ostream& os, char sep) : os_(os), sep_(sep) {}

    void header(const std::vector<std::string>& names) { line(names); }

    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << sep_;
            os_ << cells[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
    char sep_;
};

}  // namespace bdpe
