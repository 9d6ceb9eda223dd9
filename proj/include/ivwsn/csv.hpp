#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ivwsn/errors.hpp"

namespace ivwsn {

/// Shortest decimal string that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// Parse a full field as a double; row is for error reporting.
inline double parse_double_field(std::string_view field, std::size_t row) {
    double out = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r'))
        --last;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ParseFail("not a number: '" + std::string(field) + "'", row);
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

/// Line-oriented CSV reader. Rows are numbered from 1; the header is row 1.
class CsvReader {
  public:
    explicit CsvReader(const std::string& path) : in_(path), path_(path) {
        if (!in_) throw ParseFail("cannot open file: " + path);
    }

    /// Reads the header line and checks it against `expected` exactly.
    void expect_header(const std::vector<std::string>& expected) {
        std::string line;
        if (!std::getline(in_, line)) throw ParseFail("empty file: " + path_, 1);
        ++row_;
        auto fields = split_csv_line(line);
        if (fields != expected) {
            std::ostringstream want;
            for (std::size_t i = 0; i < expected.size(); ++i)
                want << (i ? "," : "") << expected[i];
            throw ParseFail("bad header in " + path_ + ": expected '" + want.str() +
                                "', got '" + line + "'",
                            1);
        }
    }

    /// Next data row split into fields; false at EOF. Blank lines are skipped.
    bool next_row(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++row_;
            if (line.empty() || line == "\r") continue;
            fields = split_csv_line(line);
            return true;
        }
        return false;
    }

    std::size_t row() const { return row_; }

  private:
    std::ifstream in_;
    std::string path_;
    std::size_t row_ = 0;
};

}  // namespace ivwsn
