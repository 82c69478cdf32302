#pragma once

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "cocrash/error.hpp"

namespace cocrash {

// %.17g round-trips every double bit-for-bit, which the panel snapshot
// format relies on.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line, char delim = ',') {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

// Reads a CSV file, skipping '#' comment lines and the header row. The
// header must match one of `accepted_headers`. Calls `row` with
// (fields, 1-based line number) for each data line.
void for_each_csv_row(const std::string& path,
                      const std::vector<std::string>& accepted_headers,
                      const std::function<void(const std::vector<std::string>&, std::size_t)>& row);

// Writer that prefixes a '# key=value ...' metadata comment before the header.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& meta_comment, const std::string& header);
    ~CsvWriter();

    void write_row(const std::string& line) { out_ << line << '\n'; }
    void close();

  private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace cocrash
