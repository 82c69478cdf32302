#include "cocrash/csv.hpp"

namespace cocrash {

void for_each_csv_row(
    const std::string& path, const std::vector<std::string>& accepted_headers,
    const std::function<void(const std::vector<std::string>&, std::size_t)>& row) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    std::size_t line_number = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_number;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            bool matched = false;
            for (const auto& h : accepted_headers) matched = matched || line == h;
            if (!matched)
                throw ParseError("unexpected header '" + line + "' (want '" +
                                     accepted_headers.front() + "')",
                                 line_number);
            saw_header = true;
            continue;
        }
        row(split_csv_line(line), line_number);
    }
    if (!saw_header) throw DataError("empty input: '" + path + "' has no header row");
}

CsvWriter::CsvWriter(const std::string& path, const std::string& meta_comment,
                     const std::string& header)
    : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw DataError("cannot write '" + path + "'");
    if (!meta_comment.empty()) out_ << "# " << meta_comment << '\n';
    out_ << header << '\n';
}

CsvWriter::~CsvWriter() {
    if (out_.is_open()) out_.close();
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw DataError("failed writing '" + path_ + "'");
}

}  // namespace cocrash
