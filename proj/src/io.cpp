#include "exrenew/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "exrenew/errors.hpp"

namespace exrenew {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_time(const std::string& field, long line_no) {
    // std::from_chars<double> is the locale-independent parse; g++ 11 ships it.
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError("line " + std::to_string(line_no) + ": cannot parse time '" + field + "'");
    return value;
}

} // namespace

SequenceSet read_sequence_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    ++line_no;
    if (strip_cr(line) != "seq_id,time")
        throw DataError("line 1: expected header 'seq_id,time', got '" + strip_cr(line) + "'");

    SequenceSet data;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break; // trailing newline
            throw DataError("line " + std::to_string(line_no) + ": blank line");
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw DataError("line " + std::to_string(line_no) + ": expected exactly two fields");
        const std::string id = line.substr(0, comma);
        const std::string field = line.substr(comma + 1);
        if (id.empty()) throw DataError("line " + std::to_string(line_no) + ": empty seq_id");
        const double t = parse_time(field, line_no);
        if (!(t > 0.0))
            throw DataError("line " + std::to_string(line_no) + ": time must be positive, got '" +
                            field + "'");
        if (data.ids.empty() || data.ids.back() != id) {
            // Rows of one sequence must be contiguous, else per-sequence
            // ordering is ambiguous.
            for (const auto& seen : data.ids)
                if (seen == id)
                    throw DataError("line " + std::to_string(line_no) + ": seq_id '" + id +
                                    "' reappears after other sequences (rows must be contiguous)");
            data.ids.push_back(id);
            data.sequences.emplace_back();
        }
        data.sequences.back().push_back(t);
    }
    if (data.ids.empty()) throw DataError("'" + path + "' has a header but no data rows");
    return data;
}

void write_sequence_csv(const std::string& path, const SequenceSet& data) {
    validate(data);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << "seq_id,time\n";
    for (std::size_t i = 0; i < data.ids.size(); ++i)
        for (double t : data.sequences[i]) out << data.ids[i] << ',' << format_double(t) << '\n';
    if (!out) throw DataError("write to '" + path + "' failed");
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header and column counts differ");
    if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
    const std::size_t rows = columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? ',' : '\n');
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << format_double(columns[c][r]) << (c + 1 < columns.size() ? ',' : '\n');
    if (!out) throw DataError("write to '" + path + "' failed");
}

} // namespace exrenew
