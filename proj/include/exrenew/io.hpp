#ifndef EXRENEW_IO_HPP
#define EXRENEW_IO_HPP

#include <string>
#include <vector>

#include "exrenew/inference.hpp"

namespace exrenew {

// Long-format sequence CSV: header "seq_id,time", one inter-arrival per row,
// rows of a sequence in order, UTF-8, LF line endings.  Parse errors carry
// 1-based line numbers (DataError).
SequenceSet read_sequence_csv(const std::string& path);
void write_sequence_csv(const std::string& path, const SequenceSet& data);

// Locale-independent shortest-round-trip formatting; identical bytes across
// runs and platforms for identical doubles.
std::string format_double(double value);

// Generic CSV writer: header + column-major table (all columns same length).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

} // namespace exrenew

#endif
