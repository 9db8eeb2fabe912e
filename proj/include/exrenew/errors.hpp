#ifndef EXRENEW_ERRORS_HPP
#define EXRENEW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace exrenew {

// Numerical failure: non-convergent series, ill-conditioned expansion,
// simulation horizon not reachable, etc.  Distinct from precondition
// violations (std::invalid_argument / std::domain_error) so the CLI can map
// them to different exit codes.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (CSV parse errors carry 1-based line numbers).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace exrenew

#endif
