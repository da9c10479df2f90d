#ifndef PAV_ERRORS_HPP
#define PAV_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pav {

// Error categories. The CLI maps these onto process exit codes:
//   verification -> 1, capacity/resource -> 2, contract/input -> 3, io -> 4.
enum class errc {
    contract,      // precondition or invariant violated by the caller
    resource,      // sieve/enumeration budget exceeded
    capacity,      // leftover count exceeds the prime band (carries counts)
    input,         // bad user input (below construction floor, malformed value)
    io,            // file system failure
    undefined_distribution, // zero row sum: sampling distribution does not exist
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

// Raised by match_leftovers when a prime band is too small; assemble catches
// this to drive the adaptive-y retry loop.
class capacity_error : public error {
  public:
    capacity_error(uint64_t needed, uint64_t available, const std::string& msg)
        : error(errc::capacity, msg), needed(needed), available(available) {}
    uint64_t needed;
    uint64_t available;
};

} // namespace pav

#endif
