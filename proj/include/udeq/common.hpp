#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace udeq {

// Sentinel used wherever a simulation failure or out-of-support parameter
// must keep an optimizer or sampler alive instead of aborting the run.
inline constexpr double kLogPostSentinel = -1e10;
inline constexpr double kNegllSentinel = 1e10;

inline bool is_sentinel_negll(double v) { return v >= 0.5 * kNegllSentinel; }
inline bool is_sentinel_logpost(double v) { return v <= 0.5 * kLogPostSentinel; }

// Caller broke an API precondition (dimension mismatch, unsorted times, ...).
struct ContractViolation : std::invalid_argument {
  explicit ContractViolation(const std::string& msg) : std::invalid_argument(msg) {}
};

// Bad run configuration (unknown scenario, invalid fraction, ...). CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing or unreadable data artifacts. CLI exit code 3.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Every member/chain failed; nothing to report. CLI exit code 4.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mixes a base seed with a stream index so that per-member / per-replicate
// randomness is independent while staying reproducible.
inline std::uint64_t seed_for_member(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed + index;
}

}  // namespace udeq
