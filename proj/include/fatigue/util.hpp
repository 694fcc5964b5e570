#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fatigue {

/// Library-wide error type; messages carry enough context (file, row,
/// column, layer) to act on without a debugger.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit over raw bytes. Used for schema and artifact fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t n,
                      std::uint64_t state = 14695981039346656037ULL);
std::uint64_t fnv1a64(const std::string& s,
                      std::uint64_t state = 14695981039346656037ULL);

/// SplitMix64 mixing step; derives stream seeds from (seed, index) pairs.
std::uint64_t splitmix64(std::uint64_t x);

/// Shortest round-trip decimal representation of a double ("1000", "0.14",
/// "inf"). Locale-independent; identical input gives identical text, which
/// keeps emitted CSV/JSON byte-stable across runs.
std::string format_double(double v);

std::string to_hex(std::uint64_t v);
std::uint64_t parse_hex(const std::string& s);

}  // namespace fatigue
