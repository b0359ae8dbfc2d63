#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace srmc {

inline constexpr std::string_view kVersion = "srmc 0.1.0";

// FNV-1a over raw bytes; used to stamp reports with a hash of the config file
// so outputs can be traced back to their inputs.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v);

}  // namespace srmc
