#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace ct::detail {

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h) { return fnv1a(&v, sizeof v, h); }

inline std::uint64_t fnv1a_double(double v, std::uint64_t h) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return fnv1a(&bits, sizeof bits, h);
}

inline std::uint64_t fnv1a_str(std::string_view s, std::uint64_t h) { return fnv1a(s.data(), s.size(), h); }

}  // namespace ct::detail
