#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace ftqre {

// Error categories map onto CLI exit codes.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.3.0";

inline constexpr double kPi = 3.14159265358979323846;

template <typename Int>
constexpr Int ceil_div(Int a, Int b) {
  static_assert(std::is_integral_v<Int>);
  if (b <= 0) throw std::invalid_argument("ceil_div: non-positive divisor");
  if (a <= 0) return -((-a) / b);
  return (a + b - 1) / b;
}

template <typename Int>
constexpr Int floor_div(Int a, Int b) {
  static_assert(std::is_integral_v<Int>);
  if (b <= 0) throw std::invalid_argument("floor_div: non-positive divisor");
  if (a >= 0) return a / b;
  return -((-a + b - 1) / b);
}

// Ceiling of a ratio of reals. Values within a few ulps of an integer are
// taken as that integer, so 1e-6 / 200e-9 gives 5 rather than 6.
inline double ceil_ratio(double a, double b) {
  double x = a / b;
  double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return r;
  return std::ceil(x);
}

inline std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// Overflow-checked arithmetic for symbolic repeat counts.
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw validation_error("count overflow (more than 2^64 widgets)");
  return a * b;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    throw validation_error("count overflow (more than 2^64 widgets)");
  return a + b;
}

// FNV-1a, used for cache keys and provenance hashes.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace ftqre
