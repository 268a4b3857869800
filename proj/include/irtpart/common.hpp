#ifndef IRTPART_COMMON_HPP
#define IRTPART_COMMON_HPP

#include <charconv>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irtpart {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or contract-violating input data (CLI exit code 2).
struct DataError : Error {
  using Error::Error;
};

/// A pipeline stage failed for a non-data reason (CLI exit code 3).
struct StageError : Error {
  using Error::Error;
};

/// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

/// Strict full-token parse; returns false on anything trailing.
inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline bool parse_int64(std::string_view token, std::int64_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline double parse_double(std::string_view token) {
  double out = 0;
  if (!parse_double(token, out)) throw DataError("not a number: '" + std::string(token) + "'");
  return out;
}

inline std::int64_t parse_int64(std::string_view token) {
  std::int64_t out = 0;
  if (!parse_int64(token, out)) throw DataError("not an integer: '" + std::string(token) + "'");
  return out;
}

// full uint64 range; needed wherever RNG seeds round-trip through text
inline std::uint64_t parse_uint64(std::string_view token) {
  std::uint64_t out = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw DataError("not an unsigned integer: '" + std::string(token) + "'");
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Sum with a fixed pairwise reduction tree. The result depends only on the
/// order of `values`, never on how work is scheduled, so parallel and serial
/// reductions agree bitwise.
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(std::span<const double>(values));
}

}  // namespace irtpart

#endif
