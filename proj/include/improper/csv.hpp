#pragma once

// Minimal CSV writing: shortest round-trip number formatting via
// std::to_chars, so identical data always serializes to identical bytes.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <system_error>

namespace improper::csv {

inline std::string format(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format(std::int64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Write one row: fields joined by commas, terminated by '\n'.
template <class... Fields>
void write_row(std::ostream& os, const Fields&... fields) {
  bool first = true;
  auto emit = [&](const auto& f) {
    if (!first) os << ',';
    first = false;
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, double>)
      os << format(f);
    else if constexpr (std::is_integral_v<T>)
      os << format(static_cast<std::int64_t>(f));
    else
      os << f;
  };
  (emit(fields), ...);
  os << '\n';
}

}  // namespace improper::csv
