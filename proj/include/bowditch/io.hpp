#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

#include "bowditch/core.hpp"
#include "bowditch/farey.hpp"

namespace bowditch {

/// Shortest decimal representation that round-trips.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Complex numbers render as "RE,IM" in every text interface.
inline std::string format_complex(Complex c) {
  return format_double(c.real()) + "," + format_double(c.imag());
}

inline std::string format_slope(const Slope& s) {
  return std::to_string(s.p) + "/" + std::to_string(s.q);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

/// Accepts "RE,IM" or a bare real "RE".
inline std::optional<Complex> parse_complex(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) {
    const auto re = parse_double(s);
    if (!re) return std::nullopt;
    return Complex(*re, 0.0);
  }
  const auto re = parse_double(s.substr(0, comma));
  const auto im = parse_double(s.substr(comma + 1));
  if (!re || !im) return std::nullopt;
  return Complex(*re, *im);
}

inline std::optional<Slope> parse_slope(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  long long p{}, q{};
  auto r1 = std::from_chars(s.data(), s.data() + slash, p);
  auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), q);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} ||
      r1.ptr != s.data() + slash || r2.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  try {
    return make_slope(p, q);
  } catch (const InvalidSlope&) {
    return std::nullopt;
  }
}

}  // namespace bowditch
