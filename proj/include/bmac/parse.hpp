#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "bmac/types.hpp"

// Text format shared by the CLI and test fixtures: comma-separated fields,
// each a decimal literal or a rational "n/m" (e.g. "2/3").

namespace bmac {

namespace detail {

inline double parse_decimal(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw parse_error("invalid numeric literal: '" + std::string(s) + "'");
  return v;
}

} // namespace detail

// A single field: decimal literal, or rational n/m evaluated in double
// (numerator and denominator parsed exactly, one correctly rounded division).
inline double parse_number(std::string_view s) {
  if (s.empty()) throw parse_error("empty numeric field");
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return detail::parse_decimal(s);
  if (slash == 0 || slash + 1 == s.size())
    throw parse_error("invalid rational: '" + std::string(s) + "'");
  const double num = detail::parse_decimal(s.substr(0, slash));
  const double den = detail::parse_decimal(s.substr(slash + 1));
  if (den == 0.0) throw parse_error("rational with zero denominator: '" + std::string(s) + "'");
  return num / den;
}

inline std::vector<std::string_view> split_fields(std::string_view s, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline Channel parse_channel(std::string_view s) {
  const auto f = split_fields(s);
  if (f.size() != 4) throw parse_error("channel requires four fields a,b,c,d");
  const double a = parse_number(f[0]), b = parse_number(f[1]);
  const double c = parse_number(f[2]), d = parse_number(f[3]);
  if (!is_probability(a) || !is_probability(b) || !is_probability(c) || !is_probability(d))
    throw parse_error("channel probabilities must lie in [0,1]");
  return Channel(a, b, c, d);
}

inline Weights parse_weights(std::string_view s) {
  const auto f = split_fields(s);
  if (f.size() != 2) throw parse_error("weights require two fields w1,w2");
  const double w1 = parse_number(f[0]), w2 = parse_number(f[1]);
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw parse_error("weights must be strictly positive");
  return Weights(w1, w2);
}

} // namespace bmac
