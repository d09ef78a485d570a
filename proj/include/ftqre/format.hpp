#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace ftqre {

namespace detail {

inline std::string strip_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

// Mantissa rounded to 3 significant figures, without trailing zeros.
inline std::string sig3(double m) {
  if (m == 0) return "0";
  int mag = static_cast<int>(std::floor(std::log10(std::fabs(m))));
  int decimals = std::max(0, 2 - mag);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, m);
  return strip_zeros(buf);
}

inline double round_sig3(double v) {
  if (v == 0 || !std::isfinite(v)) return v;
  int mag = static_cast<int>(std::floor(std::log10(std::fabs(v))));
  double scale = std::pow(10.0, 2 - mag);
  return std::round(v * scale) / scale;
}

}  // namespace detail

// Three significant figures with an SI prefix, e.g. 1320000 -> "1.32M", 8400 W -> "8.4kW".
inline std::string format_si(double v, const std::string& unit = "") {
  if (std::isnan(v)) return "n/a";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0" + unit;
  static const char* prefixes[] = {"p", "n", "\xC2\xB5", "m", "", "k", "M", "G", "T", "P", "E"};
  double r = detail::round_sig3(v);
  int e3 = static_cast<int>(std::floor(std::log10(std::fabs(r)) / 3.0));
  e3 = std::clamp(e3, -4, 6);
  double m = r / std::pow(10.0, 3 * e3);
  return detail::sig3(m) + prefixes[e3 + 4] + unit;
}

// Durations with s/m/h/d/y units, e.g. 4.09 -> "4.09s", 136080 -> "37.8h".
// Hours are kept below 100 h.
inline std::string format_time(double s) {
  if (std::isnan(s)) return "n/a";
  if (s < 0) return "-" + format_time(-s);
  double r = detail::round_sig3(s);
  if (r < 1.0) return format_si(s, "s");
  if (r < 60.0) return detail::sig3(r) + "s";
  double m = detail::round_sig3(s / 60.0);
  if (m < 60.0) return detail::sig3(m) + "m";
  double h = detail::round_sig3(s / 3600.0);
  if (h < 100.0) return detail::sig3(h) + "h";
  double d = detail::round_sig3(s / 86400.0);
  if (d < 365.0) return detail::sig3(d) + "d";
  return format_si(s / (365.0 * 86400.0), "y");
}

}  // namespace ftqre
