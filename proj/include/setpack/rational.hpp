#pragma once

// Exact weights. Every comparison the solver makes goes through this type.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace setpack {

using Weight = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Weight square(const Weight& w) { return w * w; }

inline Weight make_weight(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Weight(BigInt(num), BigInt(den));
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Decimal digits only; cpp_int would read a leading zero as an octal prefix.
inline BigInt parse_digits(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return BigInt{std::string(s)};
}

inline BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  BigInt value = parse_digits(s);
  return negative ? BigInt(-value) : value;
}

}  // namespace detail

/// Parses "p/q", "p" or a plain decimal such as "0.01422" into an exact
/// rational. Throws std::invalid_argument on anything else.
inline Weight parse_weight(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty weight");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!detail::all_digits(den_text)) {
      throw std::invalid_argument("bad denominator in '" + std::string(text) + "'");
    }
    BigInt den = detail::parse_digits(den_text);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Weight(num, den);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      int_part.remove_prefix(1);
    }
    if (int_part.empty()) int_part = "0";
    if (!detail::all_digits(int_part) || (!frac_part.empty() && !detail::all_digits(frac_part))) {
      throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
    }
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
    BigInt num = detail::parse_digits(int_part) * scale;
    if (!frac_part.empty()) num += detail::parse_digits(frac_part);
    Weight value(num, scale);
    return negative ? Weight(-value) : value;
  }

  return Weight(detail::parse_integer(text));
}

/// Canonical "p/q" form, always with an explicit denominator.
inline std::string format_weight(const Weight& w) {
  return boost::multiprecision::numerator(w).str() + "/" +
         boost::multiprecision::denominator(w).str();
}

/// Decimal rendering for human-facing reports.
inline std::string to_decimal(const Weight& w, int significant_digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Dec value = Dec(boost::multiprecision::numerator(w)) / Dec(boost::multiprecision::denominator(w));
  return value.str(significant_digits, std::ios_base::fmtflags(0));
}

inline double to_double(const Weight& w) { return w.convert_to<double>(); }

inline BigInt floor_of(const Weight& w) {
  BigInt num = boost::multiprecision::numerator(w);
  BigInt den = boost::multiprecision::denominator(w);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

inline BigInt ceil_of(const Weight& w) { return -floor_of(Weight(-w)); }

}  // namespace setpack
