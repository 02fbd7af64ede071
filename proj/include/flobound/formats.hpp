#ifndef FLOBOUND_FORMATS_HPP
#define FLOBOUND_FORMATS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "flobound/numeric.hpp"

namespace flobound {

enum class RoundingMode { ne, zr, up, dn };

std::string_view mode_name(RoundingMode m);
std::optional<RoundingMode> parse_mode(std::string_view name);

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Binary floating-point format: values m * 2^e with |m| < 2^precision and
// e >= min_exponent. Finite values stay below 2^(max_exponent + 1).
struct FpFormat {
  int precision = 53;
  std::int64_t min_exponent = -1074;
  std::int64_t max_exponent = 1023;
  RoundingMode mode = RoundingMode::ne;

  static FpFormat ieee32(RoundingMode m) { return {24, -149, 127, m}; }
  static FpFormat ieee64(RoundingMode m) { return {53, -1074, 1023, m}; }
  // "ieee_32" or "ieee_64".
  static std::optional<FpFormat> named(std::string_view name, RoundingMode m);

  bool directed() const { return mode != RoundingMode::ne; }
  // 2^(min_exponent + precision - 1)
  Dyadic smallest_normal() const;
  std::string to_string() const;

  friend bool operator==(const FpFormat&, const FpFormat&) = default;
};

// Throws OverflowError when |x| or its rounding reaches 2^(max_exponent + 1).
Dyadic round_value(const FpFormat& f, const Dyadic& x);
bool is_representable(const FpFormat& f, const Dyadic& x);
Interval round_enclosure(const FpFormat& f, const Interval& i);

// Enclosure of (round(x) - x) / x for x of magnitude at least
// smallest_normal(), or for exact sums of representable values.
Interval rel_error_bound(const FpFormat& f);
// Enclosure of round(x) - x for every x in i.
Interval abs_error_bound(const FpFormat& f, const Interval& i);

}  // namespace flobound

#endif
