#include "flobound/formats.hpp"

namespace flobound {

std::string_view mode_name(RoundingMode m) {
  switch (m) {
    case RoundingMode::ne: return "ne";
    case RoundingMode::zr: return "zr";
    case RoundingMode::up: return "up";
    case RoundingMode::dn: return "dn";
  }
  return "?";
}

std::optional<RoundingMode> parse_mode(std::string_view name) {
  if (name == "ne") return RoundingMode::ne;
  if (name == "zr") return RoundingMode::zr;
  if (name == "up") return RoundingMode::up;
  if (name == "dn") return RoundingMode::dn;
  return std::nullopt;
}

std::optional<FpFormat> FpFormat::named(std::string_view name, RoundingMode m) {
  if (name == "ieee_32") return ieee32(m);
  if (name == "ieee_64") return ieee64(m);
  return std::nullopt;
}

Dyadic FpFormat::smallest_normal() const {
  return Dyadic::pow2(min_exponent + precision - 1);
}

std::string FpFormat::to_string() const {
  std::string base;
  if (*this == ieee32(mode))
    base = "ieee_32";
  else if (*this == ieee64(mode))
    base = "ieee_64";
  else
    base = "p" + std::to_string(precision) + "e" + std::to_string(min_exponent);
  return "float<" + base + "," + std::string(mode_name(mode)) + ">";
}

namespace {

void check_overflow(const FpFormat& f, const Dyadic& x) {
  if (!x.is_zero() && x.msb_exponent() > f.max_exponent)
    throw OverflowError("value " + x.to_string() + " overflows " + f.to_string());
}

}  // namespace

Dyadic round_value(const FpFormat& f, const Dyadic& x) {
  if (x.is_zero()) return x;
  check_overflow(f, x);
  std::int64_t ulp = std::max(x.msb_exponent() - f.precision + 1, f.min_exponent);
  if (x.exponent() >= ulp) return x;
  auto shift = static_cast<mp_bitcnt_t>(ulp - x.exponent());
  BigInt q, r;
  mpz_fdiv_q_2exp(q.get_mpz_t(), x.mantissa().get_mpz_t(), shift);
  mpz_fdiv_r_2exp(r.get_mpz_t(), x.mantissa().get_mpz_t(), shift);
  // Here q * 2^ulp < x < (q + 1) * 2^ulp.
  bool up = false;
  switch (f.mode) {
    case RoundingMode::dn: up = false; break;
    case RoundingMode::up: up = true; break;
    case RoundingMode::zr: up = x.sign() < 0; break;
    case RoundingMode::ne: {
      BigInt half;
      mpz_setbit(half.get_mpz_t(), shift - 1);
      int c = cmp(r, half);
      up = c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()));
      break;
    }
  }
  if (up) q += 1;
  Dyadic result(std::move(q), ulp);
  check_overflow(f, result);
  return result;
}

bool is_representable(const FpFormat& f, const Dyadic& x) {
  if (x.is_zero()) return true;
  if (x.msb_exponent() > f.max_exponent) return false;
  return x.exponent() >= f.min_exponent &&
         static_cast<std::int64_t>(x.bit_length()) <= f.precision;
}

Interval round_enclosure(const FpFormat& f, const Interval& i) {
  return Interval(round_value(f, i.lo()), round_value(f, i.hi()));
}

Interval rel_error_bound(const FpFormat& f) {
  Dyadic e = Dyadic::pow2(f.directed() ? 1 - f.precision : -f.precision);
  return Interval(-e, e);
}

Interval abs_error_bound(const FpFormat& f, const Interval& i) {
  if (i.is_point() && is_representable(f, i.lo())) return Interval::point(Dyadic());
  Dyadic m = i.magnitude();
  std::int64_t top;
  if (m.is_zero()) {
    top = f.min_exponent;
  } else {
    // Values strictly below a power of two have the smaller ulp and the
    // power of two itself is exact.
    top = m.msb_exponent() - (m.is_power_of_two() ? 1 : 0);
  }
  std::int64_t ulp = std::max(top - f.precision + 1, f.min_exponent);
  Dyadic e = Dyadic::pow2(f.directed() ? ulp : ulp - 1);
  return Interval(-e, e);
}

}  // namespace flobound
