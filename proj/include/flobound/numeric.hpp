#ifndef FLOBOUND_NUMERIC_HPP
#define FLOBOUND_NUMERIC_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flobound {

using BigInt = mpz_class;
// mpq_class keeps numerator and denominator coprime with a positive denominator.
using Rational = mpq_class;

enum class Direction { down, up };

struct ExponentRangeError : std::range_error {
  using std::range_error::range_error;
};

struct DivisionByZeroRange : std::domain_error {
  using std::domain_error::domain_error;
};

// m * 2^e with m odd, or m = 0 and e = 0.
class Dyadic {
 public:
  static constexpr std::int64_t max_exponent = std::int64_t{1} << 30;

  Dyadic() = default;
  Dyadic(BigInt mantissa, std::int64_t exponent);
  explicit Dyadic(long value) : Dyadic(BigInt(value), 0) {}

  static Dyadic pow2(std::int64_t e) { return Dyadic(BigInt(1), e); }

  const BigInt& mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }
  int sign() const { return sgn(m_); }
  bool is_zero() const { return sgn(m_) == 0; }
  // Number of bits of |mantissa|, 0 for zero.
  std::size_t bit_length() const;
  // floor(log2 |x|); x must be nonzero.
  std::int64_t msb_exponent() const;
  bool is_power_of_two() const { return m_ == 1 || m_ == -1; }

  Rational to_rational() const;
  double to_double() const;

  // "5b-4" for 5 * 2^-4, "0b0" for zero.
  std::string to_string() const;
  // Accepts only the canonical spelling produced by to_string.
  static std::optional<Dyadic> parse(std::string_view text);

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.e_ == b.e_ && a.m_ == b.m_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  // x * 2^k, exact.
  Dyadic scaled(std::int64_t k) const;

 private:
  BigInt m_;
  std::int64_t e_ = 0;
};

Dyadic abs(const Dyadic& x);
const Dyadic& min(const Dyadic& a, const Dyadic& b);
const Dyadic& max(const Dyadic& a, const Dyadic& b);

int compare(const Dyadic& a, const Rational& q);

// Nearest dyadic with at most `precision` mantissa bits in the given direction.
Dyadic round_to_precision(const Dyadic& x, int precision, Direction dir);
Dyadic dyadic_from_rational(const Rational& q, int precision, Direction dir);
// a / b rounded to `precision` bits; b must be nonzero.
Dyadic divide(const Dyadic& a, const Dyadic& b, int precision, Direction dir);

// Closed interval [lo, hi] with lo <= hi. Emptiness is expressed as
// std::nullopt by the operations that can produce it.
class Interval {
 public:
  Interval() = default;
  Interval(Dyadic lo, Dyadic hi);
  static Interval point(const Dyadic& x) { return Interval(x, x); }

  const Dyadic& lo() const { return lo_; }
  const Dyadic& hi() const { return hi_; }

  bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Rational& q) const;
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool is_point() const { return lo_ == hi_; }
  bool subset_of(const Interval& o) const {
    return o.lo_ <= lo_ && hi_ <= o.hi_;
  }
  // max(|lo|, |hi|)
  Dyadic magnitude() const;
  // min |x| over the interval.
  Dyadic mignitude() const;

  friend bool operator==(const Interval&, const Interval&) = default;

  std::string to_string() const;

 private:
  Dyadic lo_;
  Dyadic hi_;
};

using MaybeInterval = std::optional<Interval>;

enum class ArithOp { add, sub, mul, div };

// Outward-rounded to `precision` bits. Division throws DivisionByZeroRange
// when b contains 0.
Interval interval_arith(ArithOp op, const Interval& a, const Interval& b,
                        int precision);
Interval add(const Interval& a, const Interval& b, int precision);
Interval sub(const Interval& a, const Interval& b, int precision);
Interval mul(const Interval& a, const Interval& b, int precision);
Interval div(const Interval& a, const Interval& b, int precision);
Interval neg(const Interval& a);
Interval abs(const Interval& a);
Interval square(const Interval& a, int precision);
Interval round_outward(const Interval& a, int precision);
// Smallest dyadic interval of `precision` bits containing [lo, hi].
Interval interval_from_rationals(const Rational& lo, const Rational& hi,
                                 int precision);

MaybeInterval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

}  // namespace flobound

#endif
