#include "flobound/numeric.hpp"

#include <charconv>
#include <cmath>

namespace flobound {

namespace {

void check_exponent(std::int64_t e) {
  if (e > Dyadic::max_exponent || e < -Dyadic::max_exponent)
    throw ExponentRangeError("dyadic exponent out of range: " +
                             std::to_string(e));
}

std::size_t bits_of(const BigInt& m) {
  if (sgn(m) == 0) return 0;
  return mpz_sizeinbase(m.get_mpz_t(), 2);
}

BigInt shifted_left(const BigInt& m, std::int64_t k) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return r;
}

// Rounds n / d (d > 0) times 2^shift to `precision` bits.
Dyadic round_ratio(const BigInt& n, const BigInt& d, std::int64_t shift,
                   int precision, Direction dir) {
  if (sgn(n) == 0) return {};
  auto nb = static_cast<std::int64_t>(bits_of(n));
  auto db = static_cast<std::int64_t>(bits_of(d));
  // n / d * 2^s lies in [2^(p-1), 2^(p+1)).
  std::int64_t s = precision - (nb - db);
  BigInt num = n, den = d;
  if (s >= 0)
    num = shifted_left(n, s);
  else
    den = shifted_left(d, -s);
  BigInt q;
  if (dir == Direction::down)
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  else
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  auto qb = static_cast<std::int64_t>(bits_of(q));
  if (qb > precision) {
    auto excess = static_cast<mp_bitcnt_t>(qb - precision);
    if (dir == Direction::down)
      mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), excess);
    else
      mpz_cdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), excess);
    s -= static_cast<std::int64_t>(excess);
  }
  return Dyadic(std::move(q), shift - s);
}

}  // namespace

Dyadic::Dyadic(BigInt mantissa, std::int64_t exponent)
    : m_(std::move(mantissa)), e_(exponent) {
  if (sgn(m_) == 0) {
    e_ = 0;
    return;
  }
  mp_bitcnt_t tz = mpz_scan1(m_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_tdiv_q_2exp(m_.get_mpz_t(), m_.get_mpz_t(), tz);
    e_ += static_cast<std::int64_t>(tz);
  }
  check_exponent(e_);
}

std::size_t Dyadic::bit_length() const { return bits_of(m_); }

std::int64_t Dyadic::msb_exponent() const {
  return e_ + static_cast<std::int64_t>(bit_length()) - 1;
}

Rational Dyadic::to_rational() const {
  Rational q(m_);
  if (e_ >= 0)
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e_));
  else
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e_));
  return q;
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, m_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(exp + e_));
}

std::string Dyadic::to_string() const {
  return m_.get_str() + "b" + std::to_string(e_);
}

std::optional<Dyadic> Dyadic::parse(std::string_view text) {
  auto b = text.find('b');
  if (b == std::string_view::npos || b == 0 || b + 1 == text.size())
    return std::nullopt;
  std::string_view ms = text.substr(0, b), es = text.substr(b + 1);
  std::size_t digits_at = ms[0] == '-' ? 1 : 0;
  if (digits_at == ms.size()) return std::nullopt;
  for (std::size_t i = digits_at; i < ms.size(); ++i)
    if (ms[i] < '0' || ms[i] > '9') return std::nullopt;
  if (ms.size() - digits_at > 1 && ms[digits_at] == '0') return std::nullopt;
  if (ms == "-0") return std::nullopt;
  std::int64_t e = 0;
  auto [ptr, ec] = std::from_chars(es.data(), es.data() + es.size(), e);
  if (ec != std::errc() || ptr != es.data() + es.size()) return std::nullopt;
  if (std::to_string(e) != es) return std::nullopt;
  BigInt m{std::string(ms), 10};
  if (sgn(m) == 0 && e != 0) return std::nullopt;
  if (sgn(m) != 0 && mpz_even_p(m.get_mpz_t())) return std::nullopt;
  if (e > max_exponent || e < -max_exponent) return std::nullopt;
  return Dyadic(std::move(m), e);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.e_ <= b.e_) return Dyadic(a.m_ + shifted_left(b.m_, b.e_ - a.e_), a.e_);
  return Dyadic(shifted_left(a.m_, a.e_ - b.e_) + b.m_, b.e_);
}

Dyadic operator-(const Dyadic& a) { return Dyadic(-a.m_, a.e_); }

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return Dyadic(a.m_ * b.m_, a.e_ + b.e_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  std::int64_t ma = a.msb_exponent(), mb = b.msb_exponent();
  if (ma != mb) return sa > 0 ? ma <=> mb : mb <=> ma;
  int c;
  if (a.e_ <= b.e_)
    c = cmp(a.m_, shifted_left(b.m_, b.e_ - a.e_));
  else
    c = cmp(shifted_left(a.m_, a.e_ - b.e_), b.m_);
  return c <=> 0;
}

Dyadic Dyadic::scaled(std::int64_t k) const {
  if (is_zero()) return {};
  return Dyadic(m_, e_ + k);
}

Dyadic abs(const Dyadic& x) { return x.sign() < 0 ? -x : x; }
const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

int compare(const Dyadic& a, const Rational& q) {
  return cmp(a.to_rational(), q);
}

Dyadic round_to_precision(const Dyadic& x, int precision, Direction dir) {
  auto bits = static_cast<std::int64_t>(x.bit_length());
  if (bits <= precision) return x;
  auto shift = static_cast<mp_bitcnt_t>(bits - precision);
  BigInt q;
  if (dir == Direction::down)
    mpz_fdiv_q_2exp(q.get_mpz_t(), x.mantissa().get_mpz_t(), shift);
  else
    mpz_cdiv_q_2exp(q.get_mpz_t(), x.mantissa().get_mpz_t(), shift);
  return Dyadic(std::move(q), x.exponent() + static_cast<std::int64_t>(shift));
}

Dyadic dyadic_from_rational(const Rational& q, int precision, Direction dir) {
  return round_ratio(q.get_num(), q.get_den(), 0, precision, dir);
}

Dyadic divide(const Dyadic& a, const Dyadic& b, int precision, Direction dir) {
  if (b.is_zero()) throw DivisionByZeroRange("division by zero");
  BigInt n = a.mantissa(), d = b.mantissa();
  if (sgn(d) < 0) {
    n = -n;
    d = -d;
  }
  return round_ratio(n, d, a.exponent() - b.exponent(), precision, dir);
}

Interval::Interval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw std::invalid_argument("interval with lo > hi");
}

bool Interval::contains(const Rational& q) const {
  return compare(lo_, q) <= 0 && compare(hi_, q) >= 0;
}

Dyadic Interval::magnitude() const { return max(abs(lo_), abs(hi_)); }

Dyadic Interval::mignitude() const {
  if (contains_zero()) return {};
  return min(abs(lo_), abs(hi_));
}

std::string Interval::to_string() const {
  return "[" + lo_.to_string() + ", " + hi_.to_string() + "]";
}

Interval round_outward(const Interval& a, int precision) {
  return Interval(round_to_precision(a.lo(), precision, Direction::down),
                  round_to_precision(a.hi(), precision, Direction::up));
}

Interval add(const Interval& a, const Interval& b, int precision) {
  return round_outward(Interval(a.lo() + b.lo(), a.hi() + b.hi()), precision);
}

Interval sub(const Interval& a, const Interval& b, int precision) {
  return round_outward(Interval(a.lo() - b.hi(), a.hi() - b.lo()), precision);
}

Interval mul(const Interval& a, const Interval& b, int precision) {
  Dyadic p1 = a.lo() * b.lo(), p2 = a.lo() * b.hi(), p3 = a.hi() * b.lo(),
         p4 = a.hi() * b.hi();
  Dyadic lo = min(min(p1, p2), min(p3, p4));
  Dyadic hi = max(max(p1, p2), max(p3, p4));
  return round_outward(Interval(lo, hi), precision);
}

Interval div(const Interval& a, const Interval& b, int precision) {
  if (b.contains_zero())
    throw DivisionByZeroRange("divisor interval " + b.to_string() +
                              " contains zero");
  const Dyadic* num[2] = {&a.lo(), &a.hi()};
  const Dyadic* den[2] = {&b.lo(), &b.hi()};
  std::optional<Dyadic> lo, hi;
  for (auto* n : num)
    for (auto* d : den) {
      Dyadic l = divide(*n, *d, precision, Direction::down);
      Dyadic h = divide(*n, *d, precision, Direction::up);
      if (!lo || l < *lo) lo = l;
      if (!hi || *hi < h) hi = h;
    }
  return Interval(*lo, *hi);
}

Interval interval_arith(ArithOp op, const Interval& a, const Interval& b,
                        int precision) {
  switch (op) {
    case ArithOp::add: return add(a, b, precision);
    case ArithOp::sub: return sub(a, b, precision);
    case ArithOp::mul: return mul(a, b, precision);
    case ArithOp::div: return div(a, b, precision);
  }
  throw std::logic_error("bad arith op");
}

Interval neg(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval abs(const Interval& a) {
  if (a.lo().sign() >= 0) return a;
  if (a.hi().sign() <= 0) return neg(a);
  return Interval(Dyadic(), max(-a.lo(), a.hi()));
}

Interval square(const Interval& a, int precision) {
  Interval m = abs(a);
  return round_outward(Interval(m.lo() * m.lo(), m.hi() * m.hi()), precision);
}

Interval interval_from_rationals(const Rational& lo, const Rational& hi,
                                 int precision) {
  return Interval(dyadic_from_rational(lo, precision, Direction::down),
                  dyadic_from_rational(hi, precision, Direction::up));
}

MaybeInterval intersect(const Interval& a, const Interval& b) {
  const Dyadic& lo = max(a.lo(), b.lo());
  const Dyadic& hi = min(a.hi(), b.hi());
  if (hi < lo) return std::nullopt;
  return Interval(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(min(a.lo(), b.lo()), max(a.hi(), b.hi()));
}

}  // namespace flobound
