#include "flobound/report.hpp"

#include <cmath>

namespace flobound {
namespace {

Rational pow10(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(BigInt(1), p) : Rational(p);
}

BigInt floor_of(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_of(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace

std::string decimal(const Rational& x, Direction dir) {
  if (sgn(x) == 0) return "0";
  bool negative = sgn(x) < 0;
  Rational mag = negative ? Rational(-x) : x;
  // Magnitude grows when rounding a negative number down.
  bool up = (dir == Direction::up) != negative;

  double approx = std::log10(mag.get_d());
  long e = std::isfinite(approx) ? static_cast<long>(std::floor(approx)) : 0;
  if (!std::isfinite(approx)) {
    long bits = static_cast<long>(mpz_sizeinbase(mag.get_num_mpz_t(), 2)) -
                static_cast<long>(mpz_sizeinbase(mag.get_den_mpz_t(), 2));
    e = static_cast<long>(std::floor(static_cast<double>(bits) * 0.30102999566398120));
  }
  while (mag < pow10(e)) --e;
  while (mag >= pow10(e + 1)) ++e;

  Rational scaled = mag / pow10(e - 5);
  BigInt m = up ? ceil_of(scaled) : floor_of(scaled);
  if (m == 1000000) {
    m = 100000;
    ++e;
  }
  std::string digits = m.get_str();
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  std::string out = negative ? "-" : "";
  if (e < -4 || e >= 6) {
    out += digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    std::string ex = std::to_string(e < 0 ? -e : e);
    if (ex.size() < 2) ex = "0" + ex;
    out += std::string("e") + (e < 0 ? "-" : "+") + ex;
  } else if (e < 0) {
    out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  } else {
    std::size_t whole = static_cast<std::size_t>(e) + 1;
    if (digits.size() <= whole) {
      out += digits + std::string(whole - digits.size(), '0');
    } else {
      out += digits.substr(0, whole) + "." + digits.substr(whole);
    }
  }
  return out;
}

std::string decimal(const Dyadic& x, Direction dir) { return decimal(x.to_rational(), dir); }

std::string decimal_interval(const Interval& i) {
  return "[" + decimal(i.lo(), Direction::down) + ", " + decimal(i.hi(), Direction::up) + "]";
}

std::string render_report(const Script& s, const Report& r) {
  std::string out;
  for (const std::string& w : r.warnings) out += w + "\n";
  if (r.contradiction) out += "Warning: the hypotheses are contradictory, every goal holds.\n";

  std::string late;
  for (std::size_t i = 0; i < r.goals.size(); ++i) {
    const GoalResult& g = r.goals[i];
    const Enclosure& goal = s.goals[i];
    std::string x = s.print(goal.expr);
    if (g.enclosure) {
      out += x + " in " + decimal_interval(*g.enclosure) + "  # [" + g.enclosure->lo().to_string() + ", " +
             g.enclosure->hi().to_string() + "]\n";
      if (g.status != GoalStatus::proved) late += "Warning: " + enclosure_text(s, goal) + " does not hold.\n";
    } else if (g.status == GoalStatus::proved) {
      out += enclosure_text(s, goal) + "  # by contradiction\n";
    } else if (g.status == GoalStatus::resource_limit) {
      late += "Warning: resource limit reached for " + x + ".\n";
    } else {
      late += "Warning: no path was found for " + x + ".\n";
      for (const std::string& d : g.diagnostic) late += "  " + d + "\n";
    }
  }
  out += late;

  out += "\nResults";
  for (std::size_t i = 0; i < s.hypotheses.size(); ++i) {
    const Enclosure& h = s.hypotheses[i];
    out += i == 0 ? " for " : " and ";
    out += s.print(h.expr) + " in [" + decimal(*h.lower, Direction::down) + ", " +
           decimal(*h.upper, Direction::up) + "]";
  }
  out += ":\n";
  if (!r.all_proved()) out += "Warning: some enclosures were not satisfied.\n";
  return out;
}

int exit_status(const Report& r) {
  if (r.all_proved()) return 0;
  for (const GoalResult& g : r.goals)
    if (g.status == GoalStatus::resource_limit) return 3;
  return r.budget_exhausted ? 3 : 2;
}

}  // namespace flobound
