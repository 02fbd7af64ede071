#include "support.hpp"

#include <mpfr.h>

#include <cfenv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace flotest {

std::string source_dir() { return FLOBOUND_SOURCE_DIR; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string& name) { return read_file(source_dir() + "/corpus/" + name); }

std::string Property::summary() const {
  std::string s = name + ": " + std::to_string(samples) + " samples, " + std::to_string(violations) +
                  " violations";
  if (skipped) s += ", " + std::to_string(skipped) + " not applicable";
  if (!first_failure.empty()) s += "; first: " + first_failure;
  return s;
}

namespace {

mpfr_rnd_t mpfr_mode(RoundingMode m) {
  switch (m) {
    case RoundingMode::ne: return MPFR_RNDN;
    case RoundingMode::zr: return MPFR_RNDZ;
    case RoundingMode::up: return MPFR_RNDU;
    case RoundingMode::dn: return MPFR_RNDD;
  }
  return MPFR_RNDN;
}

struct ExponentRange {
  mpfr_exp_t emin = mpfr_get_emin(), emax = mpfr_get_emax();
  ~ExponentRange() {
    mpfr_set_emin(emin);
    mpfr_set_emax(emax);
  }
};

}  // namespace

std::optional<Dyadic> oracle_round(const FpFormat& f, const Rational& x) {
  if (sgn(x) == 0) return Dyadic();
  ExponentRange saved;
  // MPFR writes x = m * 2^E with 1/2 <= |m| < 1, so the least subnormal
  // 2^min_exponent has E = min_exponent + 1.
  mpfr_set_emin(static_cast<mpfr_exp_t>(f.min_exponent + 1));
  mpfr_set_emax(mpfr_get_emax_max());
  mpfr_t y;
  mpfr_init2(y, f.precision);
  mpfr_rnd_t rnd = mpfr_mode(f.mode);
  int t = mpfr_set_q(y, x.get_mpq_t(), rnd);
  t = mpfr_subnormalize(y, t, rnd);
  (void)t;
  std::optional<Dyadic> out;
  if (!mpfr_zero_p(y)) {
    mpz_t m;
    mpz_init(m);
    mpfr_exp_t e = mpfr_get_z_2exp(m, y);
    out = Dyadic(BigInt(m), static_cast<std::int64_t>(e));
    mpz_clear(m);
    if (out->msb_exponent() > f.max_exponent) out.reset();
  } else {
    out = Dyadic();
  }
  mpfr_clear(y);
  return out;
}

std::optional<Rational> oracle_eval(const ExprPool& pool, ExprId e,
                                    const std::map<std::string, Rational>& vars) {
  const ExprNode& n = pool.node(e);
  auto sub = [&](ExprId x) { return oracle_eval(pool, x, vars); };
  switch (n.kind) {
    case ExprKind::variable: return vars.at(pool.variable_name(e));
    case ExprKind::constant: return pool.constant_value(e);
    case ExprKind::neg: {
      auto a = sub(n.lhs);
      if (!a) return a;
      return Rational(-*a);
    }
    case ExprKind::abs: {
      auto a = sub(n.lhs);
      if (!a) return a;
      return Rational(abs(*a));
    }
    case ExprKind::round: {
      auto a = sub(n.lhs);
      if (!a) return a;
      auto r = oracle_round(pool.round_format(e), *a);
      if (!r) return std::nullopt;
      return r->to_rational();
    }
    default: break;
  }
  auto a = sub(n.lhs), b = sub(n.rhs);
  if (!a || !b) return std::nullopt;
  switch (n.kind) {
    case ExprKind::add: return Rational(*a + *b);
    case ExprKind::sub: return Rational(*a - *b);
    case ExprKind::mul: return Rational(*a * *b);
    case ExprKind::div:
      if (sgn(*b) == 0) return Rational(0);
      return Rational(*a / *b);
    default: return std::nullopt;
  }
}

Dyadic to_dyadic(double x) {
  if (x == 0) return Dyadic();
  int e = 0;
  double m = std::frexp(x, &e);
  auto mant = static_cast<long>(std::ldexp(m, 60));
  return Dyadic(BigInt(mant), e - 60);
}

namespace {

Dyadic random_dyadic(std::mt19937_64& rng, int max_bits, int emin, int emax) {
  std::uniform_int_distribution<int> bits(1, max_bits), ex(emin, emax);
  int b = bits(rng);
  BigInt m = 0;
  for (int i = 0; i < b; i += 32) {
    m <<= 32;
    m += static_cast<unsigned long>(rng() & 0xffffffffu);
  }
  m >>= static_cast<mp_bitcnt_t>((b + 31) / 32 * 32 - b);
  if (rng() & 1) m = -m;
  return Dyadic(m, ex(rng));
}

// A point of [lo, hi] that is usually not dyadic.
Rational point_in(const Interval& i, std::mt19937_64& rng) {
  const unsigned long N = (1ul << 20) + 7;
  std::uniform_int_distribution<unsigned long> k(0, N);
  unsigned long t = rng() % 8 == 0 ? (rng() & 1 ? 0 : N) : k(rng);
  Rational lo = i.lo().to_rational(), hi = i.hi().to_rational();
  Rational r = lo + (hi - lo) * Rational(t, N);
  r.canonicalize();
  return r;
}

Interval random_interval(std::mt19937_64& rng) {
  Dyadic lo = random_dyadic(rng, 90, -90, 60);
  if (rng() % 6 == 0) return Interval(lo, lo);
  Dyadic w = abs(random_dyadic(rng, 90, -90, 60));
  if (rng() % 5 == 0) w = abs(lo) + abs(lo);  // straddles zero
  return Interval(lo, lo + w);
}

std::string fail_text(const std::string& what, const Interval& r, const Rational& exact) {
  return what + " gave " + r.to_string() + " missing " + exact.get_str();
}

}  // namespace

Property interval_inclusion(std::uint64_t samples, std::uint64_t seed) {
  Property p;
  p.name = "interval inclusion";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> prec(24, 200), op(0, 9);
  while (p.samples < samples) {
    Interval a = random_interval(rng), b = random_interval(rng);
    int precision = prec(rng);
    Rational x = point_in(a, rng), y = point_in(b, rng);
    Interval r;
    Rational exact;
    std::string what;
    switch (op(rng)) {
      case 0: r = add(a, b, precision); exact = x + y; what = "add"; break;
      case 1: r = sub(a, b, precision); exact = x - y; what = "sub"; break;
      case 2: r = mul(a, b, precision); exact = x * y; what = "mul"; break;
      case 3:
        if (b.contains_zero()) {
          ++p.skipped;
          continue;
        }
        r = div(a, b, precision);
        exact = x / y;
        what = "div";
        break;
      case 4: r = neg(a); exact = -x; what = "neg"; break;
      case 5: r = abs(a); exact = abs(x); what = "abs"; break;
      case 6: r = square(a, precision); exact = x * x; what = "square"; break;
      case 7: r = round_outward(a, precision); exact = x; what = "round_outward"; break;
      case 8: r = hull(a, b); exact = rng() & 1 ? x : y; what = "hull"; break;
      default: {
        Rational lo = x < y ? x : y, hi = x < y ? y : x;
        r = interval_from_rationals(lo, hi, precision);
        exact = lo + (hi - lo) * Rational(static_cast<long>(rng() % 1000), 999);
        what = "interval_from_rationals";
      }
    }
    exact.canonicalize();
    ++p.samples;
    if (!r.contains(exact)) {
      if (p.violations++ == 0) p.first_failure = fail_text(what, r, exact);
    }
  }
  return p;
}

namespace {

template <class T>
T random_float(std::mt19937_64& rng, int exponent) {
  constexpr int digits = std::numeric_limits<T>::digits;
  std::uniform_int_distribution<std::uint64_t> frac(0, (std::uint64_t{1} << (digits - 1)) - 1);
  T m = static_cast<T>(frac(rng) + (std::uint64_t{1} << (digits - 1)));
  T x = std::ldexp(m, exponent - digits + 1);
  return rng() & 1 ? -x : x;
}

int fe_mode(RoundingMode m) {
  switch (m) {
    case RoundingMode::ne: return FE_TONEAREST;
    case RoundingMode::zr: return FE_TOWARDZERO;
    case RoundingMode::up: return FE_UPWARD;
    case RoundingMode::dn: return FE_DOWNWARD;
  }
  return FE_TONEAREST;
}

// A 200-bit truncation of |q| with a sticky bit below it: rounds like q
// to any precision under 198 bits.
Dyadic sticky_quotient(const Rational& q) {
  Dyadic z = dyadic_from_rational(abs(q), 200, Direction::down);
  if (compare(z, abs(q)) != 0) z = z + Dyadic::pow2(z.msb_exponent() - 202);
  return q < 0 ? -z : z;
}

template <class T>
void hardware_case(Property& p, const FpFormat& f, RoundingMode mode, std::mt19937_64& rng) {
  constexpr bool single = std::is_same_v<T, float>;
  const int emin_normal = std::numeric_limits<T>::min_exponent - 1;  // msb of the least normal
  const int emax = std::numeric_limits<T>::max_exponent - 1;
  const int sub_lo = emin_normal - std::numeric_limits<T>::digits;
  std::uniform_int_distribution<int> ex(sub_lo + 1, emax), near(-70, 70), op(0, single ? 4 : 3);
  int o = op(rng);
  int ea = ex(rng);
  int eb = ea;
  switch (o) {
    case 0:
    case 1: eb = rng() & 1 ? std::clamp(ea + near(rng), sub_lo + 1, emax) : ex(rng); break;
    case 2: eb = std::clamp(ex(rng) - ea + (emin_normal / 2), sub_lo + 1, emax); break;
    case 3: eb = std::clamp(ea - ex(rng) + (emin_normal / 2), sub_lo + 1, emax); break;
    default: break;
  }
  T a = random_float<T>(rng, ea), b = random_float<T>(rng, eb);
  // Subnormal inputs are produced by rounding the scaled significand.
  volatile T va = a, vb = b;
  volatile T vr;
  volatile double vd = 0;
  Rational exact;
  std::string what;
  if (o == 4) {
    vd = random_float<double>(rng, ex(rng));
  }
  std::fesetround(fe_mode(mode));
  switch (o) {
    case 0: vr = va + vb; break;
    case 1: vr = va - vb; break;
    case 2: vr = va * vb; break;
    case 3: vr = va / vb; break;
    default: vr = static_cast<T>(vd); break;
  }
  std::fesetround(FE_TONEAREST);
  T r = vr;
  Rational qa = to_dyadic(static_cast<double>(va)).to_rational();
  Rational qb = to_dyadic(static_cast<double>(vb)).to_rational();
  Dyadic input;
  switch (o) {
    case 0: exact = qa + qb; what = "add"; break;
    case 1: exact = qa - qb; what = "sub"; break;
    case 2: exact = qa * qb; what = "mul"; break;
    case 3: exact = qa / qb; what = "div"; break;
    default: exact = to_dyadic(vd).to_rational(); what = "narrow"; break;
  }
  exact.canonicalize();
  input = o == 3 ? sticky_quotient(exact) : dyadic_from_rational(exact, 4000, Direction::down);
  std::optional<Dyadic> ours;
  try {
    ours = round_value(f, input);
  } catch (const OverflowError&) {
  }
  // The model has no infinities: results of 2^(emax+1) or more overflow,
  // while the FPU saturates or returns an infinity.
  Rational limit = Dyadic::pow2(emax + 1).to_rational();
  if (abs(exact) >= limit || std::isinf(r)) {
    ++p.samples;
    if (ours && p.violations++ == 0) p.first_failure = what + " overflowed in hardware only";
    return;
  }
  ++p.samples;
  if (!ours || !(*ours == to_dyadic(static_cast<double>(r)))) {
    if (p.violations++ == 0) {
      std::ostringstream os;
      os.precision(17);
      os << what << " " << static_cast<double>(va) << " " << static_cast<double>(vb) << " -> hardware "
         << static_cast<double>(r) << ", ours " << (ours ? ours->to_string() : "overflow");
      p.first_failure = os.str();
    }
  }
}

}  // namespace

Property hardware_rounding(bool binary64, RoundingMode mode, std::uint64_t samples, std::uint64_t seed) {
  Property p;
  p.name = std::string(binary64 ? "binary64" : "binary32") + " rounding, mode " + std::string(mode_name(mode));
  FpFormat f = binary64 ? FpFormat::ieee64(mode) : FpFormat::ieee32(mode);
  std::mt19937_64 rng(seed);
  while (p.samples < samples) {
    if (binary64)
      hardware_case<double>(p, f, mode, rng);
    else
      hardware_case<float>(p, f, mode, rng);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Rule truth.

namespace {

struct Sampler {
  std::mt19937_64 rng;
  const FpFormat* f = nullptr;
  int lo_exp = -60, hi_exp = 60;

  int pick(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

  Rational value() {
    int r = pick(0, 19);
    if (r == 0) return 0;
    if (r <= 9) {
      int bits = pick(1, f->precision);
      int msb = r == 9 ? static_cast<int>(f->min_exponent) + pick(0, f->precision + 4) : pick(lo_exp, hi_exp);
      Dyadic d = random_dyadic(rng, bits, 0, 0);
      BigInt m = d.mantissa();
      if (m == 0) m = 1;
      Dyadic x(m, 0);
      x = x.scaled(msb - x.msb_exponent());
      auto rounded = oracle_round(*f, x.to_rational());
      if (rounded && !rounded->is_zero()) return rounded->to_rational();
      return x.to_rational();
    }
    if (r <= 17) {
      Dyadic d = random_dyadic(rng, 80, 0, 0);
      if (d.is_zero()) return 1;
      return d.scaled(pick(lo_exp, hi_exp) - d.msb_exponent()).to_rational();
    }
    Rational q(pick(-2000, 2000), 2 * pick(1, 49) + 1);
    q.canonicalize();
    return q;
  }

  // Sound enclosure of t with dyadic endpoints.
  Interval enclose(const Rational& t) {
    Dyadic lo = dyadic_from_rational(t, 200, Direction::down);
    Dyadic hi = dyadic_from_rational(t, 200, Direction::up);
    switch (pick(0, 2)) {
      case 0: break;
      case 1: {
        Dyadic w = max(abs(lo), abs(hi)).scaled(-pick(1, 40));
        lo = round_to_precision(lo - w, 100, Direction::down);
        hi = round_to_precision(hi + w, 100, Direction::up);
        break;
      }
      default:
        lo = lo - Dyadic::pow2(pick(-70, 4));
        hi = hi + Dyadic::pow2(pick(-70, 4));
    }
    return Interval(lo, hi);
  }
};

bool is_dyadic(const Rational& q) {
  const BigInt& d = q.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

struct DyadicShape {
  std::int64_t exponent;  // of the odd mantissa
  std::int64_t bits;
};

DyadicShape shape(const Rational& q) {
  Dyadic d = dyadic_from_rational(q, static_cast<int>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) + 2, Direction::down);
  return {d.exponent(), static_cast<std::int64_t>(d.bit_length())};
}

std::vector<ExprId> division_denominators(const ExprPool& pool, ExprId e) {
  std::vector<ExprId> out;
  std::function<void(ExprId)> walk = [&](ExprId x) {
    const ExprNode& n = pool.node(x);
    if (n.lhs.valid()) walk(n.lhs);
    if (n.rhs.valid()) walk(n.rhs);
    if (n.kind == ExprKind::div) out.push_back(n.rhs);
  };
  walk(e);
  return out;
}

std::vector<FpFormat> rule_formats() {
  std::vector<FpFormat> fs;
  for (RoundingMode m : {RoundingMode::ne, RoundingMode::zr, RoundingMode::up, RoundingMode::dn}) {
    fs.push_back(FpFormat::ieee64(m));
    fs.push_back(FpFormat::ieee32(m));
    fs.push_back(FpFormat{5, -12, 12, m});
  }
  return fs;
}

}  // namespace

std::vector<Property> rule_truth(std::uint64_t per_rule, std::uint64_t seed, const RuleTable& table) {
  std::vector<Property> out;
  const std::vector<FpFormat> formats = rule_formats();
  std::vector<ExprPool> pools(formats.size());
  for (std::size_t i = 0; i < formats.size(); ++i) pools[i].add_format({"rnd", formats[i]});

  for (const Rule& rule : table.rules()) {
    Property p;
    p.name = "rule " + rule.id;
    Sampler s{std::mt19937_64(seed ^ std::hash<std::string>{}(rule.id)), nullptr};
    std::uint64_t attempts = 0;
    while (p.samples < per_rule && attempts++ < per_rule * 200) {
      std::size_t fi = static_cast<std::size_t>(s.pick(0, static_cast<int>(formats.size()) - 1));
      ExprPool& pool = pools[fi];
      s.f = &formats[fi];
      if (formats[fi].precision < 24) {
        s.lo_exp = -16;
        s.hi_exp = 14;
      } else {
        s.lo_exp = -60;
        s.hi_exp = 60;
      }
      std::map<std::string, Rational> point;
      RuleMatch m;
      m.format = 0;
      const char* names[] = {"a", "b", "c", "d"};
      for (int v = 0; v < 4; ++v) {
        Rational x = s.value();
        if (v > 0 && s.pick(0, 7) == 0) x = point[names[s.pick(0, v - 1)]];
        point[names[v]] = x;
        m.vars[static_cast<std::size_t>(v)] = pool.variable(names[v]);
      }
      Rational k = s.value();
      m.vars['k' - 'a'] = pool.constant(k);

      AtomKey concl = instantiate(rule.conclusion, pool, m);
      if (rule.kind == Rule::Kind::rewrite) {
        ExprId rhs = instantiate(rule.rhs, pool, m);
        bool defined = true;
        for (ExprId side : {concl.expr, rhs})
          for (ExprId d : division_denominators(pool, side)) {
            auto v = oracle_eval(pool, d, point);
            if (!v || sgn(*v) == 0) defined = false;
          }
        auto l = oracle_eval(pool, concl.expr, point), r = oracle_eval(pool, rhs, point);
        if (!defined || !l || !r) {
          ++p.skipped;
          continue;
        }
        ++p.samples;
        if (*l != *r && p.violations++ == 0)
          p.first_failure = "sides differ: " + l->get_str() + " vs " + r->get_str();
        continue;
      }

      std::vector<FactValue> values;
      bool ok = true;
      for (const PatternAtom& pa : rule.premises) {
        AtomKey a = instantiate(pa, pool, m);
        auto t = oracle_eval(pool, a.expr, point);
        if (!t) {
          ok = false;
          break;
        }
        switch (a.pred) {
          case Predicate::bnd: values.emplace_back(s.enclose(*t)); break;
          case Predicate::fix:
            if (!is_dyadic(*t)) ok = false;
            else if (sgn(*t) == 0) values.emplace_back(std::int64_t{s.pick(0, 3) == 0 ? 1 << 24 : s.pick(-100, 100)});
            else values.emplace_back(shape(*t).exponent - s.pick(0, 3));
            break;
          case Predicate::flt:
            if (!is_dyadic(*t)) ok = false;
            else if (sgn(*t) == 0) values.emplace_back(std::int64_t{s.pick(1, 4)});
            else values.emplace_back(shape(*t).bits + s.pick(0, 3));
            break;
          case Predicate::nzr:
            if (sgn(*t) == 0) ok = false;
            else values.emplace_back(std::monostate{});
            break;
          case Predicate::rel: {
            auto v = oracle_eval(pool, a.other, point);
            if (!v) {
              ok = false;
            } else if (sgn(*v) == 0) {
              if (sgn(*t) != 0) ok = false;
              else values.emplace_back(Interval(Dyadic(), Dyadic()));
            } else {
              Rational eps = (*t - *v) / *v;
              Interval e = s.enclose(eps);
              if (e.lo() <= Dyadic(-1)) e = Interval(dyadic_from_rational(eps, 200, Direction::down), e.hi());
              if (e.lo() <= Dyadic(-1)) ok = false;
              else values.emplace_back(e);
            }
            break;
          }
          case Predicate::absurd: ok = false; break;
        }
        if (!ok) break;
      }
      if (!ok) {
        ++p.skipped;
        continue;
      }
      std::vector<const FactValue*> ptrs;
      for (const FactValue& v : values) ptrs.push_back(&v);
      EvalInput in{pool, concl, ptrs, s.pick(24, 120)};
      std::optional<FactValue> result;
      try {
        result = propagate(rule, in);
      } catch (const std::exception&) {
        result.reset();
      }
      auto t = oracle_eval(pool, concl.expr, point);
      if (!result || !t) {
        ++p.skipped;
        continue;
      }
      std::optional<Rational> other;
      if (concl.pred == Predicate::rel) {
        other = oracle_eval(pool, concl.other, point);
        if (!other) {
          ++p.skipped;
          continue;
        }
      }
      ++p.samples;
      bool holds = true;
      switch (concl.pred) {
        case Predicate::bnd: holds = std::get<Interval>(*result).contains(*t); break;
        case Predicate::fix:
          holds = is_dyadic(*t) && (sgn(*t) == 0 || shape(*t).exponent >= std::get<std::int64_t>(*result));
          break;
        case Predicate::flt:
          holds = is_dyadic(*t) && (sgn(*t) == 0 || shape(*t).bits <= std::get<std::int64_t>(*result));
          break;
        case Predicate::nzr: holds = sgn(*t) != 0; break;
        case Predicate::rel:
          if (sgn(*other) == 0) holds = sgn(*t) == 0;
          else holds = std::get<Interval>(*result).contains(Rational((*t - *other) / *other));
          break;
        case Predicate::absurd: holds = false; break;
      }
      if (!holds && p.violations++ == 0) {
        std::string at;
        for (const auto& [name, v] : point) at += " " + name + "=" + v.get_str();
        p.first_failure = "false conclusion at" + at + " k=" + k.get_str() + " format " + formats[fi].to_string();
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identities.

std::vector<std::pair<std::string, std::string>> near_misses() {
  return {
      {"A - C", "(A - B) + (C - B)"},
      {"A - C", "(A - B) - (B - C)"},
      {"A - C", "(A - B) + (B - C) + 1b-60"},
      {"(A - C) / C", "(A - B) / B + (B - C) / C"},
      {"(A - C) / C", "(A - B) / B + (B - C) / C - ((A - B) / B) * ((B - C) / C)"},
      {"(A - C) / C", "(A - B) / C + (B - C) / C + ((A - B) / B) * ((B - C) / C)"},
      {"x", "B * (1 + (x - B) / x)"},
      {"x", "B * (1 - (x - B) / B)"},
      {"x", "B + (x - B) / B"},
      {"(A * x) / (A * y)", "x / (A * y)"},
      {"(A * x) / (A * y)", "y / x"},
      {"(A * x) / (A + y)", "x / y"},
      {"A * (B + C)", "A * B + C"},
      {"(A + B) * (A + B)", "A * A + B * B"},
      {"(A + B) * (A - B)", "A * A - B * B + A * B"},
      {"A / B + C / B", "(A + C) / (B + B)"},
      {"1 / (1 + x)", "1 - x"},
      {"A * B - C * x", "A * (B - x) + (A - C) * B"},
      {"(A - B) / B", "A / B - B"},
      {"(A - B) / B", "A / B + 1"},
      {"A / (B * C)", "(A / B) * C"},
      {"-(A - B)", "A - B"},
      {"|A|", "A"},
      {"A", "(A + B) - C"},
      {"A * A * A", "A * A + A"},
      {"(x - y) / y", "(x - y) / x"},
      {"x / y - 1", "(x - y) / x"},
      {"(1 + x) / (1 + y) - 1", "(x - y) / (1 + x)"},
      {"x * (1 + y)", "x + y"},
      {"A - C", "(A - B) * (B - C)"},
      {"A / B / C", "A / (B / C)"},
      {"A - (B - C)", "A - B - C"},
      {"2 * A", "A + A + 1b-80"},
      {"A * B / B", "B"},
      {"(A + B) / C", "A / C + B"},
      {"A / (1 + B)", "A * (1 - B)"},
      {"x * x - y * y", "(x - y) * (x - y)"},
      {"rnd(A)", "A"},
      {"rnd(A + B)", "rnd(A) + rnd(B)"},
      {"rnd(A) * B", "rnd(A * B)"},
      {"(rnd(A) - A) / A", "(rnd(A) - A) / rnd(A)"},
      {"(B + C) * (1 + x) / (A * (1 + y)) - 1", "((B + C) / A - 1) * (1 + x) / (1 + y) + (x - y) / (1 + x)"},
      {"A * (x - y) / y", "A * x / y - 1"},
      {"(A + B) - (A + C)", "B + C"},
      {"(A * B - A * C) / (A * C)", "(B - C) / B"},
      {"(A * C - B * C) / (B * C)", "(A - B) / A"},
      {"B / (A + B)", "(B / A) / (1 - B / A)"},
      {"A - B", "(A - B) / B * A"},
      {"x", "y * (1 + (x - y) / x)"},
      {"1 / x + 1 / y", "2 / (x + y)"},
  };
}

namespace {

const char* kGenericHeader =
    "@rnd = float<ieee_64,ne>;\n"
    "{ A in [1,2] /\\ B in [1,2] /\\ C in [1,2] /\\ x in [1,2] /\\ y in [1,2] /\\ MX in [1,2]"
    " /\\ E3 in [1,2] /\\ E4 in [1,2] -> A + B + C + x + y + MX + E3 + E4 in ? }\n";

std::vector<HintCheck> check_hints(const std::string& text) {
  Script s = load_script(text);
  std::vector<HintCheck> out;
  for (const Hint& h : s.hints)
    if (const auto* r = std::get_if<RewriteHint>(&h.body)) out.push_back(check_hint_wellformed(s, *r));
  return out;
}

}  // namespace

Property identity_rejects_near_misses() {
  Property p;
  p.name = "near-miss non-identities rejected";
  std::string text = kGenericHeader;
  auto pairs = near_misses();
  for (const auto& [l, r] : pairs) text += l + " -> " + r + ";\n";
  std::vector<HintCheck> checks = check_hints(text);
  for (std::size_t i = 0; i < checks.size(); ++i) {
    ++p.samples;
    if (checks[i].status != IdentityStatus::not_identity && p.violations++ == 0)
      p.first_failure = "accepted " + pairs[i].first + " -> " + pairs[i].second;
  }
  if (checks.size() != pairs.size()) {
    ++p.violations;
    p.first_failure = "not every pair parsed as a hint";
  }
  return p;
}

Property identity_accepts_hints() {
  Property p;
  p.name = "hint identities accepted";
  auto tally = [&](const std::vector<HintCheck>& checks, const std::string& where) {
    for (std::size_t i = 0; i < checks.size(); ++i) {
      ++p.samples;
      if (checks[i].status != IdentityStatus::identity && p.violations++ == 0)
        p.first_failure = where + " hint " + std::to_string(i) + ": " + checks[i].message;
    }
  };
  tally(check_hints(std::string(kGenericHeader) +
                    "A - C -> (A - B) + (B - C);\n"
                    "(A - C) / C -> (A - B) / B + (B - C) / C + ((A - B) / B) * ((B - C) / C);\n"
                    "x -> MX * (1 + (x - MX) / MX);\n"
                    "(A * E3) / (A * E4) -> E3 / E4 { A <> 0 };\n"),
        "generic");

  const std::string full = corpus("sine_full.g");
  std::size_t before = p.samples;
  tally(check_hints(full), "sine_full");
  if (p.samples - before < 8) {
    ++p.violations;
    p.first_failure = "too few rewrite hints found in sine_full.g";
  }
  const char* steps[] = {
      "(S3-PolySinY)/PolySinY",
      "S3/PolySinY - 1",
      "((yh+yl) + (yh+yl)*ts) / (My + My*Mts)  - 1",
      "((yh+yl)/My) * (1+ts)/(1+Mts)  - 1",
      "(Epsargred+1) * (1+ts)/(1+Mts)  - 1",
      "Epsargred * (1+ts)/(1+Mts)   +  1 * (1+ts)/(1+Mts)  - 1",
      "Epsargred * (1+ts)/(1+Mts)   +  (ts-Mts)/(1+Mts)",
      "Epsargred * (1+ts)/(1+Mts)   +  Mts*((ts-Mts)/Mts) / (1+Mts)",
  };
  std::string chain = full;
  for (const char* st : steps) chain += "\nEps4 -> " + std::string(st) + ";";
  chain += "\n";
  std::vector<HintCheck> all = check_hints(chain);
  std::size_t n = std::size(steps);
  tally(std::vector<HintCheck>(all.end() - static_cast<std::ptrdiff_t>(n), all.end()), "Eps4 step");
  return p;
}

Proved run_script(const std::string& source, const EngineOptions& options) {
  Proved r;
  auto t0 = std::chrono::steady_clock::now();
  r.script = load_script(source);
  r.report = prove(r.script, options);
  r.text = render_report(r.script, r.report);
  r.certificate = emit_certificate(r.script, r.report, options);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

const char* kWords[] = {"bnd_add", "bnd_sub", "bnd_mul", "bnd_div", "bnd_neg", "bnd_abs", "round_bnd",
                        "round_abs_error", "rewrite", "intersect", "axiom", "assume", "case_split",
                        "hypothesis", "nzr_of_bnd", "fix_round", "flt_round", "BND", "FIX", "FLT",
                        "NZR", "REL", "ABSURD", "var", "const", "add", "sub", "mul", "div", "neg",
                        "abs", "round", "->", "x2", "1/3"};

bool is_ref(const std::string& t) {
  return t.size() > 1 && (t[0] == 'e' || t[0] == 'n' || t[0] == 'f') &&
         t.find_first_not_of("0123456789", 1) == std::string::npos;
}

bool is_integer(const std::string& t) {
  std::size_t i = t[0] == '-' ? 1 : 0;
  return t.size() > i && t.find_first_not_of("0123456789", i) == std::string::npos;
}

std::string mutate(const std::string& t, std::mt19937_64& rng) {
  auto pick = [&](long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); };
  if (is_ref(t)) {
    long v = std::stol(t.substr(1));
    long w = pick(0, v + 3);
    if (w == v) w = v + 1;
    return t.substr(0, 1) + std::to_string(w);
  }
  if (is_integer(t)) return std::to_string(std::stol(t) + (pick(0, 1) ? 1 : -1) * pick(1, 3));
  if (auto d = Dyadic::parse(t)) {
    Dyadic x = *d;
    switch (pick(0, 2)) {
      case 0: return Dyadic(x.mantissa() + 1, x.exponent()).to_string();
      case 1: return Dyadic(x.mantissa() - 1, x.exponent()).to_string();
      default: return x.scaled(pick(0, 1) ? 1 : -1).is_zero() ? "1b0" : x.scaled(pick(0, 1) ? 1 : -1).to_string();
    }
  }
  if (t.find('/') != std::string::npos && t.find_first_not_of("-0123456789/") == std::string::npos) {
    Rational q(t);
    q.canonicalize();
    q += Rational(1, 7);
    q.canonicalize();
    return q.get_str();
  }
  if (pick(0, 3) == 0) return t + "x";
  return kWords[pick(0, static_cast<long>(std::size(kWords)) - 1)];
}

}  // namespace

std::string tamper(const std::string& cert, std::mt19937_64& rng) {
  std::vector<std::string> lines;
  std::istringstream in(cert);
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  std::vector<std::size_t> body;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].rfind("expr ", 0) == 0 || lines[i].rfind("node ", 0) == 0 || lines[i].rfind("goal ", 0) == 0)
      body.push_back(i);
  if (body.empty()) return cert;
  for (;;) {
    std::size_t li = body[std::uniform_int_distribution<std::size_t>(0, body.size() - 1)(rng)];
    std::vector<std::string> t;
    std::istringstream ls(lines[li]);
    std::string w;
    while (ls >> w) t.push_back(w);
    std::size_t ti = std::uniform_int_distribution<std::size_t>(1, t.size() - 1)(rng);
    std::string m = mutate(t[ti], rng);
    if (m == t[ti]) continue;
    t[ti] = m;
    std::string joined;
    for (std::size_t i = 0; i < t.size(); ++i) joined += (i ? " " : "") + t[i];
    std::vector<std::string> copy = lines;
    copy[li] = joined;
    std::string out;
    for (const std::string& x : copy) out += x + "\n";
    return out;
  }
}

std::string changed_line(const std::string& a, const std::string& b) {
  std::istringstream x(a), y(b);
  std::string la, lb;
  while (std::getline(x, la) && std::getline(y, lb))
    if (la != lb) return la + " -> " + lb;
  return "?";
}

}  // namespace flotest
