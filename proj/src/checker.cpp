// Certificate checker. Deliberately independent of the prover: it has its
// own expression table, rounding function, error bounds, rule shapes and
// rational-function normalizer. Only the exact numeric core and the script
// parser are shared.

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "flobound/certificate.hpp"

namespace flobound {
namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& msg) { throw Failure(msg); }

void need(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

constexpr std::uint32_t none = UINT32_MAX;

enum class K { var, cst, neg, abs, add, sub, mul, div, rnd };

struct CExpr {
  K kind = K::var;
  std::uint32_t a = none, b = none;
  std::uint32_t fmt = 0;
  Rational value;
  std::string name;
};

struct CFormat {
  int p = 0;
  std::int64_t emin = 0, emax = 0;
  RoundingMode mode = RoundingMode::ne;
};

struct CNode {
  std::size_t line = 0;
  std::string rule;
  std::size_t hyp = 0;
  Predicate pred = Predicate::bnd;
  std::uint32_t x = none, y = none;
  std::optional<Interval> iv;
  std::optional<std::int64_t> k;
  std::vector<std::size_t> prem;
};

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> t;
  std::size_t i = 0;
  while (i <= line.size()) {
    std::size_t j = line.find(' ', i);
    if (j == std::string::npos) j = line.size();
    t.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return t;
}

std::int64_t integer(const std::string& s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  need(ec == std::errc() && p == s.data() + s.size() && std::to_string(v) == s, "bad integer '" + s + "'");
  return v;
}

std::uint32_t ref(const std::string& s, char prefix, std::size_t limit) {
  need(s.size() > 1 && s[0] == prefix, "expected " + std::string(1, prefix) + "<index>, got '" + s + "'");
  std::int64_t v = integer(s.substr(1));
  need(v >= 0 && static_cast<std::size_t>(v) < limit, "reference '" + s + "' out of range");
  return static_cast<std::uint32_t>(v);
}

Dyadic dyadic(const std::string& s) {
  auto d = Dyadic::parse(s);
  need(d.has_value(), "bad dyadic '" + s + "'");
  need(d->to_string() == s, "dyadic '" + s + "' is not in canonical form");
  return *d;
}

Rational rational(const std::string& s) {
  Rational q;
  need(q.set_str(s, 10) == 0, "bad rational '" + s + "'");
  Rational c = q;
  c.canonicalize();
  need(c.get_str() == s, "rational '" + s + "' is not in lowest terms");
  return c;
}

// Rounding of a dyadic in sign-magnitude form with unbounded exponent range.
Dyadic round_to(const CFormat& f, const Dyadic& x) {
  if (x.is_zero()) return x;
  int sign = x.sign();
  BigInt mag = abs(x.mantissa());
  std::int64_t e = x.exponent();
  std::int64_t top = e + static_cast<std::int64_t>(mpz_sizeinbase(mag.get_mpz_t(), 2)) - 1;
  std::int64_t u = std::max(top - f.p + 1, f.emin);
  Dyadic r = x;
  if (e < u) {
    BigInt q = mag >> static_cast<mp_bitcnt_t>(u - e);
    BigInt rest = mag - (q << static_cast<mp_bitcnt_t>(u - e));
    BigInt half = BigInt(1) << static_cast<mp_bitcnt_t>(u - e - 1);
    bool bump = false;
    switch (f.mode) {
      case RoundingMode::ne: bump = rest > half || (rest == half && mpz_odd_p(q.get_mpz_t())); break;
      case RoundingMode::zr: bump = false; break;
      case RoundingMode::up: bump = sign > 0 && rest != 0; break;
      case RoundingMode::dn: bump = sign < 0 && rest != 0; break;
    }
    if (bump) q += 1;
    r = Dyadic(sign < 0 ? BigInt(-q) : q, u);
  }
  need(r.is_zero() || r.msb_exponent() <= f.emax, "rounding overflows the format");
  return r;
}

Interval symmetric(std::int64_t exponent) {
  Dyadic e = Dyadic::pow2(exponent);
  return Interval(-e, e);
}

Interval rounding_rel_error(const CFormat& f) {
  return symmetric(f.mode == RoundingMode::ne ? -f.p : 1 - f.p);
}

Interval rounding_abs_error(const CFormat& f, const Interval& i) {
  if (i.lo() == i.hi() && round_to(f, i.lo()) == i.lo()) return Interval(Dyadic(), Dyadic());
  Dyadic m = max(abs(i.lo()), abs(i.hi()));
  std::int64_t top = f.emin;
  if (!m.is_zero()) {
    top = m.msb_exponent();
    if (m.mantissa() == 1 || m.mantissa() == -1) top -= 1;
  }
  std::int64_t u = std::max(top - f.p + 1, f.emin);
  return symmetric(f.mode == RoundingMode::ne ? u - 1 : u);
}

// Polynomials with dense exponent vectors over the opaque atoms.
using Mono = std::vector<std::uint32_t>;
using Poly = std::map<Mono, Rational>;

struct Frac {
  Poly num, den;
};

struct TooLarge {};

class Algebra {
 public:
  explicit Algebra(const std::vector<CExpr>& ex) : ex_(ex) {}

  Frac of(std::uint32_t e) {
    auto it = memo_.find(e);
    if (it != memo_.end()) return it->second;
    const CExpr& n = ex_[e];
    Frac r;
    switch (n.kind) {
      case K::cst: r = {constant(n.value), constant(1)}; break;
      case K::var:
      case K::abs:
      case K::rnd: r = {atom(e), constant(1)}; break;
      case K::neg: {
        Frac a = of(n.a);
        r = {scale(a.num, -1), a.den};
        break;
      }
      case K::add:
      case K::sub: {
        Frac a = of(n.a), b = of(n.b);
        Poly bn = n.kind == K::add ? b.num : scale(b.num, -1);
        r = {plus(times(a.num, b.den), times(bn, a.den)), times(a.den, b.den)};
        break;
      }
      case K::mul: {
        Frac a = of(n.a), b = of(n.b);
        r = {times(a.num, b.num), times(a.den, b.den)};
        break;
      }
      case K::div: {
        Frac a = of(n.a), b = of(n.b);
        if (b.num.empty()) fail("division by an identically zero expression");
        r = {times(a.num, b.den), times(a.den, b.num)};
        break;
      }
    }
    memo_.emplace(e, r);
    return r;
  }

  bool equal(std::uint32_t l, std::uint32_t r) {
    Frac a = of(l), b = of(r);
    return times(a.num, b.den) == times(b.num, a.den);
  }

 private:
  Poly constant(const Rational& c) {
    Poly p;
    if (sgn(c) != 0) p.emplace(Mono(slots, 0), c);
    return p;
  }

  Poly atom(std::uint32_t e) {
    auto [it, inserted] = atoms_.emplace(e, static_cast<std::uint32_t>(atoms_.size()));
    if (it->second >= slots) throw TooLarge{};
    Mono m(slots, 0);
    m[it->second] = 1;
    Poly p;
    p.emplace(m, Rational(1));
    return p;
  }

  static Poly scale(const Poly& a, int s) {
    Poly r = a;
    for (auto& [m, c] : r) c *= s;
    return r;
  }

  static void check(const Poly& p) {
    if (p.size() > 20000) throw TooLarge{};
  }

  static Poly plus(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b) {
      Rational& slot = r[m];
      slot += c;
      if (sgn(slot) == 0) r.erase(m);
    }
    check(r);
    return r;
  }

  static Poly times(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        Mono m(slots);
        std::uint32_t deg = 0;
        for (std::size_t i = 0; i < slots; ++i) {
          m[i] = ma[i] + mb[i];
          deg += m[i];
        }
        if (deg > 64) throw TooLarge{};
        Rational& slot = r[m];
        slot += ca * cb;
        if (sgn(slot) == 0) r.erase(m);
      }
    check(r);
    return r;
  }

  static constexpr std::size_t slots = 40;
  const std::vector<CExpr>& ex_;
  std::map<std::uint32_t, Frac> memo_;
  std::map<std::uint32_t, std::uint32_t> atoms_;
};

class Checker {
 public:
  Checker(std::string_view cert, std::string_view source) : source_(source) {
    std::string text(cert);
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) lines_.push_back(l);
    need(!text.empty() && text.back() == '\n', "certificate must end with a newline");
  }

  Verdict run() {
    Verdict v;
    try {
      parse();
      if (hash_mismatch_) {
        v.kind = VerdictKind::hash_mismatch;
        v.reason = "certificate was produced for a different script";
        return v;
      }
      script_ = load_script(source_);
      check_formats();
      check_order();
      index_atoms();
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        cur_ = nodes_[i].line;
        replay(i);
        if (auto alt = alternative(i))
          fail("premise n" + std::to_string(nodes_[i].prem[alt->first]) + " is not canonical, n" +
               std::to_string(alt->second) + " also justifies this node");
      }
      cur_ = goal_line_;
      check_goals();
    } catch (const Failure& f) {
      v.kind = VerdictKind::fail;
      v.line = cur_ + 1;
      v.reason = f.what();
      return v;
    } catch (const ScriptError& e) {
      v.kind = VerdictKind::fail;
      v.reason = std::string("script does not load: ") + e.what();
      return v;
    }
    v.assumptions = assumptions_;
    v.kind = assumptions_.empty() ? VerdictKind::pass : VerdictKind::pass_with_axioms;
    return v;
  }

  // Rewires every premise to its lowest-numbered valid alternative and
  // renumbers, until the certificate satisfies the canonical premise rule.
  // Returns the text unchanged when it does not replay.
  static std::string canonicalize(std::string text, std::string_view source) {
    for (int pass = 0; pass < max_canonical_passes; ++pass) {
      bool changed = false;
      std::string next;
      try {
        Checker c(text, source);
        c.parse();
        if (c.hash_mismatch_) return text;
        c.script_ = load_script(c.source_);
        c.check_formats();
        c.check_order();
        c.index_atoms();
        for (std::size_t i = 0; i < c.nodes_.size(); ++i) {
          c.replay(i);
          while (auto alt = c.alternative(i)) {
            c.nodes_[i].prem[alt->first] = alt->second;
            c.deps_.pop_back();
            c.weak_.pop_back();
            c.replay(i);
            changed = true;
          }
        }
        if (changed) next = c.serialize();
      } catch (const Failure&) {
        return text;
      } catch (const ScriptError&) {
        return text;
      }
      if (!changed) return text;
      text = std::move(next);
    }
    return text;
  }

 private:
  static constexpr int max_canonical_passes = 64;

  const std::string& line(std::size_t i) {
    cur_ = i;
    need(i < lines_.size(), "unexpected end of certificate");
    return lines_[i];
  }

  void parse() {
    need(line(0) == "flobound-certificate 1", "not a version 1 certificate");
    need(line(1) == std::string("tool ") + FLOBOUND_VERSION, "produced by another tool version");
    auto t = tokens(line(2));
    need(t.size() == 2 && t[0] == "script" && t[1].rfind("sha256:", 0) == 0, "bad script line");
    hash_mismatch_ = t[1].substr(7) != script_digest(source_);
    t = tokens(line(3));
    need(t.size() == 5 && t[0] == "options" && t[1] == "precision" && t[3] == "unconstrained",
         "bad options line");
    std::int64_t p = integer(t[2]);
    need(p >= 24 && p <= 1 << 16, "precision out of range");
    precision_ = static_cast<int>(p);
    need(t[4] == "0" || t[4] == "1", "bad unconstrained flag");
    unconstrained_ = t[4] == "1";
    std::size_t i = 4;
    for (; line(i).rfind("format ", 0) == 0; ++i) {
      t = tokens(lines_[i]);
      need(t.size() == 6, "bad format line");
      need(ref(t[1], 'f', formats_.size() + 1) == formats_.size(), "formats out of order");
      CFormat f;
      std::int64_t fp = integer(t[2]);
      need(fp >= 2 && fp <= 1 << 16, "bad format precision");
      f.p = static_cast<int>(fp);
      f.emin = integer(t[3]);
      f.emax = integer(t[4]);
      auto m = parse_mode(t[5]);
      need(m.has_value(), "bad rounding mode");
      f.mode = *m;
      formats_.push_back(f);
    }
    std::set<std::tuple<int, std::uint32_t, std::uint32_t, std::uint32_t, std::string>> seen;
    for (; line(i).rfind("expr ", 0) == 0; ++i) {
      t = tokens(lines_[i]);
      need(t.size() >= 4, "bad expr line");
      need(ref(t[1], 'e', exprs_.size() + 1) == exprs_.size(), "expressions out of order");
      CExpr e;
      std::size_t n = exprs_.size();
      const std::string& k = t[2];
      std::string extra;
      if (k == "var") {
        need(t.size() == 4 && !t[3].empty(), "bad variable");
        e.kind = K::var;
        e.name = t[3];
        extra = e.name;
      } else if (k == "const") {
        need(t.size() == 4, "bad constant");
        e.kind = K::cst;
        e.value = rational(t[3]);
        extra = t[3];
      } else if (k == "round") {
        need(t.size() == 5, "bad round");
        e.kind = K::rnd;
        e.fmt = ref(t[3], 'f', formats_.size());
        e.a = ref(t[4], 'e', n);
      } else if (k == "neg" || k == "abs") {
        need(t.size() == 4, "bad unary expression");
        e.kind = k == "neg" ? K::neg : K::abs;
        e.a = ref(t[3], 'e', n);
      } else {
        static const std::map<std::string, K> bin{{"add", K::add}, {"sub", K::sub}, {"mul", K::mul}, {"div", K::div}};
        auto it = bin.find(k);
        need(it != bin.end() && t.size() == 5, "bad expression kind '" + k + "'");
        e.kind = it->second;
        e.a = ref(t[3], 'e', n);
        e.b = ref(t[4], 'e', n);
      }
      need(seen.emplace(static_cast<int>(e.kind), e.a, e.b, e.fmt, extra).second, "duplicate expression");
      exprs_.push_back(std::move(e));
    }
    expr_lines_ = i;
    std::set<std::string> bodies;
    for (; line(i).rfind("node ", 0) == 0; ++i) {
      t = tokens(lines_[i]);
      need(t.size() >= 4, "bad node line");
      need(ref(t[1], 'n', nodes_.size() + 1) == nodes_.size(), "nodes out of order");
      CNode n;
      n.line = i;
      std::size_t at = 2;
      n.rule = t[at++];
      if (n.rule == "hypothesis") {
        need(at < t.size(), "missing hypothesis index");
        std::int64_t h = integer(t[at++]);
        need(h >= 0, "bad hypothesis index");
        n.hyp = static_cast<std::size_t>(h);
      }
      need(at < t.size(), "missing predicate");
      auto pred = parse_predicate(t[at++]);
      need(pred.has_value(), "unknown predicate");
      n.pred = *pred;
      auto next = [&]() -> const std::string& {
        need(at < t.size(), "truncated node");
        return t[at++];
      };
      if (n.pred != Predicate::absurd) n.x = ref(next(), 'e', exprs_.size());
      if (n.pred == Predicate::rel) n.y = ref(next(), 'e', exprs_.size());
      if (n.pred == Predicate::bnd || n.pred == Predicate::rel) {
        Dyadic lo = dyadic(next());
        Dyadic hi = dyadic(next());
        need(lo <= hi, "empty interval");
        n.iv = Interval(lo, hi);
        if (n.pred == Predicate::rel) need(Dyadic(-1) < lo, "relative error not above -1");
      } else if (n.pred == Predicate::fix || n.pred == Predicate::flt) {
        n.k = integer(next());
        if (n.pred == Predicate::flt) need(*n.k >= 1, "FLT precision must be positive");
      }
      if (at < t.size()) {
        need(t[at++] == "<-" && at < t.size(), "bad premise list");
        for (; at < t.size(); ++at) n.prem.push_back(ref(t[at], 'n', nodes_.size()));
      }
      std::string body = lines_[i].substr(lines_[i].find(' ', 5));
      need(bodies.insert(body).second, "duplicate node");
      nodes_.push_back(std::move(n));
    }
    goal_line_ = i;
    std::int64_t last = -1;
    for (; line(i).rfind("goal ", 0) == 0; ++i) {
      t = tokens(lines_[i]);
      need(t.size() == 3, "bad goal line");
      std::int64_t g = integer(t[1]);
      need(g > last, "goals out of order");
      last = g;
      goals_.emplace_back(static_cast<std::size_t>(g), ref(t[2], 'n', nodes_.size()));
    }
    need(line(i) == "end", "expected 'end'");
    need(i + 1 == lines_.size(), "text after 'end'");
  }

  void check_formats() {
    cur_ = 4;
    need(formats_.size() == script_.pool.format_count(), "format table does not match the script");
    for (std::size_t i = 0; i < formats_.size(); ++i) {
      cur_ = 4 + i;
      const FpFormat& f = script_.pool.format(static_cast<std::uint32_t>(i)).format;
      const CFormat& c = formats_[i];
      need(f.precision == c.p && f.min_exponent == c.emin && f.max_exponent == c.emax && f.mode == c.mode,
           "format does not match the script");
    }
  }

  // Nodes in depth-first post-order from the goals, expressions in
  // post-order of first use by the nodes.
  void check_order() {
    std::vector<char> seen(nodes_.size(), 0);
    std::size_t next = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t n) {
      if (seen[n]) return;
      seen[n] = 1;
      for (std::size_t p : nodes_[n].prem) visit(p);
      cur_ = nodes_[n].line;
      need(n == next++, "node is not in canonical order");
    };
    for (std::size_t g = 0; g < goals_.size(); ++g) {
      cur_ = goal_line_ + g;
      visit(goals_[g].second);
    }
    cur_ = goal_line_;
    need(next == nodes_.size(), "certificate contains unused nodes");
    std::vector<char> eseen(exprs_.size(), 0);
    std::size_t enext = 0;
    std::function<void(std::uint32_t)> evisit = [&](std::uint32_t e) {
      if (eseen[e]) return;
      eseen[e] = 1;
      if (exprs_[e].a != none) evisit(exprs_[e].a);
      if (exprs_[e].b != none) evisit(exprs_[e].b);
      need(e == enext++, "expression e" + std::to_string(e) + " is not in canonical order");
    };
    for (const CNode& n : nodes_) {
      cur_ = n.line;
      if (n.x != none) evisit(n.x);
      if (n.y != none) evisit(n.y);
    }
    cur_ = expr_lines_ > 0 ? expr_lines_ - 1 : 0;
    need(enext == exprs_.size(), "certificate contains unused expressions");
  }

  // Accessors for rule shapes.
  const CExpr& E(std::uint32_t e) const { return exprs_[e]; }
  bool is(std::uint32_t e, K k) const { return e != none && exprs_[e].kind == k; }
  std::uint32_t find(K k, std::uint32_t a, std::uint32_t b = none) const {
    for (std::uint32_t i = 0; i < exprs_.size(); ++i)
      if (exprs_[i].kind == k && exprs_[i].a == a && exprs_[i].b == b) return i;
    return none;
  }

  const CNode& P(const CNode& n, std::size_t i) const { return nodes_[n.prem[i]]; }

  void premises(const CNode& n, std::initializer_list<Predicate> preds) {
    need(n.prem.size() == preds.size(), "wrong number of premises");
    std::size_t i = 0;
    for (Predicate p : preds) need(P(n, i++).pred == p, "premise has the wrong predicate");
  }

  void about(const CNode& p, std::uint32_t e) { need(p.x == e, "premise is about the wrong expression"); }

  void value(const CNode& n, const Interval& want) {
    need(n.iv == want, "interval differs from the recomputed " + want.to_string());
  }

  void value(const CNode& n, std::int64_t want) {
    need(n.k == want, "value differs from the recomputed " + std::to_string(want));
  }

  void conclusion(const CNode& n, Predicate p) { need(n.pred == p, "conclusion has the wrong predicate"); }

  const CFormat& fmt_of(std::uint32_t round_expr) const { return formats_[E(round_expr).fmt]; }

  bool representable_pair(const CNode& flt, const CNode& fix, const CFormat& f) const {
    return *flt.k <= f.p && *fix.k >= f.emin;
  }

  // x = (rnd(s) - s) / s with s = a op b
  void relative_sum_shape(std::uint32_t s, K op, const CNode& n, std::size_t first) {
    need(is(s, op), "rounded operand has the wrong shape");
    std::uint32_t a = E(s).a, b = E(s).b;
    about(P(n, first), a);
    about(P(n, first + 1), a);
    about(P(n, first + 2), b);
    about(P(n, first + 3), b);
  }

  Interval one() const { return Interval(Dyadic(1), Dyadic(1)); }

  void replay_compute(const CNode& n) {
    using Pr = Predicate;
    const std::string& r = n.rule;
    const int p = precision_;
    std::uint32_t x = n.x;
    auto arith = [&](K k, Interval (*op)(const Interval&, const Interval&, int)) {
      conclusion(n, Pr::bnd);
      need(is(x, k), "conclusion has the wrong shape");
      premises(n, {Pr::bnd, Pr::bnd});
      about(P(n, 0), E(x).a);
      about(P(n, 1), E(x).b);
      if (k == K::div) need(!P(n, 1).iv->contains_zero(), "divisor enclosure contains zero");
      value(n, op(*P(n, 0).iv, *P(n, 1).iv, p));
    };
    if (r == "bnd_const") {
      conclusion(n, Pr::bnd);
      need(is(x, K::cst) && n.prem.empty(), "not a constant");
      const Rational& q = E(x).value;
      value(n, Interval(dyadic_from_rational(q, p, Direction::down), dyadic_from_rational(q, p, Direction::up)));
    } else if (r == "bnd_neg" || r == "bnd_abs") {
      conclusion(n, Pr::bnd);
      need(is(x, r == "bnd_neg" ? K::neg : K::abs), "conclusion has the wrong shape");
      premises(n, {Pr::bnd});
      about(P(n, 0), E(x).a);
      value(n, r == "bnd_neg" ? neg(*P(n, 0).iv) : abs(*P(n, 0).iv));
    } else if (r == "bnd_add") {
      arith(K::add, add);
    } else if (r == "bnd_sub") {
      arith(K::sub, sub);
    } else if (r == "bnd_mul") {
      arith(K::mul, mul);
    } else if (r == "bnd_div") {
      arith(K::div, div);
    } else if (r == "bnd_sqr") {
      conclusion(n, Pr::bnd);
      need(is(x, K::mul) && E(x).a == E(x).b, "not a square");
      premises(n, {Pr::bnd});
      about(P(n, 0), E(x).a);
      value(n, square(*P(n, 0).iv, p));
    } else if (r == "bnd_sub_refl") {
      conclusion(n, Pr::bnd);
      need(is(x, K::sub) && E(x).a == E(x).b && n.prem.empty(), "not a self-difference");
      value(n, Interval(Dyadic(), Dyadic()));
    } else if (r == "bnd_of_abs" || r == "bnd_of_abs_sign") {
      conclusion(n, Pr::bnd);
      std::uint32_t ax = find(K::abs, x);
      if (r == "bnd_of_abs") {
        premises(n, {Pr::bnd});
      } else {
        premises(n, {Pr::bnd, Pr::bnd});
        about(P(n, 1), x);
      }
      need(ax != none, "premise is about the wrong expression");
      about(P(n, 0), ax);
      const Interval& a = *P(n, 0).iv;
      if (r == "bnd_of_abs") {
        value(n, Interval(-a.hi(), a.hi()));
      } else {
        const Interval& v = *P(n, 1).iv;
        MaybeInterval pos = intersect(v, a), ng = intersect(v, neg(a));
        need(pos || ng, "sign refinement is empty");
        value(n, pos && ng ? hull(*pos, *ng) : pos ? *pos : *ng);
      }
    } else if (r == "round_bnd") {
      conclusion(n, Pr::bnd);
      need(is(x, K::rnd), "not a rounding");
      premises(n, {Pr::bnd});
      about(P(n, 0), E(x).a);
      const CFormat& f = fmt_of(x);
      value(n, Interval(round_to(f, P(n, 0).iv->lo()), round_to(f, P(n, 0).iv->hi())));
    } else if (r == "round_abs_error" || r == "round_exact") {
      conclusion(n, Pr::bnd);
      need(is(x, K::sub) && is(E(x).a, K::rnd) && E(E(x).a).a == E(x).b, "not a rounding error");
      std::uint32_t a = E(x).b;
      const CFormat& f = fmt_of(E(x).a);
      if (r == "round_abs_error") {
        premises(n, {Pr::bnd});
        about(P(n, 0), a);
        value(n, rounding_abs_error(f, *P(n, 0).iv));
      } else {
        premises(n, {Pr::flt, Pr::fix});
        about(P(n, 0), a);
        about(P(n, 1), a);
        need(representable_pair(P(n, 0), P(n, 1), f), "operand is not representable");
        value(n, Interval(Dyadic(), Dyadic()));
      }
    } else if (r == "round_rel_sum" || r == "round_rel_diff" || r == "round_rel_error") {
      conclusion(n, Pr::bnd);
      need(is(x, K::div) && is(E(x).a, K::sub), "not a relative error");
      std::uint32_t s = E(x).b, d = E(x).a;
      need(is(E(d).a, K::rnd) && E(E(d).a).a == s && E(d).b == s, "not a relative rounding error");
      const CFormat& f = fmt_of(E(d).a);
      if (r == "round_rel_error") {
        premises(n, {Pr::bnd});
        about(P(n, 0), find(K::abs, s));
        need(P(n, 0).iv->lo() >= Dyadic::pow2(f.emin + f.p - 1), "operand may be subnormal");
      } else {
        premises(n, {Pr::flt, Pr::fix, Pr::flt, Pr::fix});
        relative_sum_shape(s, r == "round_rel_sum" ? K::add : K::sub, n, 0);
        need(representable_pair(P(n, 0), P(n, 1), f) && representable_pair(P(n, 2), P(n, 3), f),
             "operands are not representable");
      }
      value(n, rounding_rel_error(f));
    } else if (r == "rel_round_sum" || r == "rel_round_diff" || r == "rel_round") {
      conclusion(n, Pr::rel);
      need(is(x, K::rnd) && E(x).a == n.y, "not a rounding");
      const CFormat& f = fmt_of(x);
      if (r == "rel_round") {
        premises(n, {Pr::bnd});
        about(P(n, 0), find(K::abs, n.y));
        need(P(n, 0).iv->lo() >= Dyadic::pow2(f.emin + f.p - 1), "operand may be subnormal");
      } else {
        premises(n, {Pr::flt, Pr::fix, Pr::flt, Pr::fix});
        relative_sum_shape(n.y, r == "rel_round_sum" ? K::add : K::sub, n, 0);
        need(representable_pair(P(n, 0), P(n, 1), f) && representable_pair(P(n, 2), P(n, 3), f),
             "operands are not representable");
      }
      value(n, rounding_rel_error(f));
    } else if (r == "fix_round" || r == "flt_round") {
      conclusion(n, r == "fix_round" ? Pr::fix : Pr::flt);
      need(is(x, K::rnd) && n.prem.empty(), "not a rounding");
      value(n, r == "fix_round" ? fmt_of(x).emin : static_cast<std::int64_t>(fmt_of(x).p));
    } else if (r == "fix_const" || r == "flt_const") {
      conclusion(n, r == "fix_const" ? Pr::fix : Pr::flt);
      need(is(x, K::cst) && n.prem.empty(), "not a constant");
      const Rational& q = E(x).value;
      const BigInt& d = q.get_den();
      need(mpz_popcount(d.get_mpz_t()) == 1, "constant is not dyadic");
      std::int64_t shift = static_cast<std::int64_t>(mpz_scan1(d.get_mpz_t(), 0));
      BigInt m = q.get_num();
      std::int64_t e = -shift;
      if (m == 0) {
        value(n, r == "fix_const" ? std::int64_t{1} << 24 : std::int64_t{1});
        return;
      }
      while (mpz_even_p(m.get_mpz_t())) {
        m /= 2;
        ++e;
      }
      value(n, r == "fix_const" ? e : static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2)));
    } else if (r == "fix_neg" || r == "fix_abs" || r == "flt_neg" || r == "flt_abs") {
      Pr pr = r[1] == 'i' ? Pr::fix : Pr::flt;
      conclusion(n, pr);
      need(is(x, r.substr(4) == "neg" ? K::neg : K::abs), "conclusion has the wrong shape");
      premises(n, {pr});
      about(P(n, 0), E(x).a);
      value(n, *P(n, 0).k);
    } else if (r == "fix_add" || r == "fix_sub" || r == "fix_mul" || r == "flt_mul") {
      Pr pr = r[1] == 'i' ? Pr::fix : Pr::flt;
      conclusion(n, pr);
      K k = r.substr(4) == "add" ? K::add : r.substr(4) == "sub" ? K::sub : K::mul;
      need(is(x, k), "conclusion has the wrong shape");
      premises(n, {pr, pr});
      about(P(n, 0), E(x).a);
      about(P(n, 1), E(x).b);
      std::int64_t a = *P(n, 0).k, b = *P(n, 1).k;
      value(n, k == K::mul ? a + b : std::min(a, b));
    } else if (r == "flt_of_fix_bnd") {
      conclusion(n, Pr::flt);
      premises(n, {Pr::fix, Pr::bnd});
      about(P(n, 0), x);
      about(P(n, 1), find(K::abs, x));
      const Dyadic& h = P(n, 1).iv->hi();
      std::int64_t want = 1;
      if (!h.is_zero()) {
        std::int64_t k = h.msb_exponent() + (h.is_power_of_two() ? 0 : 1);
        want = std::max<std::int64_t>(1, k - *P(n, 0).k);
      }
      value(n, want);
    } else if (r == "fix_of_flt_bnd") {
      conclusion(n, Pr::fix);
      premises(n, {Pr::flt, Pr::bnd});
      about(P(n, 0), x);
      about(P(n, 1), find(K::abs, x));
      const Dyadic& l = P(n, 1).iv->lo();
      need(l.sign() > 0, "magnitude not bounded away from zero");
      value(n, l.msb_exponent() - *P(n, 0).k + 1);
    } else if (r == "nzr_of_bnd") {
      conclusion(n, Pr::nzr);
      premises(n, {Pr::bnd});
      about(P(n, 0), x);
      need(!P(n, 0).iv->contains_zero(), "enclosure contains zero");
    } else if (r == "nzr_of_abs") {
      conclusion(n, Pr::nzr);
      premises(n, {Pr::bnd});
      about(P(n, 0), find(K::abs, x));
      need(P(n, 0).iv->lo().sign() > 0, "magnitude may be zero");
    } else if (r == "nzr_neg" || r == "nzr_abs") {
      conclusion(n, Pr::nzr);
      need(is(x, r == "nzr_neg" ? K::neg : K::abs), "conclusion has the wrong shape");
      premises(n, {Pr::nzr});
      about(P(n, 0), E(x).a);
    } else if (r == "nzr_mul" || r == "nzr_div") {
      conclusion(n, Pr::nzr);
      need(is(x, r == "nzr_mul" ? K::mul : K::div), "conclusion has the wrong shape");
      premises(n, {Pr::nzr, Pr::nzr});
      about(P(n, 0), E(x).a);
      about(P(n, 1), E(x).b);
    } else if (r == "rel_compose") {
      conclusion(n, Pr::rel);
      premises(n, {Pr::rel, Pr::rel});
      const CNode &a = P(n, 0), &b = P(n, 1);
      need(a.x == x && a.y == b.x && b.y == n.y, "relative errors do not chain");
      const Interval &i = *a.iv, &j = *b.iv;
      value(n, add(add(i, j, p), mul(i, j, p), p));
    } else if (r == "rel_of_bnd" || r == "bnd_of_rel_err") {
      bool to_rel = r == "rel_of_bnd";
      conclusion(n, to_rel ? Pr::rel : Pr::bnd);
      premises(n, {to_rel ? Pr::bnd : Pr::rel, Pr::nzr});
      const CNode& src = P(n, 0);
      std::uint32_t u = to_rel ? x : src.x, v = to_rel ? n.y : src.y;
      std::uint32_t q = find(K::div, find(K::sub, u, v), v);
      need(q != none && (to_rel ? src.x : x) == q, "relative error has the wrong shape");
      about(P(n, 1), v);
      value(n, *src.iv);
    } else if (r == "bnd_of_rel" || r == "bnd_div_of_rel") {
      conclusion(n, Pr::bnd);
      premises(n, {Pr::rel, Pr::bnd});
      const CNode &rel = P(n, 0), &b = P(n, 1);
      if (r == "bnd_of_rel") {
        need(rel.x == x, "relative error is about the wrong expression");
        about(b, rel.y);
      } else {
        need(is(x, K::div) && rel.x == E(x).a, "conclusion has the wrong shape");
        about(b, find(K::div, rel.y, E(x).b));
      }
      value(n, mul(*b.iv, add(one(), *rel.iv, p), p));
    } else if (r == "bnd_of_rel_hull") {
      conclusion(n, Pr::bnd);
      premises(n, {Pr::bnd, Pr::bnd});
      std::uint32_t a = P(n, 0).x;
      about(P(n, 1), find(K::div, find(K::sub, a, x), x));
      Interval factor = add(one(), *P(n, 1).iv, p);
      need(!factor.contains_zero(), "1 + error may vanish");
      value(n, hull(div(*P(n, 0).iv, factor, p), Interval(Dyadic(), Dyadic())));
    } else {
      fail("unknown rule '" + r + "'");
    }
  }

  void collect_divisors(std::uint32_t e, std::vector<std::uint32_t>& out, std::set<std::uint32_t>& seen) {
    if (!seen.insert(e).second) return;
    if (E(e).a != none) collect_divisors(E(e).a, out, seen);
    if (E(e).b != none) collect_divisors(E(e).b, out, seen);
    if (E(e).kind == K::div && E(E(e).b).kind != K::cst &&
        std::find(out.begin(), out.end(), E(e).b) == out.end())
      out.push_back(E(e).b);
  }

  Rational evaluate(std::uint32_t e, std::map<std::uint32_t, Rational>& atoms, bool& ok) {
    const CExpr& n = E(e);
    switch (n.kind) {
      case K::cst: return n.value;
      case K::var:
      case K::abs:
      case K::rnd: return atoms[e];
      case K::neg: return -evaluate(n.a, atoms, ok);
      case K::add: return evaluate(n.a, atoms, ok) + evaluate(n.b, atoms, ok);
      case K::sub: return evaluate(n.a, atoms, ok) - evaluate(n.b, atoms, ok);
      case K::mul: return evaluate(n.a, atoms, ok) * evaluate(n.b, atoms, ok);
      case K::div: {
        Rational d = evaluate(n.b, atoms, ok);
        if (sgn(d) == 0) {
          ok = false;
          return 0;
        }
        return evaluate(n.a, atoms, ok) / d;
      }
    }
    return 0;
  }

  void opaque(std::uint32_t e, std::set<std::uint32_t>& out) {
    const CExpr& n = E(e);
    if (n.kind == K::var || n.kind == K::abs || n.kind == K::rnd) {
      out.insert(e);
    } else {
      if (n.a != none) opaque(n.a, out);
      if (n.b != none) opaque(n.b, out);
    }
  }

  void replay_rewrite(const CNode& n, std::size_t index) {
    conclusion(n, Predicate::bnd);
    need(!n.prem.empty() && P(n, 0).pred == Predicate::bnd, "rewrite needs the enclosure of its right side");
    std::uint32_t lhs = n.x, rhs = P(n, 0).x;
    need(lhs != rhs, "trivial rewrite");
    std::vector<std::uint32_t> divs;
    std::set<std::uint32_t> seen;
    collect_divisors(lhs, divs, seen);
    collect_divisors(rhs, divs, seen);
    need(n.prem.size() >= 1 + divs.size(), "missing nonzero side conditions");
    for (std::size_t i = 0; i < n.prem.size() - 1; ++i) {
      const CNode& c = P(n, i + 1);
      need(c.pred == Predicate::nzr, "side condition is not NZR");
      if (i < divs.size()) need(c.x == divs[i], "side condition for the wrong divisor");
    }
    value(n, *P(n, 0).iv);
    try {
      Algebra alg(exprs_);
      need(alg.equal(lhs, rhs), "the two sides are not equal as rational functions");
    } catch (const TooLarge&) {
      std::set<std::uint32_t> atoms;
      opaque(lhs, atoms);
      opaque(rhs, atoms);
      std::mt19937_64 rng(0xc0ffee + index);
      std::uniform_int_distribution<long> num(-997, 997), den(1, 89);
      int agree = 0;
      for (int attempt = 0; attempt < 4096 && agree < 32; ++attempt) {
        std::map<std::uint32_t, Rational> val;
        for (std::uint32_t a : atoms) {
          Rational q(num(rng), den(rng));
          q.canonicalize();
          val[a] = q;
        }
        bool ok = true;
        Rational l = evaluate(lhs, val, ok), r = evaluate(rhs, val, ok);
        if (!ok) continue;
        need(l == r, "the two sides differ at a sample point");
        ++agree;
      }
      need(agree == 32, "could not sample the identity");
      assumptions_.push_back("node n" + std::to_string(index) + ": identity checked at 32 random points");
    }
  }

  bool same_as_script(std::uint32_t c, ExprId s, std::map<std::pair<std::uint32_t, std::uint32_t>, bool>& memo) {
    auto key = std::make_pair(c, s.value);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const CExpr& n = E(c);
    const ExprNode& m = script_.pool.node(s);
    bool r = false;
    switch (m.kind) {
      case ExprKind::variable: r = n.kind == K::var && n.name == script_.pool.variable_name(s); break;
      case ExprKind::constant: r = n.kind == K::cst && n.value == script_.pool.constant_value(s); break;
      case ExprKind::neg: r = n.kind == K::neg && same_as_script(n.a, m.lhs, memo); break;
      case ExprKind::abs: r = n.kind == K::abs && same_as_script(n.a, m.lhs, memo); break;
      case ExprKind::round: r = n.kind == K::rnd && n.fmt == m.payload && same_as_script(n.a, m.lhs, memo); break;
      case ExprKind::add: r = n.kind == K::add; break;
      case ExprKind::sub: r = n.kind == K::sub; break;
      case ExprKind::mul: r = n.kind == K::mul; break;
      case ExprKind::div: r = n.kind == K::div; break;
    }
    if (r && n.b != none) r = same_as_script(n.a, m.lhs, memo) && same_as_script(n.b, m.rhs, memo);
    memo.emplace(key, r);
    return r;
  }

  void replay(std::size_t i) {
    std::set<std::size_t> weak;
    std::set<std::size_t> deps = replay_node(nodes_[i], i, weak);
    deps_.push_back(std::move(deps));
    weak_.push_back(std::move(weak));
  }

  // Checks node n as number i against the nodes before it. Returns the case
  // assumptions it depends on; weak receives the axioms and sampled
  // identities it rests on.
  std::set<std::size_t> replay_node(const CNode& n, std::size_t i, std::set<std::size_t>& weak) {
    std::set<std::size_t> deps;
    for (std::size_t pr : n.prem) {
      deps.insert(deps_[pr].begin(), deps_[pr].end());
      weak.insert(weak_[pr].begin(), weak_[pr].end());
    }
    std::size_t sampled = assumptions_.size();
    if (n.rule == "hypothesis") {
      need(n.prem.empty(), "hypotheses have no premises");
      need(n.hyp < script_.hypotheses.size(), "no such hypothesis");
      const Enclosure& h = script_.hypotheses[n.hyp];
      need(n.pred == Predicate::bnd, "hypotheses are enclosures");
      std::map<std::pair<std::uint32_t, std::uint32_t>, bool> memo;
      need(same_as_script(n.x, h.expr, memo), "hypothesis is about another expression");
      value(n, Interval(dyadic_from_rational(*h.lower, precision_, Direction::down),
                        dyadic_from_rational(*h.upper, precision_, Direction::up)));
    } else if (n.rule == "axiom") {
      need(unconstrained_, "axioms are only allowed in unconstrained mode");
      need(n.pred == Predicate::nzr && n.prem.empty(), "only NZR side conditions can be assumed");
      assumptions_.push_back("NZR(" + script_.print(to_script(n.x)) + ")");
      weak.insert(i);
    } else if (n.rule == "assume") {
      need(n.pred == Predicate::bnd && n.prem.empty(), "case assumptions are enclosures");
      deps.insert(i);
    } else if (n.rule == "intersect") {
      premises(n, {n.pred, n.pred});
      need(n.pred == Predicate::bnd || n.pred == Predicate::rel, "only enclosures intersect");
      const CNode &a = P(n, 0), &b = P(n, 1);
      need(a.x == n.x && b.x == n.x && a.y == n.y && b.y == n.y, "intersecting different atoms");
      MaybeInterval x = intersect(*a.iv, *b.iv);
      need(x.has_value(), "intersection is empty");
      value(n, *x);
    } else if (n.rule == "absurd") {
      need(n.pred == Predicate::absurd, "conclusion must be ABSURD");
      premises(n, {Predicate::bnd, Predicate::bnd});
      need(P(n, 0).x == P(n, 1).x, "enclosures of different expressions");
      need(!intersect(*P(n, 0).iv, *P(n, 1).iv), "enclosures intersect");
    } else if (n.rule == "case_split") {
      need(n.prem.size() >= 5 && n.prem.size() % 2 == 1, "bad case split");
      const CNode& base = P(n, 0);
      need(base.pred == Predicate::bnd, "case split needs an enclosure of the split expression");
      deps = deps_[n.prem[0]];
      std::optional<Interval> h;
      bool all_absurd = true;
      Dyadic reach = base.iv->lo();
      for (std::size_t c = 1; c < n.prem.size(); c += 2) {
        const CNode& a = P(n, c);
        const CNode& f = P(n, c + 1);
        need(a.rule == "assume" && a.x == base.x, "case is not an assumption on the split expression");
        need(a.iv->lo() == reach, "cases do not tile the enclosure");
        reach = a.iv->hi();
        std::set<std::size_t> fd = deps_[n.prem[c + 1]];
        fd.erase(n.prem[c]);
        deps.insert(fd.begin(), fd.end());
        if (f.pred == Predicate::absurd) continue;
        all_absurd = false;
        need(f.pred == Predicate::bnd && f.x == n.x, "case result is about another atom");
        h = h ? hull(*h, *f.iv) : *f.iv;
      }
      need(reach == base.iv->hi(), "cases do not tile the enclosure");
      if (all_absurd) {
        need(n.pred == Predicate::absurd, "every case is contradictory");
      } else {
        need(n.pred == Predicate::bnd, "case split concludes an enclosure");
        value(n, *h);
      }
    } else if (n.rule == "rewrite") {
      replay_rewrite(n, i);
      if (assumptions_.size() > sampled) weak.insert(i);
    } else {
      replay_compute(n);
    }
    return deps;
  }

  void index_atoms() {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      atom_nodes_[{static_cast<int>(nodes_[i].pred), nodes_[i].x, nodes_[i].y}].push_back(i);
  }

  // Canonical premise rule: no premise may be replaced by a lower-numbered
  // node on the same atom that justifies the same conclusion without new
  // case assumptions, axioms or sampled identities. Returns the first
  // (slot, node) replacement that would be accepted.
  std::optional<std::pair<std::size_t, std::size_t>> alternative(std::size_t i) {
    const CNode& n = nodes_[i];
    for (std::size_t j = 0; j < n.prem.size(); ++j) {
      const CNode& p = nodes_[n.prem[j]];
      for (std::size_t q : atom_nodes_[{static_cast<int>(p.pred), p.x, p.y}]) {
        if (q >= n.prem[j]) break;
        CNode m = n;
        m.prem[j] = q;
        std::size_t keep = assumptions_.size();
        std::set<std::size_t> weak;
        bool ok = true;
        std::set<std::size_t> deps;
        try {
          deps = replay_node(m, i, weak);
        } catch (const Failure&) {
          ok = false;
        }
        assumptions_.resize(keep);
        if (ok && std::includes(deps_[i].begin(), deps_[i].end(), deps.begin(), deps.end()) &&
            std::includes(weak_[i].begin(), weak_[i].end(), weak.begin(), weak.end()))
          return std::make_pair(j, q);
      }
    }
    return std::nullopt;
  }

  template <class Map>
  static std::string node_body(const CNode& n, const std::vector<std::size_t>& prem, Map&& expr) {
    std::string b = " " + n.rule;
    if (n.rule == "hypothesis") b += " " + std::to_string(n.hyp);
    b += " " + std::string(predicate_name(n.pred));
    if (n.x != none) b += " e" + std::to_string(expr(n.x));
    if (n.y != none) b += " e" + std::to_string(expr(n.y));
    if (n.iv) b += " " + n.iv->lo().to_string() + " " + n.iv->hi().to_string();
    if (n.k) b += " " + std::to_string(*n.k);
    if (!prem.empty()) {
      b += " <-";
      for (std::size_t p : prem) b += " n" + std::to_string(p);
    }
    return b;
  }

  // Writes the certificate back in canonical order, merging nodes that have
  // become identical and dropping those no longer used.
  std::string serialize() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < 4 + formats_.size(); ++i) out << lines_[i] << "\n";
    std::string head = out.str();
    std::vector<std::size_t> renum(nodes_.size(), SIZE_MAX);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> kept;  // old node, new premises
    std::map<std::string, std::size_t> by_body;
    std::function<std::size_t(std::size_t)> visit = [&](std::size_t k) -> std::size_t {
      if (renum[k] != SIZE_MAX) return renum[k];
      std::vector<std::size_t> prem;
      for (std::size_t p : nodes_[k].prem) prem.push_back(visit(p));
      auto [it, fresh] = by_body.emplace(node_body(nodes_[k], prem, [](std::uint32_t e) { return e; }), kept.size());
      if (fresh) kept.emplace_back(k, std::move(prem));
      return renum[k] = it->second;
    };
    std::vector<std::size_t> goal_nodes;
    for (const auto& g : goals_) goal_nodes.push_back(visit(g.second));

    // Expressions are renumbered in the order the new node list reaches them.
    std::vector<std::uint32_t> enew(exprs_.size(), none);
    std::vector<std::string> elines;
    std::function<std::uint32_t(std::uint32_t)> evisit = [&](std::uint32_t e) -> std::uint32_t {
      if (enew[e] != none) return enew[e];
      const CExpr& x = exprs_[e];
      std::uint32_t a = x.a != none ? evisit(x.a) : none, b = x.b != none ? evisit(x.b) : none;
      static const char* names[] = {"var", "const", "neg", "abs", "add", "sub", "mul", "div", "round"};
      std::string l = " " + std::string(names[static_cast<int>(x.kind)]);
      if (x.kind == K::var) l += " " + x.name;
      else if (x.kind == K::cst) l += " " + x.value.get_str();
      else if (x.kind == K::rnd) l += " f" + std::to_string(x.fmt) + " e" + std::to_string(a);
      else {
        l += " e" + std::to_string(a);
        if (b != none) l += " e" + std::to_string(b);
      }
      enew[e] = static_cast<std::uint32_t>(elines.size());
      elines.push_back("expr e" + std::to_string(enew[e]) + l);
      return enew[e];
    };
    std::vector<std::string> nlines;
    for (const auto& [k, prem] : kept)
      nlines.push_back("node n" + std::to_string(nlines.size()) + node_body(nodes_[k], prem, evisit));
    out.str("");
    out << head;
    for (const std::string& l : elines) out << l << "\n";
    for (const std::string& l : nlines) out << l << "\n";
    for (std::size_t g = 0; g < goals_.size(); ++g)
      out << "goal " << goals_[g].first << " n" << goal_nodes[g] << "\n";
    out << "end\n";
    return out.str();
  }

  void check_goals() {
    for (std::size_t g = 0; g < goals_.size(); ++g) {
      cur_ = goal_line_ + g;
      auto [gi, ni] = goals_[g];
      need(gi < script_.goals.size(), "no such goal");
      need(deps_[ni].empty(), "goal depends on an undischarged case assumption");
      const CNode& n = nodes_[ni];
      if (n.pred == Predicate::absurd) continue;
      const Enclosure& goal = script_.goals[gi];
      need(n.pred == Predicate::bnd, "goal node is not an enclosure");
      std::map<std::pair<std::uint32_t, std::uint32_t>, bool> memo;
      need(same_as_script(n.x, goal.expr, memo), "goal node is about another expression");
      if (goal.lower) need(compare(n.iv->lo(), *goal.lower) >= 0, "lower bound not established");
      if (goal.upper) need(compare(n.iv->hi(), *goal.upper) <= 0, "upper bound not established");
    }
  }

  // Interns a certificate expression into the checker's copy of the script
  // pool so that assumptions print with the script's names.
  ExprId to_script(std::uint32_t e) {
    const CExpr& n = E(e);
    ExprPool& pool = script_.pool;
    switch (n.kind) {
      case K::var: return pool.variable(n.name);
      case K::cst: return pool.constant(n.value);
      case K::neg: return pool.unary(ExprKind::neg, to_script(n.a));
      case K::abs: return pool.unary(ExprKind::abs, to_script(n.a));
      case K::rnd: return pool.round(n.fmt, to_script(n.a));
      case K::add: return pool.binary(ExprKind::add, to_script(n.a), to_script(n.b));
      case K::sub: return pool.binary(ExprKind::sub, to_script(n.a), to_script(n.b));
      case K::mul: return pool.binary(ExprKind::mul, to_script(n.a), to_script(n.b));
      case K::div: return pool.binary(ExprKind::div, to_script(n.a), to_script(n.b));
    }
    return {};
  }

  std::string source_;
  std::vector<std::string> lines_;
  std::size_t cur_ = 0;
  bool hash_mismatch_ = false;
  int precision_ = 80;
  bool unconstrained_ = false;
  std::vector<CFormat> formats_;
  std::vector<CExpr> exprs_;
  std::vector<CNode> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> goals_;
  std::size_t expr_lines_ = 0, goal_line_ = 0;
  std::vector<std::set<std::size_t>> deps_, weak_;
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::vector<std::size_t>> atom_nodes_;
  std::vector<std::string> assumptions_;
  Script script_;
};

}  // namespace

Verdict check_certificate(std::string_view certificate, std::string_view script_source) {
  try {
    return Checker(certificate, script_source).run();
  } catch (const Failure& f) {
    Verdict v;
    v.reason = f.what();
    return v;
  }
}

std::string canonical_certificate(std::string_view certificate, std::string_view script_source) {
  return Checker::canonicalize(std::string(certificate), script_source);
}

}  // namespace flobound
