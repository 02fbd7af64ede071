#include "flobound/facts.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace flobound {

extern const char* const kRulesText;

std::string_view predicate_name(Predicate p) {
  switch (p) {
    case Predicate::bnd: return "BND";
    case Predicate::fix: return "FIX";
    case Predicate::flt: return "FLT";
    case Predicate::nzr: return "NZR";
    case Predicate::rel: return "REL";
    case Predicate::absurd: return "ABSURD";
  }
  return "?";
}

std::optional<Predicate> parse_predicate(std::string_view name) {
  for (Predicate p : {Predicate::bnd, Predicate::fix, Predicate::flt, Predicate::nzr,
                      Predicate::rel, Predicate::absurd})
    if (predicate_name(p) == name) return p;
  return std::nullopt;
}

std::string atom_text(const ExprPool& pool, const AtomKey& a, const NameMap* names) {
  std::string out(predicate_name(a.pred));
  if (a.pred == Predicate::absurd) return out;
  out += "(" + to_string(pool, a.expr, names);
  if (a.pred == Predicate::rel) out += ", " + to_string(pool, a.other, names);
  return out + ")";
}

void ApproxPairs::add(ExprId approx, ExprId accurate) {
  if (approx == accurate || contains(approx, accurate)) return;
  pairs.emplace_back(approx, accurate);
}

bool ApproxPairs::contains(ExprId approx, ExprId accurate) const {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(approx, accurate)) != pairs.end();
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

[[noreturn]] void table_error(int line, const std::string& msg) {
  throw std::runtime_error("rule table line " + std::to_string(line) + ": " + msg);
}

// "NAME(args)" -> NAME and the comma-separated arguments.
std::pair<std::string, std::vector<std::string>> call_form(const std::string& s, int line) {
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') table_error(line, "expected NAME(...) in '" + s + "'");
  return {trim(s.substr(0, open)), split_top(s.substr(open + 1, s.size() - open - 2), ',')};
}

void check_pattern(const RawExpr& e, int line) {
  if (e.kind == RawExpr::Kind::identifier &&
      (e.name.size() != 1 || e.name[0] < 'a' || e.name[0] > 'z'))
    table_error(line, "pattern variables are single lowercase letters, got '" + e.name + "'");
  if (e.kind == RawExpr::Kind::call && e.name != "rnd") table_error(line, "unknown function " + e.name);
  for (const RawExpr& a : e.args) check_pattern(a, line);
}

RawExpr pattern(const std::string& s, int line) {
  RawExpr e;
  try {
    e = parse_expression(s);
  } catch (const ScriptError& err) {
    table_error(line, err.what());
  }
  check_pattern(e, line);
  return e;
}

PatternAtom pattern_atom(const std::string& s, int line) {
  auto [name, args] = call_form(s, line);
  auto pred = parse_predicate(name);
  if (!pred || *pred == Predicate::absurd) table_error(line, "unknown predicate " + name);
  PatternAtom a;
  a.pred = *pred;
  std::size_t want = *pred == Predicate::rel ? 2 : 1;
  if (args.size() != want) table_error(line, "wrong number of arguments for " + name);
  a.expr = pattern(args[0], line);
  if (want == 2) a.other = pattern(args[1], line);
  return a;
}

Guard guard(const std::string& s, int line) {
  auto [name, args] = call_form(s, line);
  Guard g;
  std::size_t want = 1;
  if (name == "approx") {
    g.kind = Guard::Kind::approx;
    want = 2;
  } else if (name == "distinct") {
    g.kind = Guard::Kind::distinct;
    want = 2;
  } else if (name == "constant") {
    g.kind = Guard::Kind::constant;
  } else if (name == "hypothesis") {
    g.kind = Guard::Kind::hypothesis;
  } else {
    table_error(line, "unknown guard " + name);
  }
  if (args.size() != want) table_error(line, "wrong number of arguments for " + name);
  g.a = pattern(args[0], line);
  if (want == 2) g.b = pattern(args[1], line);
  return g;
}

std::size_t find_word(const std::string& s, const std::string& word) {
  return s.rfind(" " + word + " ");
}

}  // namespace

RuleTable RuleTable::parse(std::string_view text) {
  RuleTable t;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    auto colon = s.find(':');
    if (colon == std::string::npos) table_error(line, "missing ':'");
    std::istringstream head(s.substr(0, colon));
    std::string kind, id;
    head >> kind >> id;
    Rule r;
    r.id = id;
    r.text = s;
    std::string body = " " + trim(s.substr(colon + 1)) + " ";
    std::size_t w = find_word(body, "when");
    if (w != std::string::npos) {
      for (const std::string& g : split_top(body.substr(w + 6), ',')) r.guards.push_back(guard(g, line));
      body = body.substr(0, w + 1);
    }
    if (kind == "compute") {
      r.kind = Rule::Kind::compute;
      auto arrow = body.find(" <- ");
      r.conclusion = pattern_atom(trim(body.substr(0, arrow)), line);
      if (arrow != std::string::npos)
        for (const std::string& p : split_top(body.substr(arrow + 4), ','))
          r.premises.push_back(pattern_atom(p, line));
      if (!has_evaluator(id)) table_error(line, "no evaluator for rule " + id);
    } else if (kind == "rewrite") {
      r.kind = Rule::Kind::rewrite;
      auto arrow = body.find(" -> ");
      if (arrow == std::string::npos) table_error(line, "missing '->'");
      r.conclusion.pred = Predicate::bnd;
      r.conclusion.expr = pattern(trim(body.substr(0, arrow)), line);
      r.rhs = pattern(trim(body.substr(arrow + 4)), line);
    } else {
      table_error(line, "unknown rule kind '" + kind + "'");
    }
    if (t.find(id)) table_error(line, "duplicate rule id " + id);
    t.rules_.push_back(std::move(r));
  }
  return t;
}

std::string_view RuleTable::builtin_text() { return kRulesText; }

const RuleTable& RuleTable::builtin() {
  static const RuleTable table = parse(kRulesText);
  return table;
}

const Rule* RuleTable::find(std::string_view id) const {
  for (const Rule& r : rules_)
    if (r.id == id) return &r;
  return nullptr;
}

namespace {

bool match(const RawExpr& p, const ExprPool& pool, ExprId e, RuleMatch& m) {
  const ExprNode& n = pool.node(e);
  switch (p.kind) {
    case RawExpr::Kind::identifier: {
      ExprId& slot = m.vars[static_cast<std::size_t>(p.name[0] - 'a')];
      if (slot.valid()) return slot == e;
      slot = e;
      return true;
    }
    case RawExpr::Kind::number:
      return n.kind == ExprKind::constant && pool.constant_value(e) == p.value;
    case RawExpr::Kind::call:
      if (n.kind != ExprKind::round) return false;
      if (m.format != UINT32_MAX && m.format != n.payload) return false;
      m.format = n.payload;
      return match(p.args[0], pool, n.lhs, m);
    case RawExpr::Kind::neg:
      return n.kind == ExprKind::neg && match(p.args[0], pool, n.lhs, m);
    case RawExpr::Kind::abs:
      return n.kind == ExprKind::abs && match(p.args[0], pool, n.lhs, m);
    default: break;
  }
  ExprKind k = p.kind == RawExpr::Kind::add   ? ExprKind::add
               : p.kind == RawExpr::Kind::sub ? ExprKind::sub
               : p.kind == RawExpr::Kind::mul ? ExprKind::mul
                                              : ExprKind::div;
  return n.kind == k && match(p.args[0], pool, n.lhs, m) && match(p.args[1], pool, n.rhs, m);
}

ExprId bound(const RawExpr& p, const RuleMatch& m) {
  if (p.kind != RawExpr::Kind::identifier) return {};
  return m.vars[static_cast<std::size_t>(p.name[0] - 'a')];
}

bool same_match(const RuleMatch& a, const RuleMatch& b) {
  return a.vars == b.vars && a.format == b.format;
}

}  // namespace

std::vector<RuleMatch> match_rule(const Rule& rule, const ExprPool& pool, const AtomKey& target,
                                  const MatchContext& ctx) {
  if (rule.conclusion.pred != target.pred) return {};
  RuleMatch m0;
  if (!match(rule.conclusion.expr, pool, target.expr, m0)) return {};
  if (target.pred == Predicate::rel && !match(rule.conclusion.other, pool, target.other, m0))
    return {};
  std::vector<RuleMatch> cur{m0};
  for (const Guard& g : rule.guards) {
    std::vector<RuleMatch> next;
    for (const RuleMatch& m : cur) {
      switch (g.kind) {
        case Guard::Kind::approx:
          if (!ctx.approx) break;
          for (const auto& [u, v] : ctx.approx->pairs) {
            RuleMatch t = m;
            if (match(g.a, pool, u, t) && match(g.b, pool, v, t)) next.push_back(t);
          }
          break;
        case Guard::Kind::distinct: {
          ExprId x = bound(g.a, m), y = bound(g.b, m);
          if (x.valid() && y.valid() && x != y) next.push_back(m);
          break;
        }
        case Guard::Kind::constant: {
          ExprId x = bound(g.a, m);
          if (x.valid() && pool.kind(x) == ExprKind::constant) next.push_back(m);
          break;
        }
        case Guard::Kind::hypothesis:
          if (!ctx.hypotheses) break;
          for (ExprId h : *ctx.hypotheses) {
            RuleMatch t = m;
            if (match(g.a, pool, h, t)) next.push_back(t);
          }
          break;
      }
    }
    cur.clear();
    for (RuleMatch& m : next)
      if (std::none_of(cur.begin(), cur.end(), [&](const RuleMatch& o) { return same_match(o, m); }))
        cur.push_back(m);
  }
  return cur;
}

ExprId instantiate(const RawExpr& p, ExprPool& pool, const RuleMatch& m) {
  switch (p.kind) {
    case RawExpr::Kind::identifier: {
      ExprId e = m.vars[static_cast<std::size_t>(p.name[0] - 'a')];
      if (!e.valid()) throw std::logic_error("unbound pattern variable " + p.name);
      return e;
    }
    case RawExpr::Kind::number: return pool.constant(p.value);
    case RawExpr::Kind::call:
      if (m.format == UINT32_MAX) throw std::logic_error("unbound rounding operator");
      return pool.round(m.format, instantiate(p.args[0], pool, m));
    case RawExpr::Kind::neg: {
      ExprId a = instantiate(p.args[0], pool, m);
      return pool.unary(ExprKind::neg, a);
    }
    case RawExpr::Kind::abs: {
      ExprId a = instantiate(p.args[0], pool, m);
      return pool.unary(ExprKind::abs, a);
    }
    default: break;
  }
  ExprKind k = p.kind == RawExpr::Kind::add   ? ExprKind::add
               : p.kind == RawExpr::Kind::sub ? ExprKind::sub
               : p.kind == RawExpr::Kind::mul ? ExprKind::mul
                                              : ExprKind::div;
  ExprId a = instantiate(p.args[0], pool, m);
  ExprId b = instantiate(p.args[1], pool, m);
  return pool.binary(k, a, b);
}

AtomKey instantiate(const PatternAtom& p, ExprPool& pool, const RuleMatch& m) {
  AtomKey a;
  a.pred = p.pred;
  a.expr = instantiate(p.expr, pool, m);
  if (p.pred == Predicate::rel) a.other = instantiate(p.other, pool, m);
  return a;
}

std::vector<RewriteInstance> builtin_rewrites(ExprPool& pool, ExprId target,
                                              const MatchContext& ctx, const RuleTable& table) {
  std::vector<RewriteInstance> out;
  AtomKey key{Predicate::bnd, target, {}};
  for (const Rule& r : table.rules()) {
    if (r.kind != Rule::Kind::rewrite) continue;
    for (const RuleMatch& m : match_rule(r, pool, key, ctx)) {
      ExprId rhs = instantiate(r.rhs, pool, m);
      if (rhs != target) out.push_back({&r, rhs});
    }
  }
  return out;
}

namespace {

using Evaluator = std::function<std::optional<FactValue>(const EvalInput&)>;

const Interval& I(const EvalInput& in, std::size_t i) { return std::get<Interval>(*in.premises[i]); }
std::int64_t K(const EvalInput& in, std::size_t i) { return std::get<std::int64_t>(*in.premises[i]); }

ExprId first_round(const ExprPool& pool, ExprId e) {
  const ExprNode& n = pool.node(e);
  if (n.kind == ExprKind::round) return e;
  if (n.lhs.valid()) {
    ExprId r = first_round(pool, n.lhs);
    if (r.valid()) return r;
  }
  if (n.rhs.valid()) return first_round(pool, n.rhs);
  return {};
}

const FpFormat& format_of(const EvalInput& in) {
  return in.pool.round_format(first_round(in.pool, in.conclusion.expr));
}

const Interval one = Interval::point(Dyadic(1));

// Both operands of an exact sum are representable in f.
bool representable_operands(const EvalInput& in, const FpFormat& f) {
  return K(in, 0) <= f.precision && K(in, 1) >= f.min_exponent && K(in, 2) <= f.precision &&
         K(in, 3) >= f.min_exponent;
}

std::optional<FactValue> rel_interval(const Interval& e) {
  if (e.lo() <= Dyadic(-1)) return std::nullopt;
  return FactValue(e);
}

// Exponent of the largest power of two not above |x|, x > 0.
std::int64_t floor_log2(const Dyadic& x) { return x.msb_exponent(); }
// Exponent of the smallest power of two not below x, x > 0.
std::int64_t ceil_log2(const Dyadic& x) {
  return x.msb_exponent() + (x.is_power_of_two() ? 0 : 1);
}

constexpr std::int64_t zero_fix = std::int64_t{1} << 24;

const std::map<std::string, Evaluator, std::less<>>& evaluators() {
  static const std::map<std::string, Evaluator, std::less<>> table = [] {
    std::map<std::string, Evaluator, std::less<>> t;
    auto bnd = [](Interval i) -> std::optional<FactValue> { return FactValue(std::move(i)); };
    auto num = [](std::int64_t k) -> std::optional<FactValue> { return FactValue(k); };
    auto yes = []() -> std::optional<FactValue> { return FactValue(std::monostate{}); };

    t["bnd_const"] = [=](const EvalInput& in) {
      const Rational& q = in.pool.constant_value(in.conclusion.expr);
      return bnd(interval_from_rationals(q, q, in.precision));
    };
    t["bnd_neg"] = [=](const EvalInput& in) { return bnd(neg(I(in, 0))); };
    t["bnd_abs"] = [=](const EvalInput& in) { return bnd(abs(I(in, 0))); };
    t["bnd_add"] = [=](const EvalInput& in) { return bnd(add(I(in, 0), I(in, 1), in.precision)); };
    t["bnd_sub"] = [=](const EvalInput& in) { return bnd(sub(I(in, 0), I(in, 1), in.precision)); };
    t["bnd_sqr"] = [=](const EvalInput& in) { return bnd(square(I(in, 0), in.precision)); };
    t["bnd_mul"] = [=](const EvalInput& in) { return bnd(mul(I(in, 0), I(in, 1), in.precision)); };
    t["bnd_div"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      if (I(in, 1).contains_zero()) return std::nullopt;
      return bnd(div(I(in, 0), I(in, 1), in.precision));
    };
    t["bnd_sub_refl"] = [=](const EvalInput&) { return bnd(Interval::point(Dyadic())); };
    t["bnd_of_abs"] = [=](const EvalInput& in) {
      const Dyadic& h = I(in, 0).hi();
      return bnd(Interval(-h, h));
    };
    t["bnd_of_abs_sign"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      const Interval& a = I(in, 0);
      const Interval& x = I(in, 1);
      MaybeInterval pos = intersect(x, a), negs = intersect(x, neg(a));
      if (pos && negs) return bnd(hull(*pos, *negs));
      if (pos) return bnd(*pos);
      if (negs) return bnd(*negs);
      return std::nullopt;
    };
    t["round_bnd"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      try {
        return bnd(round_enclosure(format_of(in), I(in, 0)));
      } catch (const OverflowError&) {
        return std::nullopt;
      }
    };
    t["round_abs_error"] = [=](const EvalInput& in) {
      return bnd(abs_error_bound(format_of(in), I(in, 0)));
    };
    t["round_exact"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      const FpFormat& f = format_of(in);
      if (K(in, 0) > f.precision || K(in, 1) < f.min_exponent) return std::nullopt;
      return bnd(Interval::point(Dyadic()));
    };
    auto rel_sum = [=](const EvalInput& in) -> std::optional<FactValue> {
      const FpFormat& f = format_of(in);
      if (!representable_operands(in, f)) return std::nullopt;
      return bnd(rel_error_bound(f));
    };
    t["round_rel_sum"] = rel_sum;
    t["round_rel_diff"] = rel_sum;
    t["rel_round_sum"] = rel_sum;
    t["rel_round_diff"] = rel_sum;
    auto rel_normal = [=](const EvalInput& in) -> std::optional<FactValue> {
      const FpFormat& f = format_of(in);
      if (I(in, 0).lo() < f.smallest_normal()) return std::nullopt;
      return bnd(rel_error_bound(f));
    };
    t["round_rel_error"] = rel_normal;
    t["rel_round"] = rel_normal;
    t["fix_round"] = [=](const EvalInput& in) { return num(format_of(in).min_exponent); };
    t["flt_round"] = [=](const EvalInput& in) { return num(format_of(in).precision); };

    t["fix_const"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      const Rational& q = in.pool.constant_value(in.conclusion.expr);
      if (sgn(q) == 0) return num(zero_fix);
      const BigInt& d = q.get_den();
      mp_bitcnt_t twos = mpz_scan1(d.get_mpz_t(), 0);
      if (d != (BigInt(1) << twos)) return std::nullopt;
      Dyadic x = dyadic_from_rational(q, static_cast<int>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2)) + 1,
                                      Direction::down);
      return num(x.exponent());
    };
    t["flt_const"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      const Rational& q = in.pool.constant_value(in.conclusion.expr);
      if (sgn(q) == 0) return num(1);
      const BigInt& d = q.get_den();
      mp_bitcnt_t twos = mpz_scan1(d.get_mpz_t(), 0);
      if (d != (BigInt(1) << twos)) return std::nullopt;
      Dyadic x = dyadic_from_rational(q, static_cast<int>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2)) + 1,
                                      Direction::down);
      return num(static_cast<std::int64_t>(x.bit_length()));
    };
    auto same = [=](const EvalInput& in) { return num(K(in, 0)); };
    t["fix_neg"] = same;
    t["fix_abs"] = same;
    t["flt_neg"] = same;
    t["flt_abs"] = same;
    auto fix_min = [=](const EvalInput& in) { return num(std::min(K(in, 0), K(in, 1))); };
    t["fix_add"] = fix_min;
    t["fix_sub"] = fix_min;
    t["fix_mul"] = [=](const EvalInput& in) { return num(K(in, 0) + K(in, 1)); };
    t["flt_mul"] = [=](const EvalInput& in) { return num(K(in, 0) + K(in, 1)); };
    t["flt_of_fix_bnd"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      const Dyadic& h = I(in, 1).hi();
      if (h.is_zero()) return num(1);
      return num(std::max<std::int64_t>(1, ceil_log2(h) - K(in, 0)));
    };
    t["fix_of_flt_bnd"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      const Dyadic& l = I(in, 1).lo();
      if (l.sign() <= 0) return std::nullopt;
      return num(floor_log2(l) - K(in, 0) + 1);
    };

    t["nzr_of_bnd"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      if (I(in, 0).contains_zero()) return std::nullopt;
      return yes();
    };
    t["nzr_of_abs"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      if (I(in, 0).lo().sign() <= 0) return std::nullopt;
      return yes();
    };
    auto nzr_pass = [=](const EvalInput&) { return yes(); };
    t["nzr_neg"] = nzr_pass;
    t["nzr_abs"] = nzr_pass;
    t["nzr_mul"] = nzr_pass;
    t["nzr_div"] = nzr_pass;

    t["rel_compose"] = [=](const EvalInput& in) {
      const Interval& a = I(in, 0);
      const Interval& b = I(in, 1);
      return rel_interval(add(add(a, b, in.precision), mul(a, b, in.precision), in.precision));
    };
    t["rel_of_bnd"] = [=](const EvalInput& in) { return rel_interval(I(in, 0)); };
    t["bnd_of_rel_err"] = [=](const EvalInput& in) { return bnd(I(in, 0)); };
    auto scale_by_rel = [=](const EvalInput& in) {
      return bnd(mul(I(in, 1), add(one, I(in, 0), in.precision), in.precision));
    };
    t["bnd_of_rel"] = scale_by_rel;
    t["bnd_div_of_rel"] = scale_by_rel;
    t["bnd_of_rel_hull"] = [=](const EvalInput& in) -> std::optional<FactValue> {
      Interval factor = add(one, I(in, 1), in.precision);
      if (factor.contains_zero()) return std::nullopt;
      Interval q = div(I(in, 0), factor, in.precision);
      return bnd(hull(q, Interval::point(Dyadic())));
    };
    return t;
  }();
  return table;
}

}  // namespace

bool has_evaluator(std::string_view rule_id) { return evaluators().count(rule_id) > 0; }

std::optional<FactValue> propagate(const Rule& rule, const EvalInput& in) {
  if (rule.kind == Rule::Kind::rewrite) return *in.premises[0];
  auto it = evaluators().find(rule.id);
  if (it == evaluators().end()) throw std::logic_error("no evaluator for " + rule.id);
  return it->second(in);
}

HintCheck check_hint_wellformed(const Script& s, const RewriteHint& h) {
  IdentityResult r = verify_identity(s.pool, h.lhs, h.rhs);
  HintCheck c;
  c.status = r.status;
  if (r.status == IdentityStatus::identity) return c;
  if (r.status == IdentityStatus::probable_identity) {
    c.message = "only probabilistically checked (normal forms too large)";
    return c;
  }
  if (r.witness.empty()) {
    c.message = "not an identity: " + r.reason;
    return c;
  }
  std::string at;
  for (std::size_t i = 0; i < r.witness.size(); ++i)
    at += (i ? ", " : "") + s.print(r.witness[i].first) + " = " + r.witness[i].second.get_str();
  c.message = "not an identity: at " + at + " the left side is " + r.lhs_value.get_str() +
              " and the right side is " + r.rhs_value.get_str();
  return c;
}

}  // namespace flobound
