#ifndef FLOBOUND_FACTS_HPP
#define FLOBOUND_FACTS_HPP

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flobound/expr.hpp"
#include "flobound/identity.hpp"
#include "flobound/syntax.hpp"

namespace flobound {

// BND(e, I): e in I.  FIX(e, k): e is a multiple of 2^k.  FLT(e, p): e is
// m * 2^x with |m| < 2^p.  NZR(e): e != 0.  REL(u, v, I): u = v * (1 + eps)
// for some eps in I, with I above -1.  ABSURD: the hypotheses are
// inconsistent.
enum class Predicate : std::uint8_t { bnd, fix, flt, nzr, rel, absurd };

std::string_view predicate_name(Predicate p);
std::optional<Predicate> parse_predicate(std::string_view name);

struct AtomKey {
  Predicate pred = Predicate::bnd;
  ExprId expr;
  ExprId other;  // REL only
  friend bool operator==(const AtomKey&, const AtomKey&) = default;
};

struct AtomKeyHash {
  std::size_t operator()(const AtomKey& a) const {
    return (static_cast<std::size_t>(a.pred) * 0x9e3779b97f4a7c15ull) ^
           (static_cast<std::size_t>(a.expr.value) << 20) ^ a.other.value;
  }
};

// Interval for BND and REL, an exponent or a precision for FIX and FLT,
// nothing for NZR and ABSURD.
using FactValue = std::variant<std::monostate, Interval, std::int64_t>;

enum class FactOrigin : std::uint8_t {
  derived,     // rule applied to premises
  hypothesis,  // script hypothesis
  assumption,  // case hypothesis of a split
  axiom,       // side condition assumed in unconstrained mode
};

struct Fact;
using FactRef = std::shared_ptr<const Fact>;

struct Fact {
  AtomKey atom;
  FactValue value;
  FactOrigin origin = FactOrigin::derived;
  std::string rule;  // rule id, "hint:<n>", "intersect", "case_split" ...
  std::vector<FactRef> premises;
  std::size_t hypothesis = 0;  // index for FactOrigin::hypothesis
  bool uses_axiom = false;     // transitively
  bool probabilistic = false;  // rests on an identity checked by sampling

  const Interval& interval() const { return std::get<Interval>(value); }
  std::int64_t integer() const { return std::get<std::int64_t>(value); }
};

std::string atom_text(const ExprPool& pool, const AtomKey& a, const NameMap* names = nullptr);

// Approximation relation: (approx, accurate) pairs.
struct ApproxPairs {
  std::vector<std::pair<ExprId, ExprId>> pairs;
  void add(ExprId approx, ExprId accurate);
  bool contains(ExprId approx, ExprId accurate) const;
};

// Rule patterns are written with the expression grammar: identifiers are
// pattern variables, rnd(e) matches any rounding operator, numbers match
// constants of that value.
struct PatternAtom {
  Predicate pred = Predicate::bnd;
  RawExpr expr, other;
};

struct Guard {
  enum class Kind { approx, distinct, constant, hypothesis };
  Kind kind;
  RawExpr a, b;
};

struct Rule {
  enum class Kind { compute, rewrite };
  std::string id;
  Kind kind = Kind::compute;
  PatternAtom conclusion;
  std::vector<PatternAtom> premises;  // compute rules
  RawExpr rhs;                        // rewrite rules
  std::vector<Guard> guards;
  std::string text;
};

class RuleTable {
 public:
  // One rule per line:
  //   compute <id> : <ATOM> [<- <ATOM>, ...] [when <guard>, ...]
  //   rewrite <id> : <expr> -> <expr> [when <guard>, ...]
  // ATOM is PRED(expr) or REL(expr, expr); a guard is approx(x, y),
  // distinct(x, y), constant(x) or hypothesis(x). '#' starts a comment.
  static RuleTable parse(std::string_view text);
  static const RuleTable& builtin();
  static std::string_view builtin_text();

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* find(std::string_view id) const;

 private:
  std::vector<Rule> rules_;
};

using Bindings = std::array<ExprId, 26>;

struct MatchContext {
  const ApproxPairs* approx = nullptr;
  // Hypothesis expressions, with the operand of each |e| hypothesis.
  const std::vector<ExprId>* hypotheses = nullptr;
};

struct RuleMatch {
  Bindings vars;
  std::uint32_t format = UINT32_MAX;
};

std::vector<RuleMatch> match_rule(const Rule& rule, const ExprPool& pool, const AtomKey& target,
                                  const MatchContext& ctx);
ExprId instantiate(const RawExpr& pattern, ExprPool& pool, const RuleMatch& m);
AtomKey instantiate(const PatternAtom& pattern, ExprPool& pool, const RuleMatch& m);

// Rewrite rules of the table that apply to BND(target).
struct RewriteInstance {
  const Rule* rule;
  ExprId rhs;
};
std::vector<RewriteInstance> builtin_rewrites(ExprPool& pool, ExprId target,
                                              const MatchContext& ctx,
                                              const RuleTable& table = RuleTable::builtin());

struct EvalInput {
  const ExprPool& pool;
  const AtomKey& conclusion;
  std::span<const FactValue* const> premises;
  int precision;
};

// Value of the conclusion of a compute rule, or nullopt when the premises
// do not allow it. Rewrite rules pass their first premise through.
std::optional<FactValue> propagate(const Rule& rule, const EvalInput& in);
bool has_evaluator(std::string_view rule_id);

// Side-condition and well-formedness checks for rewrite hints.
struct HintCheck {
  IdentityStatus status = IdentityStatus::identity;
  std::string message;  // empty when the identity holds exactly
};
HintCheck check_hint_wellformed(const Script& s, const RewriteHint& h);

}  // namespace flobound

#endif
