#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "support.hpp"

using namespace flobound;

namespace {

Dyadic d(long m, std::int64_t e = 0) { return Dyadic(BigInt(m), e); }

EngineOptions unconstrained() {
  EngineOptions o;
  o.unconstrained = true;
  return o;
}

// Text of the script without the statement of hint i.
std::string without_hint(const std::string& src, const Hint& h) {
  std::size_t pos = 0;
  for (int line = 1; line < h.loc.line; ++line) pos = src.find('\n', pos) + 1;
  pos += static_cast<std::size_t>(h.loc.column - 1);
  std::size_t end = pos;
  bool comment = false;
  for (; end < src.size(); ++end) {
    char c = src[end];
    if (comment) {
      comment = c != '\n';
      continue;
    }
    if (c == '#') comment = true;
    else if (c == ';') break;
  }
  return src.substr(0, pos) + src.substr(end + 1);
}

}  // namespace

TEST(Engine, Toy) {
  Script s = load_script("{ x + 1 in [2,3] -> x in ? }");
  Report r = prove(s);
  ASSERT_TRUE(r.all_proved());
  EXPECT_EQ(*r.goals[0].enclosure, Interval(d(1), d(2)));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Engine, ExactSubtractionWithoutHints) {
  Script s = load_script(flotest::corpus("exact_sub.g"));
  EXPECT_TRUE(s.hints.empty());
  Report r = prove(s);
  ASSERT_TRUE(r.all_proved());
  EXPECT_EQ(*r.goals[0].enclosure, Interval(Dyadic(), Dyadic()));
  EXPECT_FALSE(r.uses_axioms());
}

TEST(Engine, RoundingErrorOfASum) {
  Script s = load_script(flotest::corpus("rounded_sum.g"));
  Report r = prove(s);
  ASSERT_TRUE(r.all_proved());
  EXPECT_EQ(*r.goals[0].enclosure, Interval(-d(1, -52), d(1, -52)));
  EXPECT_EQ(*r.goals[1].enclosure, Interval(-d(1, -53), d(1, -53)));
}

TEST(Engine, ContradictionProvesEverything) {
  Script s = load_script(flotest::corpus("contradiction.g"));
  Report r = prove(s);
  EXPECT_TRUE(r.contradiction);
  EXPECT_TRUE(r.all_proved());
  for (const GoalResult& g : r.goals) EXPECT_EQ(g.fact->atom.pred, Predicate::absurd);
}

TEST(Engine, SplitTightens) {
  Script plain = load_script("{ z in [-5, 5] -> z * (1 - z) in ? }");
  Script split = load_script(flotest::corpus("split.g"));
  Interval a = *prove(plain).goals[0].enclosure, b = *prove(split).goals[0].enclosure;
  EXPECT_TRUE(b.subset_of(a));
  EXPECT_NE(a, b);
  // Exact range is [-30, 1/4].
  EXPECT_TRUE(b.contains(Rational(-30)) && b.contains(Rational(1, 4)));
}

TEST(EngineProperty, SplitHullContainsEveryCase) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    long lo = static_cast<long>(rng() % 20) - 10, w = 1 + static_cast<long>(rng() % 12);
    long hi = lo + w;
    std::vector<long> cuts;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 3); ++k) cuts.push_back(lo + 1 + static_cast<long>(rng() % std::max(1l, w - 1)));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::string pts;
    for (long c : cuts) pts += (pts.empty() ? "" : ", ") + std::to_string(c);
    auto body = [&](long a, long b) {
      return "{ z in [" + std::to_string(a) + ", " + std::to_string(b) + "] -> z * (3 - z) - z in ? }\n";
    };
    Script whole = load_script(body(lo, hi) + "$ z in (" + pts + ");\n");
    Interval hullv = *prove(whole).goals[0].enclosure;
    std::vector<long> edges{lo};
    for (long c : cuts)
      if (c > lo && c < hi) edges.push_back(c);
    edges.push_back(hi);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      Script part = load_script(body(edges[i], edges[i + 1]));
      Interval v = *prove(part).goals[0].enclosure;
      EXPECT_TRUE(v.subset_of(hullv)) << body(edges[i], edges[i + 1]) << " " << v.to_string() << " vs "
                                      << hullv.to_string();
    }
  }
}

TEST(Engine, InitialSineScriptFails) {
  Script s = load_script(flotest::corpus("sine_initial.g"));
  Report r = prove(s);
  ASSERT_EQ(r.goals.size(), 2u);
  for (const GoalResult& g : r.goals) {
    EXPECT_EQ(g.status, GoalStatus::unproved);
    EXPECT_FALSE(g.enclosure.has_value());
  }
  auto mentions = [&](const std::string& what) {
    for (const std::string& l : r.goals[0].diagnostic)
      if (l == "no enclosure for " + what) return true;
    return false;
  };
  EXPECT_TRUE(mentions("ts"));
  EXPECT_TRUE(mentions("s"));
}

TEST(Engine, MyIsEnclosed) {
  Script s = load_script(flotest::corpus("sine_initial_my.g"));
  Report r = prove(s);
  const GoalResult& my = r.goals.back();
  ASSERT_TRUE(my.enclosure.has_value());
  double hi = my.enclosure->hi().to_double();
  EXPECT_GE(hi, 0.00628);
  EXPECT_LE(hi, 0.00630);
}

TEST(Engine, FullSineScriptNeedsUnconstrainedMode) {
  Script strict = load_script(flotest::corpus("sine_full.g"));
  Report r = prove(strict);
  EXPECT_FALSE(r.all_proved());
  EXPECT_FALSE(r.uses_axioms());

  Script u = load_script(flotest::corpus("sine_full.g"));
  Report ru = prove(u, unconstrained());
  ASSERT_TRUE(ru.all_proved());
  EXPECT_TRUE(ru.uses_axioms());
  EXPECT_FALSE(ru.axioms.empty());
  const Interval& eps = *ru.goals[0].enclosure;
  double bound = std::max(std::abs(eps.lo().to_double()), std::abs(eps.hi().to_double()));
  EXPECT_LE(bound, std::ldexp(1.0, -67));
}

TEST(Engine, FreeVariableDiagnostic) {
  Script s = load_script("{ x in [0, 1] -> y + x in ? }");
  Report r = prove(s);
  ASSERT_EQ(r.goals[0].status, GoalStatus::unproved);
  bool found = false;
  for (const std::string& l : r.goals[0].diagnostic) found = found || l == "no enclosure for free variable y";
  EXPECT_TRUE(found);
}

TEST(Engine, ProvedGoalHasNoDiagnostic) {
  Script s = load_script("{ x in [0, 1] -> x + 1 in [1, 2] }");
  Report r = prove(s);
  ASSERT_TRUE(r.all_proved());
  EXPECT_TRUE(r.goals[0].diagnostic.empty());
}

TEST(Engine, BoundedGoalNotMet) {
  Script s = load_script("{ x in [0, 1] -> x + 1 in [1, 1.5] }");
  Report r = prove(s);
  EXPECT_EQ(r.goals[0].status, GoalStatus::unproved);
  EXPECT_EQ(*r.goals[0].enclosure, Interval(d(1), d(2)));
  EXPECT_EQ(exit_status(r), 2);
}

TEST(Engine, BudgetExhaustion) {
  Script s = load_script(flotest::corpus("sine_full.g"));
  EngineOptions o = unconstrained();
  o.budget = 50;
  Report r = prove(s, o);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.goals[0].status, GoalStatus::resource_limit);
  EXPECT_EQ(exit_status(r), 3);
}

TEST(Engine, NonIdentityHint) {
  std::string text = "{ a in [1, 2] -> a - 1 in ? }\na - 1 -> a + 1;\n";
  Script s = load_script(text);
  Report r = prove(s);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings[0].find("the hint is ignored"), std::string::npos) << r.warnings[0];
  EXPECT_EQ(*r.goals[0].enclosure, Interval(Dyadic(), d(1)));
  EngineOptions strict;
  strict.strict_hints = true;
  Script t = load_script(text);
  EXPECT_THROW(prove(t, strict), HintError);
}

TEST(Engine, UnusedHintWarning) {
  Script s = load_script("{ a in [1, 2] /\\ b in [1, 2] -> a in ? }\na * b -> b * a;\n");
  Report r = prove(s);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0], "Warning: hint 'a * b -> b * a' was not used.");
}

TEST(EngineProperty, Determinism) {
  for (const char* name : {"toy.g", "split.g", "sine_initial_my.g", "sine_full.g"}) {
    EngineOptions o = unconstrained();
    flotest::Proved a = flotest::run_script(flotest::corpus(name), o);
    flotest::Proved b = flotest::run_script(flotest::corpus(name), o);
    EXPECT_EQ(a.text, b.text) << name;
    EXPECT_EQ(a.certificate, b.certificate) << name;
  }
}

TEST(EngineProperty, AddingAHintNeverWidens) {
  const std::string src = flotest::corpus("sine_full.g");
  Script all = load_script(src);
  Report full = prove(all, unconstrained());
  ASSERT_GT(all.hints.size(), 5u);
  for (const Hint& h : all.hints) {
    std::string fewer = without_hint(src, h);
    Script s = load_script(fewer);
    ASSERT_EQ(s.hints.size() + 1, all.hints.size()) << h.text;
    Report r = prove(s, unconstrained());
    for (std::size_t g = 0; g < r.goals.size(); ++g) {
      if (!r.goals[g].enclosure) continue;
      ASSERT_TRUE(full.goals[g].enclosure.has_value()) << h.text;
      EXPECT_TRUE(full.goals[g].enclosure->subset_of(*r.goals[g].enclosure))
          << "removing '" << h.text << "' tightened goal " << g;
    }
  }
}

TEST(EngineProperty, ChainRewritesKeepApproximationsFirst) {
  Script s = load_script(flotest::corpus("sine_full.g"));
  ApproxPairs pairs;
  for (std::uint32_t i = 0; i < s.pool.size(); ++i)
    if (s.pool.kind(ExprId{i}) == ExprKind::round) pairs.add(ExprId{i}, s.pool.node(ExprId{i}).lhs);
  std::vector<ExprId> hyps;
  MatchContext ctx{&pairs, &hyps};
  std::size_t checked = 0;
  std::size_t n = s.pool.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    ExprId target{i};
    for (const RewriteInstance& w : builtin_rewrites(s.pool, target, ctx)) {
      const std::string& id = w.rule->id;
      if (id != "err_chain_left" && id != "err_chain_right") continue;
      // rhs = (x - y) + (y - z) with target x - z; one of the pairs is approximate-first.
      const ExprNode& sum = s.pool.node(w.rhs);
      ExprId l = sum.lhs, r = sum.rhs;
      ExprId x = s.pool.node(l).lhs, y = s.pool.node(l).rhs, z = s.pool.node(r).rhs;
      bool oriented = id == "err_chain_left" ? pairs.contains(x, y) : pairs.contains(y, z);
      EXPECT_TRUE(oriented) << s.print(target) << " -> " << s.print(w.rhs);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Engine, DichotomyProvesABoundPlainIntervalsMiss) {
  Script plain = load_script("{ x in [0, 1] -> x * (1 - x) in [0, 0.26] }");
  EXPECT_FALSE(prove(plain).all_proved());
  Script s = load_script("{ x in [0, 1] -> x * (1 - x) in [0, 0.26] }\nx * (1 - x) $ x;\n");
  Report r = prove(s);
  ASSERT_TRUE(r.all_proved());
  EXPECT_TRUE(r.goals[0].enclosure->contains(Rational(1, 4)));
  flotest::Proved p = flotest::run_script(s.source);
  EXPECT_EQ(check_certificate(p.certificate, p.script.source).kind, VerdictKind::pass);
}

TEST(Engine, HopelessDichotomyStopsAtTheFirstFailedLeaf) {
  Script s = load_script("{ x in [0, 1] -> x * x in [0, 0.25] }\nx * x $ x;\n");
  EngineOptions o;
  o.dichotomy_depth = 40;
  Report r = prove(s, o);
  EXPECT_FALSE(r.all_proved());
  EXPECT_FALSE(r.budget_exhausted);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].rfind("Warning: dichotomy on x stopped at depth 40", 0), 0u) << r.warnings[0];
  EXPECT_EQ(*r.goals[0].enclosure, Interval(Dyadic(), d(1)));
}
