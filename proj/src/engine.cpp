#include "flobound/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace flobound {

bool Report::all_proved() const {
  return std::all_of(goals.begin(), goals.end(),
                     [](const GoalResult& g) { return g.status == GoalStatus::proved; });
}

namespace {

template <class Pred>
bool any_fact(const std::vector<GoalResult>& goals, Pred pred) {
  for (const GoalResult& g : goals)
    if (g.fact && pred(*g.fact)) return true;
  return false;
}

}  // namespace

bool Report::uses_axioms() const {
  return any_fact(goals, [](const Fact& f) { return f.uses_axiom; });
}

bool Report::probabilistic() const {
  return any_fact(goals, [](const Fact& f) { return f.probabilistic; });
}

bool satisfies(const Enclosure& goal, const Interval& value) {
  if (goal.lower && compare(value.lo(), *goal.lower) < 0) return false;
  if (goal.upper && compare(value.hi(), *goal.upper) > 0) return false;
  return true;
}

namespace {

constexpr int significance_shift = 10;

FactRef make_fact(AtomKey atom, FactValue value, std::string rule, std::vector<FactRef> premises,
                  FactOrigin origin = FactOrigin::derived, bool probabilistic = false) {
  auto f = std::make_shared<Fact>();
  f->atom = atom;
  f->value = std::move(value);
  f->origin = origin;
  f->rule = std::move(rule);
  f->uses_axiom = origin == FactOrigin::axiom;
  f->probabilistic = probabilistic;
  for (const FactRef& p : premises) {
    f->uses_axiom = f->uses_axiom || p->uses_axiom;
    f->probabilistic = f->probabilistic || p->probabilistic;
  }
  f->premises = std::move(premises);
  return f;
}

int weakness(const Fact& f) { return (f.uses_axiom ? 2 : 0) + (f.probabilistic ? 1 : 0); }

// The width shrinks by more than 2^-10 of the old width, or an endpoint
// moves by more than 2^-10 of its own magnitude.
bool significant(const Interval& old_value, const Interval& new_value) {
  Dyadic w_old = old_value.hi() - old_value.lo();
  Dyadic w_new = new_value.hi() - new_value.lo();
  if ((w_old - w_new).scaled(significance_shift) > w_old) return true;
  auto moved = [](const Dyadic& a, const Dyadic& b) {
    return abs(a - b).scaled(significance_shift) > max(abs(a), abs(b));
  };
  return moved(old_value.lo(), new_value.lo()) || moved(old_value.hi(), new_value.hi());
}

struct Scheme {
  enum class Kind { compute, rewrite, hint };
  Kind kind = Kind::compute;
  const Rule* rule = nullptr;
  std::size_t hint = 0;
  std::uint32_t conclusion = 0;
  std::vector<std::uint32_t> premises;
  std::size_t side_from = SIZE_MAX;  // premises from here on are NZR side conditions
  bool probabilistic = false;
};

struct AtomInfo {
  AtomKey key;
  std::vector<std::uint32_t> dependents;
  bool expanded = false;
  int depth = INT32_MAX;
};

struct UsableHint {
  std::size_t index;
  const RewriteHint* hint;
  bool probabilistic;
};

class Graph {
 public:
  Graph(Script& s, const EngineOptions& o, const ApproxPairs& pairs,
        const std::vector<ExprId>& hyp_exprs, std::vector<UsableHint> hints)
      : s_(s), opt_(o), pairs_(pairs), hyp_exprs_(hyp_exprs), hints_(std::move(hints)) {
    ctx_.approx = &pairs_;
    ctx_.hypotheses = &hyp_exprs_;
  }

  std::uint32_t atom(const AtomKey& k) {
    auto [it, inserted] = index_.emplace(k, static_cast<std::uint32_t>(atoms_.size()));
    if (inserted) atoms_.push_back({k, {}, false, INT32_MAX});
    return it->second;
  }

  void add_root(const AtomKey& k) {
    std::uint32_t a = atom(k);
    if (atoms_[a].depth > 0) {
      atoms_[a].depth = 0;
      queue_.emplace_front(a, 0);
    }
  }

  void build() {
    while (!queue_.empty()) {
      auto [a, d] = queue_.front();
      queue_.pop_front();
      if (atoms_[a].expanded || d > atoms_[a].depth) continue;
      atoms_[a].expanded = true;
      expand(a, d);
    }
  }

  std::optional<std::uint32_t> find(const AtomKey& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const AtomInfo& info(std::uint32_t a) const { return atoms_[a]; }
  std::size_t atom_count() const { return atoms_.size(); }
  const std::vector<Scheme>& schemes() const { return schemes_; }
  const std::vector<std::uint32_t>& producers(std::uint32_t a) const {
    static const std::vector<std::uint32_t> none;
    return a < producers_.size() ? producers_[a] : none;
  }

 private:
  using SchemeKey = std::tuple<int, const void*, std::size_t, std::uint32_t, std::vector<std::uint32_t>>;

  int cost(const AtomKey& conclusion, const AtomKey& premise) const {
    auto inside = [&](ExprId e) {
      return s_.pool.is_subterm(e, conclusion.expr) ||
             (conclusion.other.valid() && s_.pool.is_subterm(e, conclusion.other));
    };
    bool sub = inside(premise.expr) && (!premise.other.valid() || inside(premise.other));
    return sub ? 0 : 1;
  }

  void visit(std::uint32_t from, int depth, std::uint32_t p, int c) {
    int nd = depth + c;
    AtomInfo& pi = atoms_[p];
    if (pi.expanded || nd >= pi.depth || nd > opt_.rewrite_depth) return;
    pi.depth = nd;
    (void)from;
    if (c == 0)
      queue_.emplace_front(p, nd);
    else
      queue_.emplace_back(p, nd);
  }

  void add_scheme(Scheme sc, int depth, const std::vector<int>& costs) {
    SchemeKey key{static_cast<int>(sc.kind), sc.rule ? static_cast<const void*>(sc.rule) : nullptr,
                  sc.hint, sc.conclusion, sc.premises};
    if (!seen_.insert(key).second) return;
    auto id = static_cast<std::uint32_t>(schemes_.size());
    for (std::size_t i = 0; i < sc.premises.size(); ++i) {
      std::uint32_t p = sc.premises[i];
      auto& deps = atoms_[p].dependents;
      if (deps.empty() || deps.back() != id) deps.push_back(id);
      visit(sc.conclusion, depth, p, costs[i]);
    }
    if (producers_.size() < atoms_.size()) producers_.resize(atoms_.size());
    producers_[sc.conclusion].push_back(id);
    schemes_.push_back(std::move(sc));
  }

  void rewrite_scheme(Scheme sc, std::uint32_t a, int depth, ExprId lhs, ExprId rhs,
                      const std::vector<ExprId>& extra_nonzero, int rhs_cost) {
    AtomKey conclusion = atoms_[a].key;
    std::vector<int> costs;
    sc.conclusion = a;
    sc.premises.push_back(atom({Predicate::bnd, rhs, {}}));
    costs.push_back(rhs_cost);
    sc.side_from = 1;
    std::vector<ExprId> nz = divisors(s_.pool, lhs);
    for (ExprId d : divisors(s_.pool, rhs))
      if (std::find(nz.begin(), nz.end(), d) == nz.end()) nz.push_back(d);
    for (ExprId d : extra_nonzero)
      if (std::find(nz.begin(), nz.end(), d) == nz.end()) nz.push_back(d);
    for (ExprId d : nz) {
      AtomKey k{Predicate::nzr, d, {}};
      sc.premises.push_back(atom(k));
      costs.push_back(cost(conclusion, k));
    }
    add_scheme(std::move(sc), depth, costs);
  }

  void expand(std::uint32_t a, int depth) {
    const AtomKey key = atoms_[a].key;
    for (const Rule& r : RuleTable::builtin().rules()) {
      if (r.kind != Rule::Kind::compute || r.conclusion.pred != key.pred) continue;
      for (const RuleMatch& m : match_rule(r, s_.pool, key, ctx_)) {
        Scheme sc;
        sc.kind = Scheme::Kind::compute;
        sc.rule = &r;
        sc.conclusion = a;
        std::vector<int> costs;
        for (const PatternAtom& p : r.premises) {
          AtomKey pk = instantiate(p, s_.pool, m);
          sc.premises.push_back(atom(pk));
          costs.push_back(cost(key, pk));
        }
        add_scheme(std::move(sc), depth, costs);
      }
    }
    if (key.pred != Predicate::bnd) return;
    for (const UsableHint& h : hints_) {
      if (h.hint->lhs != key.expr) continue;
      Scheme sc;
      sc.kind = Scheme::Kind::hint;
      sc.hint = h.index;
      sc.probabilistic = h.probabilistic;
      rewrite_scheme(std::move(sc), a, depth, h.hint->lhs, h.hint->rhs, h.hint->nonzero, 0);
    }
    for (const RewriteInstance& ri : builtin_rewrites(s_.pool, key.expr, ctx_)) {
      Scheme sc;
      sc.kind = Scheme::Kind::rewrite;
      sc.rule = ri.rule;
      rewrite_scheme(std::move(sc), a, depth, key.expr, ri.rhs, {}, 1);
    }
  }

  Script& s_;
  const EngineOptions& opt_;
  ApproxPairs pairs_;
  std::vector<ExprId> hyp_exprs_;
  std::vector<UsableHint> hints_;
  MatchContext ctx_;
  std::vector<AtomInfo> atoms_;
  std::unordered_map<AtomKey, std::uint32_t, AtomKeyHash> index_;
  std::deque<std::pair<std::uint32_t, int>> queue_;
  std::vector<Scheme> schemes_;
  std::vector<std::vector<std::uint32_t>> producers_;
  std::set<SchemeKey> seen_;
};

struct Store {
  std::vector<FactRef> best;
  FactRef absurd;
  std::deque<std::uint32_t> queue;
  std::vector<char> queued;
};

struct Outcome {
  FactRef absurd;
  std::vector<FactRef> goals;
};

class Solver {
 public:
  Solver(Script& s, const EngineOptions& o, Graph& g, std::vector<std::uint32_t> goal_atoms,
         std::vector<const Hint*> branch_hints)
      : s_(s), opt_(o), g_(g), goal_atoms_(std::move(goal_atoms)),
        branch_hints_(std::move(branch_hints)) {}

  Store fresh() {
    Store st;
    st.best.resize(g_.atom_count());
    st.queued.assign(g_.schemes().size(), 0);
    for (std::uint32_t i = 0; i < g_.schemes().size(); ++i) {
      st.queue.push_back(i);
      st.queued[i] = 1;
    }
    return st;
  }

  // Returns true when the value was stored.
  bool update(Store& st, std::uint32_t a, FactRef f) {
    if (st.absurd) return false;
    FactRef& cur = st.best[a];
    bool better = false;
    if (!cur) {
      better = true;
    } else {
      switch (f->atom.pred) {
        case Predicate::bnd:
        case Predicate::rel: {
          const Interval& ci = cur->interval();
          const Interval& ni = f->interval();
          MaybeInterval x = intersect(ci, ni);
          if (!x) {
            if (f->atom.pred == Predicate::bnd)
              st.absurd = make_fact({Predicate::absurd, {}, {}}, std::monostate{}, "absurd", {cur, f});
            return false;
          }
          if (*x == ci) {
            better = ni == ci && weakness(*f) < weakness(*cur);
            break;
          }
          if (!polishing_ && !significant(ci, *x)) return false;
          if (*x != ni) f = make_fact(f->atom, *x, "intersect", {cur, f});
          better = true;
          break;
        }
        case Predicate::fix:
          better = f->integer() > cur->integer() ||
                   (f->integer() == cur->integer() && weakness(*f) < weakness(*cur));
          break;
        case Predicate::flt:
          better = f->integer() < cur->integer() ||
                   (f->integer() == cur->integer() && weakness(*f) < weakness(*cur));
          break;
        case Predicate::nzr: better = weakness(*f) < weakness(*cur); break;
        case Predicate::absurd: break;
      }
    }
    if (!better) return false;
    cur = std::move(f);
    for (std::uint32_t d : g_.info(a).dependents)
      if (!st.queued[d]) {
        st.queued[d] = 1;
        st.queue.push_back(d);
      }
    return true;
  }

  void saturate(Store& st) {
    run_queue(st, opt_.budget);
    if (exhausted_ || st.absurd) return;
    // Once the significant updates are exhausted, a bounded number of extra
    // firings accept every tightening, so that tiny gains are not lost to
    // the firing order.
    polishing_ = true;
    for (std::uint32_t i = 0; i < g_.schemes().size(); ++i)
      if (!st.queued[i]) {
        st.queued[i] = 1;
        st.queue.push_back(i);
      }
    run_queue(st, std::min<std::uint64_t>(opt_.budget, firings_ + polish_factor * g_.schemes().size()));
    polishing_ = false;
    exhausted_ = exhausted_ && firings_ >= opt_.budget;
    st.queue.clear();
    std::fill(st.queued.begin(), st.queued.end(), 0);
  }

  void run_queue(Store& st, std::uint64_t limit) {
    while (!st.queue.empty() && !st.absurd) {
      if (firings_ >= limit) {
        exhausted_ = true;
        return;
      }
      std::uint32_t id = st.queue.front();
      st.queue.pop_front();
      st.queued[id] = 0;
      fire(st, g_.schemes()[id]);
    }
  }

  Outcome solve(Store st, std::size_t k) {
    saturate(st);
    if (st.absurd) return {st.absurd, {}};
    if (k == branch_hints_.size()) {
      Outcome o;
      for (std::uint32_t a : goal_atoms_) o.goals.push_back(st.best[a]);
      return o;
    }
    const Hint& h = *branch_hints_[k];
    if (const auto* sp = std::get_if<SplitHint>(&h.body)) {
      auto z = g_.find({Predicate::bnd, sp->expr, {}});
      FactRef base = z ? st.best[*z] : nullptr;
      if (!base) {
        note("Warning: no enclosure for " + s_.print(sp->expr) + ", hint '" + h.text +
             "' ignored.");
        return solve(std::move(st), k + 1);
      }
      std::vector<Dyadic> cuts;
      for (const Rational& q : sp->points) {
        Dyadic c = dyadic_from_rational(q, opt_.precision, Direction::down);
        const Interval& bi = base->interval();
        if (bi.lo() < c && c < bi.hi() && (cuts.empty() || cuts.back() < c)) cuts.push_back(c);
      }
      if (cuts.empty()) return solve(std::move(st), k + 1);
      std::vector<Interval> segments;
      Dyadic lo = base->interval().lo();
      for (const Dyadic& c : cuts) {
        segments.emplace_back(lo, c);
        lo = c;
      }
      segments.emplace_back(lo, base->interval().hi());
      return branch(st, *z, base, segments, [&](Store child) { return solve(std::move(child), k + 1); });
    }
    const auto& dh = std::get<DichotomyHint>(h.body);
    return dichotomy(std::move(st), k, dh, 0);
  }

  std::uint64_t firings() const { return firings_; }
  bool exhausted() const { return exhausted_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::map<std::uint32_t, FactRef>& axioms() const { return axioms_; }
  const std::vector<const Enclosure*>& goal_specs() const { return goal_specs_; }
  void set_goal_specs(std::vector<const Enclosure*> g) { goal_specs_ = std::move(g); }

 private:
  void note(const std::string& s) {
    if (std::find(notes_.begin(), notes_.end(), s) == notes_.end()) notes_.push_back(s);
  }

  FactRef axiom(std::uint32_t a) {
    auto it = axioms_.find(a);
    if (it != axioms_.end()) return it->second;
    FactRef f = make_fact(g_.info(a).key, std::monostate{}, "axiom", {}, FactOrigin::axiom);
    axioms_.emplace(a, f);
    return f;
  }

  void fire(Store& st, const Scheme& sc) {
    std::vector<FactRef> prem;
    prem.reserve(sc.premises.size());
    for (std::size_t i = 0; i < sc.premises.size(); ++i) {
      FactRef f = st.best[sc.premises[i]];
      if (!f) {
        if (i < sc.side_from || !opt_.unconstrained) return;
        f = axiom(sc.premises[i]);
      }
      prem.push_back(std::move(f));
    }
    ++firings_;
    const AtomKey& key = g_.info(sc.conclusion).key;
    std::optional<FactValue> v;
    std::string rule;
    if (sc.kind == Scheme::Kind::compute) {
      std::vector<const FactValue*> vals;
      for (const FactRef& f : prem) vals.push_back(&f->value);
      try {
        v = propagate(*sc.rule, EvalInput{s_.pool, key, vals, opt_.precision});
      } catch (const DivisionByZeroRange&) {
        return;
      } catch (const ExponentRangeError&) {
        return;
      } catch (const OverflowError&) {
        return;
      }
      rule = sc.rule->id;
    } else {
      v = prem[0]->value;
      rule = sc.kind == Scheme::Kind::hint ? "hint:" + std::to_string(sc.hint) : sc.rule->id;
    }
    if (!v) return;
    update(st, sc.conclusion,
           make_fact(key, std::move(*v), std::move(rule), std::move(prem), FactOrigin::derived,
                     sc.probabilistic));
  }

  using Continue = std::function<Outcome(Store)>;

  Outcome branch(const Store& st, std::uint32_t z, const FactRef& base,
                 const std::vector<Interval>& segments, const Continue& next) {
    std::vector<FactRef> assume;
    std::vector<Outcome> outs;
    for (const Interval& seg : segments) {
      Store child = st;
      FactRef a = make_fact(g_.info(z).key, seg, "assume", {}, FactOrigin::assumption);
      child.best[z] = a;
      for (std::uint32_t d : g_.info(z).dependents)
        if (!child.queued[d]) {
          child.queued[d] = 1;
          child.queue.push_back(d);
        }
      assume.push_back(a);
      outs.push_back(next(std::move(child)));
    }
    auto case_fact = [&](AtomKey atom, FactValue value, const std::vector<FactRef>& per_case) {
      std::vector<FactRef> prem{base};
      for (std::size_t i = 0; i < segments.size(); ++i) {
        prem.push_back(assume[i]);
        prem.push_back(per_case[i]);
      }
      return make_fact(atom, std::move(value), "case_split", std::move(prem));
    };
    Outcome o;
    bool all_absurd = std::all_of(outs.begin(), outs.end(), [](const Outcome& x) { return x.absurd != nullptr; });
    if (all_absurd) {
      std::vector<FactRef> per;
      for (const Outcome& x : outs) per.push_back(x.absurd);
      o.absurd = case_fact({Predicate::absurd, {}, {}}, std::monostate{}, per);
      return o;
    }
    for (std::size_t gi = 0; gi < goal_atoms_.size(); ++gi) {
      std::vector<FactRef> per;
      std::optional<Interval> h;
      bool complete = true;
      for (const Outcome& x : outs) {
        if (x.absurd) {
          per.push_back(x.absurd);
          continue;
        }
        const FactRef& f = x.goals[gi];
        if (!f) {
          complete = false;
          break;
        }
        per.push_back(f);
        h = h ? hull(*h, f->interval()) : f->interval();
      }
      FactRef mine = st.best[goal_atoms_[gi]];
      if (!complete) {
        o.goals.push_back(mine);
        continue;
      }
      FactRef split = case_fact(g_.info(goal_atoms_[gi]).key, *h, per);
      if (!mine) {
        o.goals.push_back(split);
        continue;
      }
      MaybeInterval x = intersect(mine->interval(), *h);
      if (!x) {
        o.absurd = make_fact({Predicate::absurd, {}, {}}, std::monostate{}, "absurd", {mine, split});
        o.goals.clear();
        return o;
      }
      if (*x == mine->interval())
        o.goals.push_back(mine);
      else if (*x == *h)
        o.goals.push_back(split);
      else
        o.goals.push_back(make_fact(mine->atom, *x, "intersect", {mine, split}));
    }
    return o;
  }

  bool target_done(const Store& st, ExprId target) const {
    bool is_goal = false;
    for (std::size_t i = 0; i < goal_atoms_.size(); ++i) {
      if (goal_specs_[i]->expr != target) continue;
      is_goal = true;
      const FactRef& f = st.best[goal_atoms_[i]];
      if (!f || !satisfies(*goal_specs_[i], f->interval())) return false;
    }
    if (is_goal) return true;
    auto t = g_.find({Predicate::bnd, target, {}});
    return t && st.best[*t];
  }

  Outcome dichotomy(Store st, std::size_t k, const DichotomyHint& dh, int depth) {
    saturate(st);
    if (st.absurd) return {st.absurd, {}};
    if (target_done(st, dh.target)) return solve(std::move(st), k + 1);
    // After one leaf fails at the depth limit the target cannot hold on every
    // leaf, so the remaining cases are not bisected further.
    if (exhausted_ || gave_up_.count(k)) return solve(std::move(st), k + 1);
    auto z = g_.find({Predicate::bnd, dh.variable, {}});
    FactRef base = z ? st.best[*z] : nullptr;
    if (!base) {
      note("Warning: no enclosure for " + s_.print(dh.variable) + ", dichotomy on it is impossible.");
      return solve(std::move(st), k + 1);
    }
    const Interval& bi = base->interval();
    Dyadic mid = round_to_precision((bi.lo() + bi.hi()).scaled(-1), opt_.precision, Direction::down);
    if (depth >= opt_.dichotomy_depth || !(bi.lo() < mid && mid < bi.hi())) {
      note("Warning: dichotomy on " + s_.print(dh.variable) + " stopped at depth " +
           std::to_string(depth) + " on " + s_.print(dh.variable) + " in " + bi.to_string() +
           " without satisfying " + s_.print(dh.target) + ".");
      gave_up_.insert(k);
      return solve(std::move(st), k + 1);
    }
    std::vector<Interval> halves{Interval(bi.lo(), mid), Interval(mid, bi.hi())};
    return branch(st, *z, base, halves,
                  [&](Store child) { return dichotomy(std::move(child), k, dh, depth + 1); });
  }

  Script& s_;
  const EngineOptions& opt_;
  Graph& g_;
  std::vector<std::uint32_t> goal_atoms_;
  std::vector<const Enclosure*> goal_specs_;
  std::vector<const Hint*> branch_hints_;
  std::uint64_t firings_ = 0;
  bool polishing_ = false;
  static constexpr std::uint64_t polish_factor = 8;
  bool exhausted_ = false;
  std::set<std::size_t> gave_up_;  // dichotomy hints that hit the depth limit
  std::vector<std::string> notes_;
  std::map<std::uint32_t, FactRef> axioms_;
};

Interval hypothesis_interval(const Enclosure& h, int precision) {
  return Interval(dyadic_from_rational(*h.lower, precision, Direction::down),
                  dyadic_from_rational(*h.upper, precision, Direction::up));
}

void add_error_pair(const ExprPool& pool, ExprId e, ApproxPairs& pairs) {
  if (pool.kind(e) == ExprKind::abs) e = pool.node(e).lhs;
  const ExprNode& n = pool.node(e);
  if (n.kind == ExprKind::sub) {
    pairs.add(n.lhs, n.rhs);
  } else if (n.kind == ExprKind::div && pool.kind(n.lhs) == ExprKind::sub &&
             pool.node(n.lhs).rhs == n.rhs) {
    pairs.add(pool.node(n.lhs).lhs, n.rhs);
  }
}

void collect_facts(const FactRef& f, std::set<const Fact*>& seen, std::vector<const Fact*>& out) {
  if (!seen.insert(f.get()).second) return;
  for (const FactRef& p : f->premises) collect_facts(p, seen, out);
  out.push_back(f.get());
}

// Subexpressions of e, children first.
void postorder(const ExprPool& pool, ExprId e, std::set<std::uint32_t>& seen, std::vector<ExprId>& out) {
  if (!seen.insert(e.value).second) return;
  const ExprNode& n = pool.node(e);
  if (n.lhs.valid()) postorder(pool, n.lhs, seen, out);
  if (n.rhs.valid()) postorder(pool, n.rhs, seen, out);
  out.push_back(e);
}

std::vector<std::string> explain(const Script& s, const Graph& g, const Store& st, ExprId goal) {
  std::vector<std::string> out;
  std::vector<ExprId> subs;
  std::set<std::uint32_t> seen;
  postorder(s.pool, goal, seen, subs);
  NameMap names = s.names();
  auto bounded = [&](ExprId e) {
    auto a = g.find({Predicate::bnd, e, {}});
    return a && st.best[*a];
  };
  for (ExprId e : subs) {
    if (bounded(e)) continue;
    if (s.pool.kind(e) == ExprKind::variable) {
      out.push_back("no enclosure for free variable " + s.pool.variable_name(e));
    } else if (names.count(e.value) || e == goal) {
      out.push_back("no enclosure for " + s.print(e));
    }
  }
  for (std::size_t i = 0; i < s.hints.size(); ++i) {
    const auto* rh = std::get_if<RewriteHint>(&s.hints[i].body);
    if (!rh || !s.pool.is_subterm(rh->lhs, goal) || bounded(rh->lhs)) continue;
    auto a = g.find({Predicate::bnd, rh->lhs, {}});
    if (!a) continue;
    for (std::uint32_t id : g.producers(*a)) {
      const Scheme& sc = g.schemes()[id];
      if (sc.kind != Scheme::Kind::hint || sc.hint != i) continue;
      std::string missing;
      for (std::uint32_t p : sc.premises)
        if (!st.best[p]) missing += (missing.empty() ? "" : ", ") + atom_text(s.pool, g.info(p).key, &names);
      if (!missing.empty()) out.push_back("hint '" + s.hints[i].text + "' lacks " + missing);
    }
  }
  return out;
}

}  // namespace

Report prove(Script& script, const EngineOptions& options) {
  Report report;
  ExprPool& pool = script.pool;

  ApproxPairs pairs;
  for (std::uint32_t i = 0; i < pool.size(); ++i)
    if (pool.kind(ExprId{i}) == ExprKind::round) pairs.add(ExprId{i}, pool.node(ExprId{i}).lhs);
  std::vector<ExprId> hyp_exprs;
  for (const Enclosure& h : script.hypotheses) {
    add_error_pair(pool, h.expr, pairs);
    hyp_exprs.push_back(h.expr);
    if (pool.kind(h.expr) == ExprKind::abs) hyp_exprs.push_back(pool.node(h.expr).lhs);
  }

  std::vector<UsableHint> usable;
  std::vector<const Hint*> branch_hints;
  for (std::size_t i = 0; i < script.hints.size(); ++i) {
    const Hint& h = script.hints[i];
    if (const auto* rh = std::get_if<RewriteHint>(&h.body)) {
      HintCheck c = check_hint_wellformed(script, *rh);
      if (c.status == IdentityStatus::not_identity) {
        std::string msg = "hint '" + h.text + "' is " + c.message;
        if (options.strict_hints)
          throw HintError(std::to_string(h.loc.line) + ":" + std::to_string(h.loc.column) + ": " + msg);
        report.warnings.push_back("Warning: " + msg + "; the hint is ignored.");
        continue;
      }
      if (c.status == IdentityStatus::probable_identity)
        report.warnings.push_back("Warning: hint '" + h.text + "' is " + c.message + ".");
      usable.push_back({i, rh, c.status == IdentityStatus::probable_identity});
    } else if (const auto* ah = std::get_if<ApproxHint>(&h.body)) {
      pairs.add(ah->approx, ah->accurate);
    } else {
      branch_hints.push_back(&h);
    }
  }

  Graph graph(script, options, pairs, hyp_exprs, usable);
  std::vector<std::uint32_t> goal_atoms;
  std::vector<const Enclosure*> goal_specs;
  for (const Enclosure& g : script.goals) {
    goal_atoms.push_back(graph.atom({Predicate::bnd, g.expr, {}}));
    goal_specs.push_back(&g);
  }
  for (std::size_t i = 0; i < goal_atoms.size(); ++i) graph.add_root(graph.info(goal_atoms[i]).key);
  for (ExprId e : hyp_exprs) graph.add_root({Predicate::bnd, e, {}});
  for (const Hint* h : branch_hints) {
    if (const auto* sp = std::get_if<SplitHint>(&h->body)) {
      graph.add_root({Predicate::bnd, sp->expr, {}});
    } else {
      const auto& dh = std::get<DichotomyHint>(h->body);
      graph.add_root({Predicate::bnd, dh.variable, {}});
      graph.add_root({Predicate::bnd, dh.target, {}});
    }
  }
  graph.build();

  Solver solver(script, options, graph, goal_atoms, branch_hints);
  solver.set_goal_specs(goal_specs);
  Store root = solver.fresh();
  for (std::size_t i = 0; i < script.hypotheses.size(); ++i) {
    const Enclosure& h = script.hypotheses[i];
    auto a = *graph.find({Predicate::bnd, h.expr, {}});
    auto f = std::make_shared<Fact>();
    f->atom = graph.info(a).key;
    f->value = hypothesis_interval(h, options.precision);
    f->origin = FactOrigin::hypothesis;
    f->rule = "hypothesis";
    f->hypothesis = i;
    solver.update(root, a, f);
  }

  solver.saturate(root);
  const Store& base = root;
  Outcome out = solver.solve(root, 0);

  report.firings = solver.firings();
  report.budget_exhausted = solver.exhausted();
  report.contradiction = out.absurd != nullptr;
  for (std::size_t i = 0; i < script.goals.size(); ++i) {
    GoalResult r;
    const Enclosure& g = script.goals[i];
    if (out.absurd) {
      r.status = GoalStatus::proved;
      r.fact = out.absurd;
    } else if (const FactRef& f = out.goals[i]) {
      r.enclosure = f->interval();
      if (satisfies(g, f->interval())) {
        r.status = GoalStatus::proved;
        r.fact = f;
      } else {
        r.diagnostic.push_back("enclosure " + f->interval().to_string() + " does not satisfy the goal");
      }
    }
    if (r.status != GoalStatus::proved) {
      if (report.budget_exhausted) r.status = GoalStatus::resource_limit;
      auto d = explain(script, graph, base, g.expr);
      r.diagnostic.insert(r.diagnostic.end(), d.begin(), d.end());
    }
    report.goals.push_back(std::move(r));
  }

  std::set<const Fact*> seen;
  std::vector<const Fact*> used;
  for (const GoalResult& r : report.goals)
    if (r.fact) collect_facts(r.fact, seen, used);
  NameMap names = script.names();
  std::set<std::size_t> used_hints;
  for (const Fact* f : used) {
    if (f->origin == FactOrigin::axiom) report.axioms.push_back(atom_text(pool, f->atom, &names));
    if (f->rule.rfind("hint:", 0) == 0) used_hints.insert(std::stoul(f->rule.substr(5)));
  }
  for (const std::string& n : solver.notes()) report.warnings.push_back(n);
  for (const UsableHint& h : usable)
    if (!used_hints.count(h.index) && !report.contradiction)
      report.warnings.push_back("Warning: hint '" + script.hints[h.index].text + "' was not used.");
  for (const std::string& a : report.axioms)
    report.warnings.push_back("Warning: assuming " + a + " (unconstrained mode).");
  return report;
}

}  // namespace flobound
