#include "flobound/identity.hpp"

#include <functional>
#include <random>
#include <set>

namespace flobound {

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  if (sgn(c) != 0) p.terms_.emplace(Monomial{}, c);
  return p;
}

Polynomial Polynomial::variable(std::uint32_t v) {
  Polynomial p;
  p.terms_.emplace(Monomial{{v, 1}}, Rational(1));
  return p;
}

std::uint32_t Polynomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) {
    std::uint32_t t = 0;
    for (const auto& vp : m) t += vp.second;
    d = std::max(d, t);
  }
  return d;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [m, c] : b.terms_) {
    auto [it, inserted] = r.terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) r.terms_.erase(it);
    }
  }
  return r;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial r = a;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

namespace {

Polynomial::Monomial multiply(const Polynomial::Monomial& x, const Polynomial::Monomial& y) {
  Polynomial::Monomial r;
  r.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      r.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      r.push_back(y[j++]);
    } else {
      r.emplace_back(x[i].first, x[i].second + y[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

struct ZeroDivisor : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Rational c = ca * cb;
      auto [it, inserted] = r.terms_.emplace(multiply(ma, mb), c);
      if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) r.terms_.erase(it);
      }
    }
  return r;
}

std::uint32_t Normalizer::atom(ExprId e) {
  auto it = atom_index_.find(e.value);
  if (it != atom_index_.end()) return it->second;
  auto idx = static_cast<std::uint32_t>(atoms_.size());
  atoms_.push_back(e);
  atom_index_.emplace(e.value, idx);
  return idx;
}

void Normalizer::check(const Polynomial& p) const {
  if (p.term_count() > limits_.max_terms || p.degree() > limits_.max_degree)
    throw NormalizationOverflow("rational function exceeds normalization limits");
}

RationalFunction Normalizer::normalize(ExprId e) {
  auto it = memo_.find(e.value);
  if (it != memo_.end()) return it->second;
  const ExprNode& n = pool_.node(e);
  RationalFunction r;
  switch (n.kind) {
    case ExprKind::constant:
      r = {Polynomial::constant(pool_.constant_value(e)), Polynomial::constant(1)};
      break;
    case ExprKind::variable:
    case ExprKind::abs:
    case ExprKind::round:
      r = {Polynomial::variable(atom(e)), Polynomial::constant(1)};
      break;
    case ExprKind::neg: {
      RationalFunction a = normalize(n.lhs);
      r = {-a.num, a.den};
      break;
    }
    default: {
      RationalFunction a = normalize(n.lhs), b = normalize(n.rhs);
      switch (n.kind) {
        case ExprKind::add:
        case ExprKind::sub: {
          Polynomial bn = n.kind == ExprKind::add ? b.num : -b.num;
          if (a.den == b.den)
            r = {a.num + bn, a.den};
          else
            r = {a.num * b.den + bn * a.den, a.den * b.den};
          break;
        }
        case ExprKind::mul: r = {a.num * b.num, a.den * b.den}; break;
        case ExprKind::div:
          if (b.num.is_zero()) throw ZeroDivisor("divisor is identically zero");
          r = {a.num * b.den, a.den * b.num};
          break;
        default: break;
      }
    }
  }
  check(r.num);
  check(r.den);
  memo_.emplace(e.value, r);
  return r;
}

Rational evaluate_exact(const ExprPool& pool, ExprId e,
                        const std::map<std::uint32_t, Rational>& atom_values, bool& defined) {
  std::map<std::uint32_t, Rational> memo;
  std::function<Rational(ExprId)> ev = [&](ExprId x) -> Rational {
    auto av = atom_values.find(x.value);
    if (av != atom_values.end()) return av->second;
    auto m = memo.find(x.value);
    if (m != memo.end()) return m->second;
    const ExprNode& n = pool.node(x);
    Rational r;
    switch (n.kind) {
      case ExprKind::constant: r = pool.constant_value(x); break;
      case ExprKind::variable: r = 0; break;
      case ExprKind::neg: r = -ev(n.lhs); break;
      case ExprKind::abs: r = abs(ev(n.lhs)); break;
      case ExprKind::round: r = ev(n.lhs); break;
      case ExprKind::add: r = ev(n.lhs) + ev(n.rhs); break;
      case ExprKind::sub: r = ev(n.lhs) - ev(n.rhs); break;
      case ExprKind::mul: r = ev(n.lhs) * ev(n.rhs); break;
      case ExprKind::div: {
        Rational d = ev(n.rhs);
        if (sgn(d) == 0) {
          defined = false;
          r = 0;
        } else {
          r = ev(n.lhs) / d;
        }
        break;
      }
    }
    memo.emplace(x.value, r);
    return r;
  };
  return ev(e);
}

std::vector<ExprId> divisors(const ExprPool& pool, ExprId e) {
  std::vector<ExprId> out;
  std::set<std::uint32_t> seen, visited;
  std::function<void(ExprId)> walk = [&](ExprId x) {
    if (!visited.insert(x.value).second) return;
    const ExprNode& n = pool.node(x);
    if (n.lhs.valid()) walk(n.lhs);
    if (n.rhs.valid()) walk(n.rhs);
    if (n.kind == ExprKind::div && pool.kind(n.rhs) != ExprKind::constant &&
        seen.insert(n.rhs.value).second)
      out.push_back(n.rhs);
  };
  walk(e);
  return out;
}

namespace {

void collect_atoms(const ExprPool& pool, ExprId e, std::vector<ExprId>& out,
                   std::set<std::uint32_t>& seen) {
  if (!seen.insert(e.value).second) return;
  const ExprNode& n = pool.node(e);
  switch (n.kind) {
    case ExprKind::variable:
    case ExprKind::abs:
    case ExprKind::round: out.push_back(e); return;
    case ExprKind::constant: return;
    default:
      if (n.lhs.valid()) collect_atoms(pool, n.lhs, out, seen);
      if (n.rhs.valid()) collect_atoms(pool, n.rhs, out, seen);
  }
}

struct PointResult {
  bool defined;
  Rational lhs, rhs;
};

PointResult at_point(const ExprPool& pool, ExprId lhs, ExprId rhs,
                     const std::vector<ExprId>& atoms, const std::vector<Rational>& values) {
  std::map<std::uint32_t, Rational> assign;
  for (std::size_t i = 0; i < atoms.size(); ++i) assign.emplace(atoms[i].value, values[i]);
  PointResult r{true, 0, 0};
  r.lhs = evaluate_exact(pool, lhs, assign, r.defined);
  r.rhs = evaluate_exact(pool, rhs, assign, r.defined);
  return r;
}

IdentityResult witness_result(const std::vector<ExprId>& atoms,
                              const std::vector<Rational>& values, const PointResult& p) {
  IdentityResult r;
  r.status = IdentityStatus::not_identity;
  for (std::size_t i = 0; i < atoms.size(); ++i) r.witness.emplace_back(atoms[i], values[i]);
  r.lhs_value = p.lhs;
  r.rhs_value = p.rhs;
  r.reason = "the two sides differ at the witness point";
  return r;
}

}  // namespace

IdentityResult verify_identity(const ExprPool& pool, ExprId lhs, ExprId rhs,
                               NormalizationLimits limits) {
  std::vector<ExprId> atoms;
  std::set<std::uint32_t> seen;
  collect_atoms(pool, lhs, atoms, seen);
  collect_atoms(pool, rhs, atoms, seen);

  bool exact_known = false, equal = false;
  try {
    Normalizer norm(pool, limits);
    RationalFunction a = norm.normalize(lhs), b = norm.normalize(rhs);
    equal = a.num * b.den == b.num * a.den;
    exact_known = true;
  } catch (const NormalizationOverflow&) {
    exact_known = false;
  } catch (const ZeroDivisor& z) {
    IdentityResult r;
    r.status = IdentityStatus::not_identity;
    r.reason = z.what();
    return r;
  }
  if (exact_known && equal) return {};

  // Small integer points first, first atom varying fastest.
  static const long small[] = {0, 1, -1, 2, -2, 3};
  constexpr std::size_t radix = std::size(small);
  std::vector<Rational> values(atoms.size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < atoms.size() && total <= 4096; ++i) total *= radix;
  if (exact_known) {
    for (std::size_t k = 0; k < std::min<std::size_t>(total, 4096); ++k) {
      std::size_t code = k;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        values[i] = small[code % radix];
        code /= radix;
      }
      PointResult p = at_point(pool, lhs, rhs, atoms, values);
      if (p.defined && p.lhs != p.rhs) return witness_result(atoms, values, p);
    }
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
  int agreeing = 0;
  for (int attempt = 0; attempt < 4096 && (exact_known || agreeing < 32); ++attempt) {
    for (auto& v : values) v = Rational(num(rng), den(rng));
    for (auto& v : values) v.canonicalize();
    PointResult p = at_point(pool, lhs, rhs, atoms, values);
    if (!p.defined) continue;
    if (p.lhs != p.rhs) return witness_result(atoms, values, p);
    ++agreeing;
  }
  IdentityResult r;
  if (exact_known) {
    // Differing rational functions that agree everywhere we looked.
    r.status = IdentityStatus::not_identity;
    r.reason = "normal forms differ";
  } else {
    r.status = IdentityStatus::probable_identity;
    r.reason = "probabilistically checked at 32 random rational points";
  }
  return r;
}

}  // namespace flobound
