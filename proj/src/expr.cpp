#include "flobound/expr.hpp"

#include <stdexcept>

namespace flobound {

bool is_binary(ExprKind k) {
  return k == ExprKind::add || k == ExprKind::sub || k == ExprKind::mul ||
         k == ExprKind::div;
}

bool is_unary(ExprKind k) {
  return k == ExprKind::neg || k == ExprKind::abs || k == ExprKind::round;
}

ExprId ExprPool::intern(const ExprNode& n) {
  auto it = index_.find(n);
  if (it != index_.end()) return it->second;
  ExprId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(n);
  index_.emplace(n, id);
  return id;
}

ExprId ExprPool::variable(std::string_view name) {
  std::string key(name);
  auto it = name_index_.find(key);
  std::uint32_t idx;
  if (it == name_index_.end()) {
    idx = static_cast<std::uint32_t>(names_.size());
    names_.push_back(key);
    name_index_.emplace(key, idx);
  } else {
    idx = it->second;
  }
  return intern({ExprKind::variable, {}, {}, idx});
}

ExprId ExprPool::constant(const Rational& value) {
  std::string key = value.get_str();
  auto it = constant_index_.find(key);
  std::uint32_t idx;
  if (it == constant_index_.end()) {
    idx = static_cast<std::uint32_t>(constants_.size());
    constants_.push_back(value);
    constant_index_.emplace(key, idx);
  } else {
    idx = it->second;
  }
  return intern({ExprKind::constant, {}, {}, idx});
}

ExprId ExprPool::unary(ExprKind kind, ExprId a) {
  if (kind != ExprKind::neg && kind != ExprKind::abs)
    throw std::logic_error("not a unary kind");
  return intern({kind, a, {}, 0});
}

ExprId ExprPool::binary(ExprKind kind, ExprId a, ExprId b) {
  if (!is_binary(kind)) throw std::logic_error("not a binary kind");
  return intern({kind, a, b, 0});
}

ExprId ExprPool::round(std::uint32_t format, ExprId a) {
  if (format >= formats_.size()) throw std::logic_error("unknown format index");
  return intern({ExprKind::round, a, {}, format});
}

std::uint32_t ExprPool::add_format(RoundingOperator op) {
  for (std::uint32_t i = 0; i < formats_.size(); ++i)
    if (formats_[i].name == op.name && formats_[i].format == op.format) return i;
  formats_.push_back(std::move(op));
  return static_cast<std::uint32_t>(formats_.size() - 1);
}

const std::string& ExprPool::variable_name(ExprId id) const {
  return names_.at(node(id).payload);
}

const Rational& ExprPool::constant_value(ExprId id) const {
  return constants_.at(node(id).payload);
}

const FpFormat& ExprPool::round_format(ExprId id) const {
  return formats_.at(node(id).payload).format;
}

bool ExprPool::is_subterm(ExprId inner, ExprId outer) const {
  // Children always have smaller ids than their parents.
  if (inner.value > outer.value) return false;
  std::vector<ExprId> stack{outer};
  std::vector<bool> seen(outer.value + 1, false);
  while (!stack.empty()) {
    ExprId e = stack.back();
    stack.pop_back();
    if (e == inner) return true;
    if (e.value < inner.value || seen[e.value]) continue;
    seen[e.value] = true;
    const ExprNode& n = node(e);
    if (n.lhs.valid()) stack.push_back(n.lhs);
    if (n.rhs.valid()) stack.push_back(n.rhs);
  }
  return false;
}

std::string format_constant(const Rational& q) {
  const BigInt& num = q.get_num();
  BigInt den = q.get_den();
  if (den == 1) return num.get_str();
  mp_bitcnt_t twos = mpz_scan1(den.get_mpz_t(), 0);
  BigInt rest = den >> twos;
  if (rest == 1) return num.get_str() + "b-" + std::to_string(twos);
  unsigned long fives = 0;
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return "(" + num.get_str() + " / " + den.get_str() + ")";
  unsigned long k = std::max<unsigned long>(twos, fives);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
  BigInt m = num * (scale / den);
  bool negative = sgn(m) < 0;
  std::string digits = (negative ? BigInt(-m) : m).get_str();
  long exp10 = static_cast<long>(digits.size()) - 1 - static_cast<long>(k);
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = negative ? "-" : "";
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

namespace {

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::add:
    case ExprKind::sub: return 1;
    case ExprKind::mul:
    case ExprKind::div: return 2;
    default: return 3;
  }
}

const char* op_text(ExprKind k) {
  switch (k) {
    case ExprKind::add: return " + ";
    case ExprKind::sub: return " - ";
    case ExprKind::mul: return " * ";
    case ExprKind::div: return " / ";
    default: return "?";
  }
}

struct Printer {
  const ExprPool& pool;
  const NameMap* names;

  // Precedence of the printed form of e: names, calls and atoms are tight.
  int printed_precedence(ExprId e, bool expand) const {
    if (!expand && names && names->count(e.value)) return 3;
    ExprKind k = pool.kind(e);
    if (k == ExprKind::constant && sgn(pool.constant_value(e)) < 0) return 2;
    return precedence(k);
  }

  void print(std::string& out, ExprId e, bool expand) const {
    if (!expand && names) {
      auto it = names->find(e.value);
      if (it != names->end()) {
        out += it->second;
        return;
      }
    }
    const ExprNode& n = pool.node(e);
    switch (n.kind) {
      case ExprKind::variable: out += pool.variable_name(e); return;
      case ExprKind::constant: out += format_constant(pool.constant_value(e)); return;
      case ExprKind::neg:
        out += "-";
        if (printed_precedence(n.lhs, false) < 3) {
          out += "(";
          print(out, n.lhs, false);
          out += ")";
        } else {
          print(out, n.lhs, false);
        }
        return;
      case ExprKind::abs:
        out += "|";
        print(out, n.lhs, false);
        out += "|";
        return;
      case ExprKind::round:
        out += pool.format(n.payload).name;
        out += "(";
        print(out, n.lhs, false);
        out += ")";
        return;
      default: break;
    }
    int p = precedence(n.kind);
    bool lparen = printed_precedence(n.lhs, false) < p;
    bool rparen = printed_precedence(n.rhs, false) <= p;
    if (lparen) out += "(";
    print(out, n.lhs, false);
    if (lparen) out += ")";
    out += op_text(n.kind);
    if (rparen) out += "(";
    print(out, n.rhs, false);
    if (rparen) out += ")";
  }
};

}  // namespace

std::string to_string(const ExprPool& pool, ExprId e, const NameMap* names,
                      bool expand_root) {
  std::string out;
  Printer{pool, names}.print(out, e, expand_root);
  return out;
}

}  // namespace flobound
