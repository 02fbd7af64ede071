#include "flobound/certificate.hpp"

#include <openssl/evp.h>

#include <map>
#include <sstream>
#include <unordered_map>

namespace flobound {

std::string script_digest(std::string_view source) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(source.data(), source.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

const char* kind_token(ExprKind k) {
  switch (k) {
    case ExprKind::variable: return "var";
    case ExprKind::constant: return "const";
    case ExprKind::neg: return "neg";
    case ExprKind::abs: return "abs";
    case ExprKind::add: return "add";
    case ExprKind::sub: return "sub";
    case ExprKind::mul: return "mul";
    case ExprKind::div: return "div";
    case ExprKind::round: return "round";
  }
  return "?";
}

class Emitter {
 public:
  Emitter(const Script& s, const EngineOptions& o) : s_(s), opt_(o) {}

  std::string run(const Report& r) {
    std::vector<std::pair<std::size_t, std::size_t>> goals;
    for (std::size_t i = 0; i < r.goals.size(); ++i)
      if (r.goals[i].status == GoalStatus::proved && r.goals[i].fact)
        goals.emplace_back(i, node(r.goals[i].fact));
    std::ostringstream out;
    out << "flobound-certificate 1\n";
    out << "tool " << FLOBOUND_VERSION << "\n";
    out << "script sha256:" << script_digest(s_.source) << "\n";
    out << "options precision " << opt_.precision << " unconstrained " << (opt_.unconstrained ? 1 : 0)
        << "\n";
    for (std::size_t i = 0; i < s_.pool.format_count(); ++i) {
      const FpFormat& f = s_.pool.format(static_cast<std::uint32_t>(i)).format;
      out << "format f" << i << " " << f.precision << " " << f.min_exponent << " " << f.max_exponent
          << " " << mode_name(f.mode) << "\n";
    }
    for (const std::string& l : expr_lines_) out << l << "\n";
    for (const std::string& l : node_lines_) out << l << "\n";
    for (auto [g, n] : goals) out << "goal " << g << " n" << n << "\n";
    out << "end\n";
    return out.str();
  }

 private:
  std::size_t expr(ExprId e) {
    auto it = expr_index_.find(e.value);
    if (it != expr_index_.end()) return it->second;
    const ExprNode& n = s_.pool.node(e);
    std::string line;
    switch (n.kind) {
      case ExprKind::variable: line = std::string(" var ") + s_.pool.variable_name(e); break;
      case ExprKind::constant: line = " const " + s_.pool.constant_value(e).get_str(); break;
      case ExprKind::round: line = " round f" + std::to_string(n.payload) + " e" + std::to_string(expr(n.lhs)); break;
      case ExprKind::neg:
      case ExprKind::abs: line = std::string(" ") + kind_token(n.kind) + " e" + std::to_string(expr(n.lhs)); break;
      default: {
        std::size_t a = expr(n.lhs);
        std::size_t b = expr(n.rhs);
        line = std::string(" ") + kind_token(n.kind) + " e" + std::to_string(a) + " e" + std::to_string(b);
      }
    }
    std::size_t id = expr_lines_.size();
    expr_lines_.push_back("expr e" + std::to_string(id) + line);
    expr_index_.emplace(e.value, id);
    return id;
  }

  std::size_t node(const FactRef& f) {
    auto done = fact_index_.find(f.get());
    if (done != fact_index_.end()) return done->second;
    std::vector<std::size_t> prem;
    for (const FactRef& p : f->premises) prem.push_back(node(p));

    std::string rule = f->rule;
    if (rule.rfind("hint:", 0) == 0) {
      rule = "rewrite";
    } else if (const Rule* r = RuleTable::builtin().find(rule); r && r->kind == Rule::Kind::rewrite) {
      rule = "rewrite";
    } else if (f->origin == FactOrigin::hypothesis) {
      rule = "hypothesis " + std::to_string(f->hypothesis);
    }
    std::string body = " " + rule + " " + std::string(predicate_name(f->atom.pred));
    if (f->atom.pred != Predicate::absurd) body += " e" + std::to_string(expr(f->atom.expr));
    if (f->atom.pred == Predicate::rel) body += " e" + std::to_string(expr(f->atom.other));
    if (const auto* i = std::get_if<Interval>(&f->value))
      body += " " + i->lo().to_string() + " " + i->hi().to_string();
    else if (const auto* k = std::get_if<std::int64_t>(&f->value))
      body += " " + std::to_string(*k);
    if (!prem.empty()) {
      body += " <-";
      for (std::size_t p : prem) body += " n" + std::to_string(p);
    }
    auto same = line_index_.find(body);
    if (same != line_index_.end()) {
      fact_index_.emplace(f.get(), same->second);
      return same->second;
    }
    std::size_t id = node_lines_.size();
    node_lines_.push_back("node n" + std::to_string(id) + body);
    line_index_.emplace(body, id);
    fact_index_.emplace(f.get(), id);
    return id;
  }

  const Script& s_;
  const EngineOptions& opt_;
  std::vector<std::string> expr_lines_, node_lines_;
  std::unordered_map<std::uint32_t, std::size_t> expr_index_;
  std::unordered_map<const Fact*, std::size_t> fact_index_;
  std::map<std::string, std::size_t> line_index_;
};

}  // namespace

std::string emit_certificate(const Script& script, const Report& report, const EngineOptions& options) {
  return canonical_certificate(Emitter(script, options).run(report), script.source);
}

std::string to_string(const Verdict& v) {
  std::string out;
  switch (v.kind) {
    case VerdictKind::pass: return "certificate: pass";
    case VerdictKind::pass_with_axioms:
      out = "certificate: pass with assumptions";
      for (const std::string& a : v.assumptions) out += "\n  assumed: " + a;
      return out;
    case VerdictKind::hash_mismatch: return "certificate: hash mismatch (" + v.reason + ")";
    case VerdictKind::fail: break;
  }
  return "certificate: fail at line " + std::to_string(v.line) + ": " + v.reason;
}

}  // namespace flobound
