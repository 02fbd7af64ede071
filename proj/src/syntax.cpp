#include "flobound/syntax.hpp"

#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace flobound {

std::string_view error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::syntax: return "syntax error";
    case ErrorKind::duplicate_definition: return "duplicate definition";
    case ErrorKind::unknown_rounding_operator: return "unknown rounding operator";
    case ErrorKind::unknown_identifier: return "unknown identifier";
    case ErrorKind::recursive_definition: return "recursive definition";
    case ErrorKind::invalid_property: return "invalid property";
  }
  return "error";
}

ScriptError::ScriptError(ErrorKind k, SourceLoc l, const std::string& message)
    : std::runtime_error(std::to_string(l.line) + ":" + std::to_string(l.column) +
                         ": " + std::string(error_kind_name(k)) + ": " + message),
      kind(k),
      loc(l) {}

namespace {

struct Token {
  enum class Type { end, ident, number, punct };
  Type type = Type::end;
  std::string text;
  Rational value;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          advance();
        t.type = Token::Type::ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        t.type = Token::Type::number;
        t.value = number(t.text, t.loc);
      } else {
        static const char* two[] = {"->", "/\\", "<=", ">=", "<>"};
        t.type = Token::Type::punct;
        for (const char* p : two)
          if (text_.substr(pos_, 2) == p) t.text = p;
        if (t.text.empty()) {
          static const std::string single = "@=;,()[]{}<>+-*/|~$?";
          if (single.find(c) == std::string::npos)
            throw ScriptError(ErrorKind::syntax, t.loc,
                              std::string("unexpected character '") + c + "'");
          t.text = std::string(1, c);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string digits() {
    std::string d;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      d += text_[pos_];
      advance();
    }
    return d;
  }

  bool exponent_follows(std::size_t at) const {
    if (at < text_.size() && (text_[at] == '+' || text_[at] == '-')) ++at;
    return at < text_.size() && std::isdigit(static_cast<unsigned char>(text_[at]));
  }

  long signed_exponent(const SourceLoc& loc) {
    bool negative = false;
    if (text_[pos_] == '+' || text_[pos_] == '-') {
      negative = text_[pos_] == '-';
      advance();
    }
    std::string d = digits();
    if (d.size() > 9) throw ScriptError(ErrorKind::syntax, loc, "exponent too large");
    long e = std::stol(d);
    return negative ? -e : e;
  }

  // Decimal "d.ddde[+-]x" or binary "MbE" (M * 2^E), parsed exactly.
  Rational number(std::string& spelling, const SourceLoc& loc) {
    std::size_t start = pos_;
    std::string int_part = digits(), frac_part;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      frac_part = digits();
    }
    Rational value;
    if (frac_part.empty() && pos_ < text_.size() &&
        (text_[pos_] == 'b' || text_[pos_] == 'B') && exponent_follows(pos_ + 1)) {
      advance();
      long e = signed_exponent(loc);
      value = Rational(BigInt(int_part, 10));
      if (e >= 0)
        mpq_mul_2exp(value.get_mpq_t(), value.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
      else
        mpq_div_2exp(value.get_mpq_t(), value.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    } else {
      long e = 0;
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E') &&
          exponent_follows(pos_ + 1)) {
        advance();
        e = signed_exponent(loc);
      }
      std::string all = int_part + frac_part;
      if (all.empty()) all = "0";
      e -= static_cast<long>(frac_part.size());
      BigInt scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
      value = e >= 0 ? Rational(BigInt(all, 10) * scale) : Rational(BigInt(all, 10), scale);
      value.canonicalize();
    }
    if (pos_ < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      throw ScriptError(ErrorKind::syntax, loc, "malformed number");
    spelling = std::string(text_.substr(start, pos_ - start));
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), toks_(Lexer(text).run()) {}

  std::vector<RawStatement> script() {
    std::vector<RawStatement> out;
    while (peek().type != Token::Type::end) out.push_back(statement());
    return out;
  }

  RawExpr lone_expression() {
    RawExpr e = expr();
    if (peek().type != Token::Type::end) fail("unexpected token after expression");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool is(const char* p, std::size_t k = 0) const {
    return peek(k).type == Token::Type::punct && peek(k).text == p;
  }
  bool is_ident(std::size_t k = 0) const { return peek(k).type == Token::Type::ident; }
  bool is_keyword(const char* w) const { return is_ident() && peek().text == w; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.type == Token::Type::end ? "end of input" : "'" + t.text + "'";
    throw ScriptError(ErrorKind::syntax, t.loc, msg + " near " + near);
  }

  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void expect(const char* p) {
    if (!is(p)) fail(std::string("expected '") + p + "'");
    take();
  }

  std::string ident() {
    if (!is_ident()) fail("expected identifier");
    return take().text;
  }

  std::size_t offset_of(const Token& t) const {
    std::size_t off = 0;
    int line = 1;
    while (line < t.loc.line && off < text_.size())
      if (text_[off++] == '\n') ++line;
    return off + static_cast<std::size_t>(t.loc.column - 1);
  }

  std::string text_between(const Token& first, const Token& last) const {
    std::size_t a = offset_of(first), b = offset_of(last) + last.text.size();
    std::string s(text_.substr(a, b - a));
    std::string out;
    bool space = false, comment = false;
    for (char c : s) {
      if (c == '#') comment = true;
      if (comment) {
        comment = c != '\n';
        space = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
      } else {
        if (space && !out.empty()) out += ' ';
        space = false;
        out += c;
      }
    }
    return out;
  }

  RawStatement statement() {
    if (is("@")) return declaration();
    if (is("{")) return property();
    if (is_ident() && peek(1).type == Token::Type::punct && peek(1).text == "=")
      return definition(false);
    if (is_ident() && is_ident(1) && is("=", 2)) return definition(true);
    return hint();
  }

  RawDeclaration declaration() {
    RawDeclaration d;
    d.loc = take().loc;
    d.name = ident();
    expect("=");
    if (!is_keyword("float")) fail("expected 'float'");
    take();
    expect("<");
    d.format = ident();
    expect(",");
    d.mode = ident();
    expect(">");
    expect(";");
    return d;
  }

  RawDefinition definition(bool rounded) {
    RawDefinition d;
    d.loc = peek().loc;
    d.name = ident();
    if (rounded) d.rounding = ident();
    expect("=");
    d.body = expr();
    expect(";");
    return d;
  }

  RawProperty property() {
    RawProperty p;
    p.loc = take().loc;
    std::vector<RawAtom> first = conjunction();
    if (is("->")) {
      take();
      p.hypotheses = std::move(first);
      p.goals = conjunction();
    } else {
      p.goals = std::move(first);
    }
    expect("}");
    return p;
  }

  std::vector<RawAtom> conjunction() {
    std::vector<RawAtom> out;
    out.push_back(atom());
    while (is("/\\")) {
      take();
      out.push_back(atom());
    }
    return out;
  }

  Rational signed_number() {
    bool negative = false;
    while (is("-") || is("+")) {
      if (take().text == "-") negative = !negative;
    }
    if (peek().type != Token::Type::number) fail("expected number");
    Rational v = take().value;
    return negative ? Rational(-v) : v;
  }

  RawAtom atom() {
    RawAtom a;
    a.loc = peek().loc;
    a.expr = expr();
    if (is_keyword("in")) {
      take();
      if (is("?")) {
        take();
        a.kind = RawAtom::Kind::in_unknown;
        return a;
      }
      expect("[");
      a.lo = signed_number();
      expect(",");
      a.hi = signed_number();
      expect("]");
      a.kind = RawAtom::Kind::in_range;
    } else if (is("<=")) {
      take();
      a.kind = RawAtom::Kind::le;
      a.hi = signed_number();
    } else if (is(">=")) {
      take();
      a.kind = RawAtom::Kind::ge;
      a.lo = signed_number();
    } else if (is("<>")) {
      take();
      a.kind = RawAtom::Kind::nonzero;
      if (signed_number() != 0) fail("only '<> 0' is supported");
    } else {
      fail("expected 'in', '<=', '>=' or '<>'");
    }
    return a;
  }

  RawHint hint() {
    RawHint h;
    const Token& first = peek();
    h.loc = first.loc;
    if (is("$")) {
      take();
      h.kind = RawHint::Kind::split;
      h.lhs = expr();
      if (!is_keyword("in")) fail("expected 'in'");
      take();
      expect("(");
      h.points.push_back(signed_number());
      while (is(",")) {
        take();
        h.points.push_back(signed_number());
      }
      expect(")");
    } else {
      h.lhs = expr();
      if (is("->")) {
        take();
        h.kind = RawHint::Kind::rewrite;
        h.rhs = expr();
        if (is("{")) {
          take();
          h.constraints = conjunction();
          for (const RawAtom& c : h.constraints)
            if (c.kind != RawAtom::Kind::nonzero)
              throw ScriptError(ErrorKind::syntax, c.loc,
                                "hint constraints must have the form 'e <> 0'");
          expect("}");
        }
      } else if (is("~")) {
        take();
        h.kind = RawHint::Kind::approx;
        h.rhs = expr();
      } else if (is("$")) {
        take();
        h.kind = RawHint::Kind::dichotomy;
        h.rhs = expr();
      } else {
        fail("expected '->', '~' or '$'");
      }
    }
    Token last = toks_[pos_ - 1];
    expect(";");
    h.text = text_between(first, last);
    return h;
  }

  RawExpr expr() {
    RawExpr lhs = term();
    while (is("+") || is("-")) {
      Token op = take();
      RawExpr e;
      e.kind = op.text == "+" ? RawExpr::Kind::add : RawExpr::Kind::sub;
      e.loc = op.loc;
      e.args.push_back(std::move(lhs));
      e.args.push_back(term());
      lhs = std::move(e);
    }
    return lhs;
  }

  RawExpr term() {
    RawExpr lhs = factor();
    while (is("*") || is("/")) {
      Token op = take();
      RawExpr e;
      e.kind = op.text == "*" ? RawExpr::Kind::mul : RawExpr::Kind::div;
      e.loc = op.loc;
      e.args.push_back(std::move(lhs));
      e.args.push_back(factor());
      lhs = std::move(e);
    }
    return lhs;
  }

  RawExpr factor() {
    if (is("-")) {
      RawExpr e;
      e.loc = take().loc;
      RawExpr inner = factor();
      if (inner.kind == RawExpr::Kind::number) {
        inner.value = -inner.value;
        inner.loc = e.loc;
        return inner;
      }
      e.kind = RawExpr::Kind::neg;
      e.args.push_back(std::move(inner));
      return e;
    }
    if (is("+")) {
      take();
      return factor();
    }
    return primary();
  }

  RawExpr primary() {
    RawExpr e;
    e.loc = peek().loc;
    if (peek().type == Token::Type::number) {
      e.kind = RawExpr::Kind::number;
      e.value = take().value;
      return e;
    }
    if (is_ident()) {
      e.name = take().text;
      if (is("(")) {
        take();
        e.kind = RawExpr::Kind::call;
        e.args.push_back(expr());
        expect(")");
      } else {
        e.kind = RawExpr::Kind::identifier;
      }
      return e;
    }
    if (is("(")) {
      take();
      RawExpr inner = expr();
      expect(")");
      return inner;
    }
    if (is("|")) {
      take();
      e.kind = RawExpr::Kind::abs;
      e.args.push_back(expr());
      expect("|");
      return e;
    }
    fail("expected expression");
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class Elaborator {
 public:
  explicit Elaborator(Script& s) : s_(s) {}

  void run(const std::vector<RawStatement>& statements) {
    const RawProperty* property = nullptr;
    std::vector<const RawHint*> hints;
    for (const RawStatement& st : statements) {
      if (auto* d = std::get_if<RawDeclaration>(&st)) {
        declare(*d);
      } else if (auto* def = std::get_if<RawDefinition>(&st)) {
        define(*def);
      } else if (auto* p = std::get_if<RawProperty>(&st)) {
        if (property)
          throw ScriptError(ErrorKind::invalid_property, p->loc,
                            "only one property block is allowed");
        property = p;
        for (const RawAtom& a : p->hypotheses) s_.hypotheses.push_back(hypothesis(a));
        for (const RawAtom& a : p->goals) s_.goals.push_back(goal(a));
      } else {
        hints.push_back(&std::get<RawHint>(st));
      }
    }
    if (!property)
      throw ScriptError(ErrorKind::invalid_property, {1, 1}, "missing property block");
    closed_ = true;
    for (const RawHint* h : hints) s_.hints.push_back(hint(*h));
  }

 private:
  void declare(const RawDeclaration& d) {
    if (operators_.count(d.name) || defined_.count(d.name))
      throw ScriptError(ErrorKind::duplicate_definition, d.loc, "'" + d.name + "'");
    auto mode = parse_mode(d.mode);
    if (!mode)
      throw ScriptError(ErrorKind::syntax, d.loc, "unknown rounding direction '" + d.mode + "'");
    auto fmt = FpFormat::named(d.format, *mode);
    if (!fmt)
      throw ScriptError(ErrorKind::syntax, d.loc, "unknown format '" + d.format + "'");
    operators_[d.name] = s_.pool.add_format({d.name, *fmt});
  }

  void define(const RawDefinition& d) {
    if (defined_.count(d.name) || operators_.count(d.name))
      throw ScriptError(ErrorKind::duplicate_definition, d.loc, "'" + d.name + "'");
    if (used_free_.count(d.name))
      throw ScriptError(ErrorKind::recursive_definition, d.loc,
                        "'" + d.name + "' is used before its definition");
    std::optional<std::uint32_t> fmt;
    if (d.rounding) {
      auto it = operators_.find(*d.rounding);
      if (it == operators_.end())
        throw ScriptError(ErrorKind::unknown_rounding_operator, d.loc, "'" + *d.rounding + "'");
      fmt = it->second;
    }
    defining_ = d.name;
    ExprId v = lower(d.body, fmt);
    defining_.clear();
    defined_[d.name] = v;
    s_.definitions.push_back({d.name, v});
  }

  ExprId lower(const RawExpr& e, std::optional<std::uint32_t> fmt) {
    switch (e.kind) {
      case RawExpr::Kind::number: return s_.pool.constant(e.value);
      case RawExpr::Kind::identifier: return name(e);
      case RawExpr::Kind::neg: {
        ExprId a = lower(e.args[0], fmt);
        if (s_.pool.kind(a) == ExprKind::constant)
          return s_.pool.constant(-s_.pool.constant_value(a));
        return s_.pool.unary(ExprKind::neg, a);
      }
      case RawExpr::Kind::abs: return s_.pool.unary(ExprKind::abs, lower(e.args[0], fmt));
      case RawExpr::Kind::call: {
        auto it = operators_.find(e.name);
        if (it == operators_.end())
          throw ScriptError(ErrorKind::unknown_rounding_operator, e.loc,
                            "'" + e.name + "' is not a rounding operator");
        return s_.pool.round(it->second, lower(e.args[0], fmt));
      }
      default: break;
    }
    ExprKind k = e.kind == RawExpr::Kind::add   ? ExprKind::add
                 : e.kind == RawExpr::Kind::sub ? ExprKind::sub
                 : e.kind == RawExpr::Kind::mul ? ExprKind::mul
                                                : ExprKind::div;
    ExprId a = lower(e.args[0], fmt), b = lower(e.args[1], fmt);
    ExprId r = s_.pool.binary(k, a, b);
    return fmt ? s_.pool.round(*fmt, r) : r;
  }

  ExprId name(const RawExpr& e) {
    if (e.name == defining_)
      throw ScriptError(ErrorKind::recursive_definition, e.loc,
                        "'" + e.name + "' refers to itself");
    auto it = defined_.find(e.name);
    if (it != defined_.end()) return it->second;
    if (operators_.count(e.name))
      throw ScriptError(ErrorKind::syntax, e.loc,
                        "rounding operator '" + e.name + "' used as a value");
    if (closed_ && !used_free_.count(e.name))
      throw ScriptError(ErrorKind::unknown_identifier, e.loc, "'" + e.name + "'");
    if (used_free_.insert(e.name).second) s_.free_variables.push_back(e.name);
    return s_.pool.variable(e.name);
  }

  Enclosure hypothesis(const RawAtom& a) {
    Enclosure h{lower(a.expr, std::nullopt), {}, {}, a.loc};
    bool is_abs = a.expr.kind == RawExpr::Kind::abs;
    switch (a.kind) {
      case RawAtom::Kind::in_range:
        if (a.hi < a.lo)
          throw ScriptError(ErrorKind::invalid_property, a.loc, "empty hypothesis interval");
        h.lower = a.lo;
        h.upper = a.hi;
        return h;
      case RawAtom::Kind::le:
        if (!is_abs) break;
        h.lower = Rational(0);
        h.upper = a.hi;
        if (a.hi < 0)
          throw ScriptError(ErrorKind::invalid_property, a.loc, "empty hypothesis interval");
        return h;
      default: break;
    }
    throw ScriptError(ErrorKind::invalid_property, a.loc,
                      "hypotheses must bound both sides ('e in [a, b]' or '|e| <= c')");
  }

  Enclosure goal(const RawAtom& a) {
    Enclosure g{lower(a.expr, std::nullopt), {}, {}, a.loc};
    switch (a.kind) {
      case RawAtom::Kind::in_range:
        if (a.hi < a.lo)
          throw ScriptError(ErrorKind::invalid_property, a.loc, "empty goal interval");
        g.lower = a.lo;
        g.upper = a.hi;
        break;
      case RawAtom::Kind::in_unknown: break;
      case RawAtom::Kind::le: g.upper = a.hi; break;
      case RawAtom::Kind::ge: g.lower = a.lo; break;
      case RawAtom::Kind::nonzero:
        throw ScriptError(ErrorKind::invalid_property, a.loc, "'<> 0' is only allowed in hints");
    }
    return g;
  }

  Hint hint(const RawHint& h) {
    Hint out;
    out.text = h.text;
    out.loc = h.loc;
    switch (h.kind) {
      case RawHint::Kind::rewrite: {
        RewriteHint r{lower(h.lhs, std::nullopt), lower(h.rhs, std::nullopt), {}};
        for (const RawAtom& c : h.constraints) r.nonzero.push_back(lower(c.expr, std::nullopt));
        out.body = r;
        break;
      }
      case RawHint::Kind::approx:
        out.body = ApproxHint{lower(h.lhs, std::nullopt), lower(h.rhs, std::nullopt)};
        break;
      case RawHint::Kind::split:
        out.body = SplitHint{lower(h.lhs, std::nullopt), h.points};
        break;
      case RawHint::Kind::dichotomy:
        out.body = DichotomyHint{lower(h.lhs, std::nullopt), lower(h.rhs, std::nullopt)};
        break;
    }
    return out;
  }

  Script& s_;
  std::unordered_map<std::string, std::uint32_t> operators_;
  std::unordered_map<std::string, ExprId> defined_;
  std::unordered_set<std::string> used_free_;
  std::string defining_;
  bool closed_ = false;
};

}  // namespace

std::vector<RawStatement> parse(std::string_view text) { return Parser(text).script(); }

RawExpr parse_expression(std::string_view text) { return Parser(text).lone_expression(); }

NameMap Script::names() const {
  NameMap m;
  for (const Definition& d : definitions) m.emplace(d.value.value, d.name);
  return m;
}

std::string Script::print(ExprId e) const {
  NameMap m = names();
  return to_string(pool, e, &m);
}

std::optional<ExprId> Script::lookup(std::string_view name) const {
  for (const Definition& d : definitions)
    if (d.name == name) return d.value;
  for (const std::string& v : free_variables)
    if (v == name) {
      // Variables are interned on first use, so the lookup cannot create one.
      for (std::uint32_t i = 0; i < pool.size(); ++i) {
        ExprId id{i};
        if (pool.kind(id) == ExprKind::variable && pool.variable_name(id) == name) return id;
      }
    }
  return std::nullopt;
}

Script elaborate(const std::vector<RawStatement>& statements, std::string source) {
  Script s;
  s.source = std::move(source);
  Elaborator(s).run(statements);
  return s;
}

Script load_script(std::string_view text) { return elaborate(parse(text), std::string(text)); }

std::string enclosure_text(const Script& s, const Enclosure& e) {
  std::string x = s.print(e.expr);
  if (e.lower && e.upper)
    return x + " in [" + format_constant(*e.lower) + ", " + format_constant(*e.upper) + "]";
  if (e.upper) return x + " <= " + format_constant(*e.upper);
  if (e.lower) return x + " >= " + format_constant(*e.lower);
  return x + " in ?";
}

std::string pretty_print(const Script& s) {
  std::string out;
  for (std::size_t i = 0; i < s.pool.format_count(); ++i) {
    const RoundingOperator& op = s.pool.format(static_cast<std::uint32_t>(i));
    out += "@" + op.name + " = " + op.format.to_string() + ";\n";
  }
  NameMap names;
  for (const Definition& d : s.definitions) {
    out += d.name + " = " + to_string(s.pool, d.value, &names, true) + ";\n";
    names.emplace(d.value.value, d.name);
  }
  out += "{ ";
  for (std::size_t i = 0; i < s.hypotheses.size(); ++i) {
    const Enclosure& h = s.hypotheses[i];
    out += (i ? " /\\ " : "") + to_string(s.pool, h.expr, &names) + " in [" +
           format_constant(*h.lower) + ", " + format_constant(*h.upper) + "]";
  }
  if (!s.hypotheses.empty()) out += " -> ";
  for (std::size_t i = 0; i < s.goals.size(); ++i) {
    const Enclosure& g = s.goals[i];
    std::string x = to_string(s.pool, g.expr, &names);
    std::string t;
    if (g.lower && g.upper)
      t = x + " in [" + format_constant(*g.lower) + ", " + format_constant(*g.upper) + "]";
    else if (g.upper)
      t = x + " <= " + format_constant(*g.upper);
    else if (g.lower)
      t = x + " >= " + format_constant(*g.lower);
    else
      t = x + " in ?";
    out += (i ? " /\\ " : "") + t;
  }
  out += " }\n";
  for (const Hint& h : s.hints) {
    auto p = [&](ExprId e) { return to_string(s.pool, e, &names); };
    if (auto* r = std::get_if<RewriteHint>(&h.body)) {
      out += p(r->lhs) + " -> " + p(r->rhs);
      if (!r->nonzero.empty()) {
        out += " {";
        for (std::size_t i = 0; i < r->nonzero.size(); ++i)
          out += (i ? " /\\ " : " ") + p(r->nonzero[i]) + " <> 0";
        out += " }";
      }
    } else if (auto* a = std::get_if<ApproxHint>(&h.body)) {
      out += p(a->approx) + " ~ " + p(a->accurate);
    } else if (auto* sp = std::get_if<SplitHint>(&h.body)) {
      out += "$ " + p(sp->expr) + " in (";
      for (std::size_t i = 0; i < sp->points.size(); ++i)
        out += (i ? ", " : "") + format_constant(sp->points[i]);
      out += ")";
    } else if (auto* d = std::get_if<DichotomyHint>(&h.body)) {
      out += p(d->target) + " $ " + p(d->variable);
    }
    out += ";\n";
  }
  return out;
}

}  // namespace flobound
