#ifndef FLOBOUND_SYNTAX_HPP
#define FLOBOUND_SYNTAX_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flobound/expr.hpp"
#include "flobound/numeric.hpp"

namespace flobound {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class ErrorKind {
  syntax,
  duplicate_definition,
  unknown_rounding_operator,
  unknown_identifier,
  recursive_definition,
  invalid_property,
};

std::string_view error_kind_name(ErrorKind k);

struct ScriptError : std::runtime_error {
  ScriptError(ErrorKind kind, SourceLoc loc, const std::string& message);
  ErrorKind kind;
  SourceLoc loc;
};

// Parse tree as written, before names are resolved.
struct RawExpr {
  enum class Kind { identifier, number, neg, abs, add, sub, mul, div, call };
  Kind kind = Kind::number;
  std::string name;  // identifier, or callee of a call
  Rational value;
  std::vector<RawExpr> args;
  SourceLoc loc;
};

struct RawAtom {
  enum class Kind { in_range, in_unknown, le, ge, nonzero };
  Kind kind = Kind::in_range;
  RawExpr expr;
  Rational lo, hi;
  SourceLoc loc;
};

struct RawDeclaration {
  std::string name, format, mode;
  SourceLoc loc;
};

struct RawDefinition {
  std::string name;
  std::optional<std::string> rounding;
  RawExpr body;
  SourceLoc loc;
};

struct RawProperty {
  std::vector<RawAtom> hypotheses, goals;
  SourceLoc loc;
};

struct RawHint {
  enum class Kind { rewrite, approx, split, dichotomy };
  Kind kind = Kind::rewrite;
  RawExpr lhs, rhs;
  std::vector<RawAtom> constraints;
  std::vector<Rational> points;
  std::string text;
  SourceLoc loc;
};

using RawStatement = std::variant<RawDeclaration, RawDefinition, RawProperty, RawHint>;

std::vector<RawStatement> parse(std::string_view text);
RawExpr parse_expression(std::string_view text);

struct Definition {
  std::string name;
  ExprId value;
};

// lower <= expr <= upper; a missing side is unconstrained. A goal with no
// bound at all asks for an enclosure.
struct Enclosure {
  ExprId expr;
  std::optional<Rational> lower, upper;
  SourceLoc loc;
};

struct RewriteHint {
  ExprId lhs, rhs;
  std::vector<ExprId> nonzero;
};
struct ApproxHint {
  ExprId approx, accurate;
};
struct SplitHint {
  ExprId expr;
  std::vector<Rational> points;
};
struct DichotomyHint {
  ExprId target, variable;
};

struct Hint {
  std::variant<RewriteHint, ApproxHint, SplitHint, DichotomyHint> body;
  std::string text;
  SourceLoc loc;
};

struct Script {
  ExprPool pool;
  std::vector<Definition> definitions;
  std::vector<std::string> free_variables;
  std::vector<Enclosure> hypotheses;
  std::vector<Enclosure> goals;
  std::vector<Hint> hints;
  std::string source;

  // Definition names, first definition wins.
  NameMap names() const;
  std::string print(ExprId e) const;
  std::optional<ExprId> lookup(std::string_view name) const;
};

Script elaborate(const std::vector<RawStatement>& statements, std::string source = {});
Script load_script(std::string_view text);

std::string pretty_print(const Script& s);
std::string enclosure_text(const Script& s, const Enclosure& e);

}  // namespace flobound

#endif
