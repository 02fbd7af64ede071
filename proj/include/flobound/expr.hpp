#ifndef FLOBOUND_EXPR_HPP
#define FLOBOUND_EXPR_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flobound/formats.hpp"
#include "flobound/numeric.hpp"

namespace flobound {

enum class ExprKind : std::uint8_t {
  variable,
  constant,
  neg,
  abs,
  add,
  sub,
  mul,
  div,
  round,
};

bool is_binary(ExprKind k);
bool is_unary(ExprKind k);  // neg, abs, round

struct ExprId {
  std::uint32_t value = UINT32_MAX;
  bool valid() const { return value != UINT32_MAX; }
  friend auto operator<=>(const ExprId&, const ExprId&) = default;
};

struct ExprNode {
  ExprKind kind;
  ExprId lhs;  // operand of unary nodes
  ExprId rhs;
  // Variable name index, constant index or format index.
  std::uint32_t payload = 0;
  friend bool operator==(const ExprNode&, const ExprNode&) = default;
};

struct RoundingOperator {
  std::string name;
  FpFormat format;
};

// Hash-consed expression DAG: structurally equal expressions share one id.
class ExprPool {
 public:
  ExprId variable(std::string_view name);
  ExprId constant(const Rational& value);
  ExprId unary(ExprKind kind, ExprId a);
  ExprId binary(ExprKind kind, ExprId a, ExprId b);
  ExprId round(std::uint32_t format, ExprId a);

  std::uint32_t add_format(RoundingOperator op);
  const RoundingOperator& format(std::uint32_t index) const { return formats_[index]; }
  std::size_t format_count() const { return formats_.size(); }

  const ExprNode& node(ExprId id) const { return nodes_[id.value]; }
  ExprKind kind(ExprId id) const { return nodes_[id.value].kind; }
  const std::string& variable_name(ExprId id) const;
  const Rational& constant_value(ExprId id) const;
  const FpFormat& round_format(ExprId id) const;
  std::size_t size() const { return nodes_.size(); }

  bool is_subterm(ExprId inner, ExprId outer) const;

 private:
  ExprId intern(const ExprNode& n);

  struct NodeHash {
    std::size_t operator()(const ExprNode& n) const {
      std::size_t h = static_cast<std::size_t>(n.kind);
      h = h * 1000003u ^ n.lhs.value;
      h = h * 1000003u ^ n.rhs.value;
      h = h * 1000003u ^ n.payload;
      return h;
    }
  };

  std::vector<ExprNode> nodes_;
  std::unordered_map<ExprNode, ExprId, NodeHash> index_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> name_index_;
  std::vector<Rational> constants_;
  std::unordered_map<std::string, std::uint32_t> constant_index_;
  std::vector<RoundingOperator> formats_;
};

// Printing. `names` maps expressions to the definition names used in place
// of their structure; the root itself is always expanded when `expand_root`.
using NameMap = std::unordered_map<std::uint32_t, std::string>;
std::string format_constant(const Rational& q);
std::string to_string(const ExprPool& pool, ExprId e, const NameMap* names = nullptr,
                      bool expand_root = false);

}  // namespace flobound

template <>
struct std::hash<flobound::ExprId> {
  std::size_t operator()(const flobound::ExprId& e) const noexcept { return e.value; }
};

#endif
