#ifndef FLOBOUND_IDENTITY_HPP
#define FLOBOUND_IDENTITY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flobound/expr.hpp"

namespace flobound {

// Multivariate polynomial over the rationals. Monomials are sorted
// (variable, power) lists; variables stand for free variables and for
// subterms treated as opaque (rounding, absolute value).
class Polynomial {
 public:
  using Monomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial variable(std::uint32_t v);

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  std::uint32_t degree() const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::map<Monomial, Rational> terms_;
};

struct NormalizationLimits {
  std::uint32_t max_degree = 48;
  std::size_t max_terms = 20000;
};

struct NormalizationOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerator and denominator of an expression. Throws NormalizationOverflow
// past the limits.
struct RationalFunction {
  Polynomial num, den;
};

class Normalizer {
 public:
  Normalizer(const ExprPool& pool, NormalizationLimits limits = {})
      : pool_(pool), limits_(limits) {}
  RationalFunction normalize(ExprId e);
  // Opaque subterms in order of first appearance.
  const std::vector<ExprId>& atoms() const { return atoms_; }

 private:
  std::uint32_t atom(ExprId e);
  void check(const Polynomial& p) const;

  const ExprPool& pool_;
  NormalizationLimits limits_;
  std::map<std::uint32_t, RationalFunction> memo_;
  std::map<std::uint32_t, std::uint32_t> atom_index_;
  std::vector<ExprId> atoms_;
};

enum class IdentityStatus { identity, not_identity, probable_identity };

struct IdentityResult {
  IdentityStatus status = IdentityStatus::identity;
  // For not_identity: values of the opaque atoms where both sides are
  // defined and differ.
  std::vector<std::pair<ExprId, Rational>> witness;
  Rational lhs_value, rhs_value;
  std::string reason;
};

// lhs == rhs wherever every divisor of both sides is nonzero. Past the
// normalization limits the sides are compared at 32 random rational points.
IdentityResult verify_identity(const ExprPool& pool, ExprId lhs, ExprId rhs,
                               NormalizationLimits limits = {});

// Exact value with x / 0 = 0; `defined` is cleared when a divisor vanishes.
Rational evaluate_exact(const ExprPool& pool, ExprId e,
                        const std::map<std::uint32_t, Rational>& atom_values, bool& defined);

// Distinct non-constant divisors of e, in first-appearance order.
std::vector<ExprId> divisors(const ExprPool& pool, ExprId e);

}  // namespace flobound

#endif
