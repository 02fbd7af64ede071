#ifndef FLOBOUND_ENGINE_HPP
#define FLOBOUND_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flobound/facts.hpp"
#include "flobound/syntax.hpp"

namespace flobound {

struct EngineOptions {
  bool unconstrained = false;  // assume underivable NZR side conditions
  int precision = 80;          // working precision of interval endpoints
  std::uint64_t budget = 1'000'000;  // rule firings, all subproblems together
  bool strict_hints = false;   // a rewrite hint that is not an identity is an error
  int dichotomy_depth = 32;
  int rewrite_depth = 24;      // rewrite steps between a root atom and any atom it needs
};

struct HintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GoalStatus { proved, unproved, resource_limit };

struct GoalResult {
  GoalStatus status = GoalStatus::unproved;
  FactRef fact;  // BND fact on the goal expression, or ABSURD
  std::optional<Interval> enclosure;
  std::vector<std::string> diagnostic;  // for unproved goals
};

struct Report {
  std::vector<std::string> warnings;  // printed before the results
  std::vector<GoalResult> goals;      // parallel to Script::goals
  bool contradiction = false;
  std::vector<std::string> axioms;    // NZR side conditions assumed
  std::uint64_t firings = 0;
  bool budget_exhausted = false;

  bool all_proved() const;
  bool uses_axioms() const;
  bool probabilistic() const;
};

// Does the interval satisfy the goal's bounds?
bool satisfies(const Enclosure& goal, const Interval& value);

Report prove(Script& script, const EngineOptions& options = {});

}  // namespace flobound

#endif
