#ifndef FLOBOUND_TESTS_SUPPORT_HPP
#define FLOBOUND_TESTS_SUPPORT_HPP

// Oracles and property suites shared by the unit tests and the acceptance
// runner. Rounding oracles come from MPFR and from the FPU, never from the
// library under test.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flobound/certificate.hpp"
#include "flobound/formats.hpp"
#include "flobound/report.hpp"

namespace flotest {

using namespace flobound;

std::string source_dir();
std::string read_file(const std::string& path);
std::string corpus(const std::string& name);  // contents of corpus/<name>

// Correct rounding of an exact rational by MPFR, with the format's minimum
// exponent and no maximum. nullopt when the result is at least 2^(emax+1).
std::optional<Dyadic> oracle_round(const FpFormat& f, const Rational& x);

// Exact value of e with rounding through oracle_round and x / 0 = 0.
// Variables are looked up by name. nullopt on overflow.
std::optional<Rational> oracle_eval(const ExprPool& pool, ExprId e,
                                    const std::map<std::string, Rational>& vars);

Dyadic to_dyadic(double x);

struct Property {
  std::string name;
  std::uint64_t samples = 0;     // checked instances
  std::uint64_t violations = 0;
  std::uint64_t skipped = 0;     // drawn but not applicable
  std::string first_failure;
  bool ok() const { return violations == 0; }
  std::string summary() const;
};

// Interval operations at random precisions contain the exact result for
// random rational points of random operand intervals.
Property interval_inclusion(std::uint64_t samples, std::uint64_t seed);

// round_value against the FPU on +, -, *, / and, for binary32, narrowing.
// Quotients are passed as 200-bit truncations with a sticky bit.
Property hardware_rounding(bool binary64, RoundingMode mode, std::uint64_t samples,
                           std::uint64_t seed);

// Every rule of the built-in table, instantiated on random points and
// random sound premises, yields a true conclusion. One entry per rule;
// `samples` counts applicable instances.
std::vector<Property> rule_truth(std::uint64_t per_rule, std::uint64_t seed,
                                 const RuleTable& table = RuleTable::builtin());

// Fixed near-miss pairs that are not identities.
std::vector<std::pair<std::string, std::string>> near_misses();
Property identity_rejects_near_misses();
// Generic hint shapes, the Eps4 derivation steps and every rewrite hint of
// the full sine script.
Property identity_accepts_hints();

// Parse, prove, render and emit a certificate, like the command line tool.
struct Proved {
  Script script;
  Report report;
  std::string text;
  std::string certificate;
  double seconds = 0;
};
Proved run_script(const std::string& source, const EngineOptions& options = {});

// Single-field mutations of a certificate body, one per call.
std::string tamper(const std::string& certificate, std::mt19937_64& rng);
// "old -> new" for the first line that differs.
std::string changed_line(const std::string& a, const std::string& b);

}  // namespace flotest

#endif
