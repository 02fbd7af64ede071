#ifndef FLOBOUND_CERTIFICATE_HPP
#define FLOBOUND_CERTIFICATE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "flobound/engine.hpp"

namespace flobound {

// Text format, one record per line:
//
//   flobound-certificate 1
//   tool <version>
//   script sha256:<hex digest of the script bytes>
//   options precision <bits> unconstrained <0|1>
//   format f<i> <precision> <min exponent> <max exponent> <mode>
//   expr e<i> var <name> | const <p/q> | neg e<j> | abs e<j> | add e<j> e<k> | ...
//                | round f<i> e<j>
//   node n<i> <rule> [<hypothesis index>] <PRED> e<j> [e<k>] [<values>] [<- n<a> n<b> ...]
//   goal <goal index> n<i>
//   end
//
// Numbers are dyadics written <mantissa>b<exponent>. Nodes and expressions
// are listed in depth-first post-order from the goals, without duplicates.
std::string emit_certificate(const Script& script, const Report& report,
                             const EngineOptions& options);

// Applies the checker's canonical premise rule: every premise is the
// lowest-numbered node on its atom that justifies the conclusion.
// emit_certificate already returns canonical text.
std::string canonical_certificate(std::string_view certificate, std::string_view script_source);

std::string script_digest(std::string_view source);

enum class VerdictKind { pass, pass_with_axioms, fail, hash_mismatch };

struct Verdict {
  VerdictKind kind = VerdictKind::fail;
  std::size_t line = 0;  // 1-based certificate line of the failure
  std::string reason;
  std::vector<std::string> assumptions;  // axioms and sampled identities
};

// Replays every node with exact arithmetic. Shares only the numeric core
// and the script parser with the prover.
Verdict check_certificate(std::string_view certificate, std::string_view script_source);

std::string to_string(const Verdict& v);

}  // namespace flobound

#endif
