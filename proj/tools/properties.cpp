// Standalone property suites. One line per suite, exit status 1 if any fails.

#include <CLI11.hpp>

#include <iostream>

#include "support.hpp"

int main(int argc, char** argv) {
  CLI::App app{"flobound property suites", "properties"};
  std::uint64_t seed = 20240601, inclusion = 100000, rounding = 1000000, rules = 10000;
  std::string only;
  app.add_option("--seed", seed);
  app.add_option("--inclusion-samples", inclusion);
  app.add_option("--rounding-samples", rounding, "per format and rounding mode");
  app.add_option("--rule-samples", rules, "per rule");
  app.add_option("--only", only, "inclusion, rounding, rules or identity");
  CLI11_PARSE(app, argc, argv);

  using namespace flotest;
  bool ok = true;
  auto show = [&](const Property& p) {
    std::cout << (p.ok() ? "PASS " : "FAIL ") << p.summary() << "\n" << std::flush;
    ok = ok && p.ok();
  };
  if (only.empty() || only == "inclusion") show(interval_inclusion(inclusion, seed));
  if (only.empty() || only == "rounding")
    for (bool b64 : {true, false})
      for (RoundingMode m : {RoundingMode::ne, RoundingMode::zr, RoundingMode::up, RoundingMode::dn})
        show(hardware_rounding(b64, m, rounding, seed + static_cast<std::uint64_t>(m) + (b64 ? 0 : 16)));
  if (only.empty() || only == "rules") {
    for (const Property& p : rule_truth(rules, seed)) {
      show(p);
      if (p.samples < rules) {
        std::cout << "FAIL " << p.name << ": only " << p.samples << " applicable instances\n";
        ok = false;
      }
    }
  }
  if (only.empty() || only == "identity") {
    show(identity_rejects_near_misses());
    show(identity_accepts_hints());
  }
  return ok ? 0 : 1;
}
