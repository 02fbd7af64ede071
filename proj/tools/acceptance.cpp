// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace flotest;

namespace {

bool all_ok = true;

void line(int criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << criterion << ": " << detail << "\n" << std::flush;
  all_ok = all_ok && ok;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

std::string shell(const std::string& command, int& status) {
  std::string out;
  FILE* p = popen(command.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

bool has(const std::string& text, const std::string& what) { return text.find(what) != std::string::npos; }

double upper(const GoalResult& g) { return g.enclosure ? g.enclosure->hi().to_double() : NAN; }

double magnitude(const GoalResult& g) {
  if (!g.enclosure) return NAN;
  return std::max(std::abs(g.enclosure->lo().to_double()), std::abs(g.enclosure->hi().to_double()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flobound acceptance criteria", "acceptance"};
  std::uint64_t seed = 20240601, tamperings = 1000;
  std::string cli = FLOBOUND_CLI;
  app.add_option("--seed", seed);
  app.add_option("--tamperings", tamperings, "per certificate");
  app.add_option("--cli", cli, "command line tool used for the reproducibility runs");
  CLI11_PARSE(app, argc, argv);

  EngineOptions strict, unconstrained;
  unconstrained.unconstrained = true;

  // 1. Toy script.
  Proved toy = run_script(corpus("toy.g"));
  {
    const GoalResult& g = toy.report.goals.at(0);
    bool exact = g.enclosure && *g.enclosure == Interval(Dyadic(BigInt(1), 0), Dyadic(BigInt(1), 1));
    line(1, toy.report.all_proved() && exact && toy.seconds < 0.1,
         "toy x in [1, 2]: " + std::string(exact ? "exact" : "wrong") + ", " + fmt(toy.seconds) + " s (limit 0.1 s)");
  }

  // 2. Exact subtraction.
  Proved sub = run_script(corpus("exact_sub.g"));
  {
    const GoalResult& g = sub.report.goals.at(0);
    bool zero = g.enclosure && g.enclosure->lo().is_zero() && g.enclosure->hi().is_zero();
    bool ieee32 = sub.script.pool.format_count() == 1 && sub.script.pool.format(0).format.precision == 24;
    line(2, sub.report.all_proved() && zero && ieee32 && sub.script.hints.empty() && sub.seconds < 1,
         "exact subtraction in ieee_32, " + std::to_string(sub.script.hints.size()) + " hints, " +
             fmt(sub.seconds) + " s (limit 1 s)");
  }

  // 3. Initial sine script, then with |My| in ?.
  Proved ini = run_script(corpus("sine_initial.g"));
  Proved my = run_script(corpus("sine_initial_my.g"));
  {
    bool paths = has(ini.text, "no path was found for Epstotal.") && has(ini.text, "no path was found for |r / yh|.");
    double hi = upper(my.report.goals.back());
    line(3, paths && hi >= 0.00628 && hi <= 0.00630,
         std::string(paths ? "no path for Epstotal and |r/yh|" : "missing no-path warnings") +
             ", |My| upper bound " + fmt(hi) + " (range [0.00628, 0.00630])");
  }

  // 4. Full script, unconstrained.
  Proved full = run_script(corpus("sine_full.g"), unconstrained);
  {
    double eps = magnitude(full.report.goals.at(0));
    double ratio = upper(full.report.goals.at(1));
    double lg = std::log2(eps);
    bool ok = full.report.all_proved() && ratio <= 1 && lg >= -67.5 && lg <= -67 && full.seconds <= 60;
    line(4, ok, "|Epstotal| <= 2^" + fmt(lg) + " (range [-67.5, -67]), |r/yh| <= " + fmt(ratio) + ", " +
                    fmt(full.seconds) + " s (limit 60 s)");
  }

  // 5. Certificates and tampering.
  {
    std::mt19937_64 rng(seed);
    bool ok = true;
    std::string detail, missed;
    for (const Proved* p : {&toy, &sub, &ini, &my, &full}) {
      Verdict v = check_certificate(p->certificate, p->script.source);
      bool pass = v.kind == VerdictKind::pass || (p == &full && v.kind == VerdictKind::pass_with_axioms);
      ok = ok && pass;
      std::size_t caught = 0, tried = 0;
      if (p != &ini) {
        for (std::uint64_t i = 0; i < tamperings; ++i, ++tried) {
          std::string t = tamper(p->certificate, rng);
          VerdictKind k = check_certificate(t, p->script.source).kind;
          bool c = k == VerdictKind::fail || k == VerdictKind::hash_mismatch;
          caught += c;
          if (!c && missed.empty()) missed = changed_line(p->certificate, t);
        }
      }
      ok = ok && caught == tried;
      detail += (detail.empty() ? "" : "; ") + std::string(pass ? "pass" : "REJECTED") + ", " +
                std::to_string(caught) + "/" + std::to_string(tried) + " tamperings caught";
    }
    if (!missed.empty()) detail += "\n  accepted tampering: " + missed;
    line(5, ok, "certificates for toy, exact_sub, sine_initial, sine_initial_my, sine_full: " + detail);
  }

  // 6. Property suites at full size.
  {
    std::vector<Property> props;
    props.push_back(interval_inclusion(100000, seed));
    for (bool b64 : {true, false})
      for (RoundingMode m : {RoundingMode::ne, RoundingMode::zr, RoundingMode::up, RoundingMode::dn})
        props.push_back(hardware_rounding(b64, m, 1000000, seed + static_cast<std::uint64_t>(m) + (b64 ? 0 : 16)));
    bool counts = true;
    std::size_t rules = 0;
    for (Property& p : rule_truth(10000, seed)) {
      counts = counts && p.samples >= 10000;
      ++rules;
      props.push_back(std::move(p));
    }
    Property miss = identity_rejects_near_misses();
    counts = counts && miss.samples >= 50;
    props.push_back(miss);
    props.push_back(identity_accepts_hints());
    bool ok = counts;
    std::string failed;
    for (const Property& p : props)
      if (!p.ok()) {
        ok = false;
        failed += "\n  " + p.summary();
      }
    line(6, ok, "inclusion 1e5, rounding 1e6 x 8, " + std::to_string(rules) + " rules x 1e4, " +
                    std::to_string(miss.samples) + " near misses, hint identities" +
                    (counts ? "" : " (sample counts short)") + failed);
  }

  // 7. Reproducibility of the command line tool.
  {
    struct Item {
      const char* script;
      const char* flags;
    };
    const Item items[] = {{"toy.g", ""},          {"exact_sub.g", ""}, {"rounded_sum.g", ""},
                          {"contradiction.g", ""}, {"split.g", ""},     {"sine_initial.g", ""},
                          {"sine_initial_my.g", ""}, {"sine_full.g", ""}, {"sine_full.g", "-Munconstrained "}};
    bool ok = true;
    std::size_t compared = 0;
    std::string cert = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/flobound_accept";
    for (const Item& it : items) {
      std::string out[2], crt[2];
      for (int k = 0; k < 2; ++k) {
        int status = 0;
        std::string path = cert + std::to_string(k) + ".cert";
        std::remove(path.c_str());
        out[k] = shell(cli + " " + it.flags + "--cert " + path + " " + source_dir() + "/corpus/" + it.script, status);
        crt[k] = read_file(path);
        ok = ok && status >= 0 && status <= 3 && !out[k].empty() && !crt[k].empty();
      }
      ok = ok && out[0] == out[1] && crt[0] == crt[1];
      ++compared;
    }
    line(7, ok, std::to_string(compared) + " corpus runs, reports and certificates byte-identical across two runs");
  }
  return all_ok ? 0 : 1;
}
