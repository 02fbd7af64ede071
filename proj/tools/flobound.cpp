#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "flobound/certificate.hpp"
#include "flobound/report.hpp"

namespace {

bool slurp(const std::string& path, std::string& out) {
  if (path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace flobound;
  CLI::App app{"Bounds on floating-point expressions with checkable certificates", "flobound"};
  app.set_version_flag("--version", FLOBOUND_VERSION);

  EngineOptions opt;
  std::string script_path, cert_path, mode;
  app.add_option("script", script_path, "script file, or - for standard input");
  app.add_flag("--unconstrained", opt.unconstrained, "assume NZR side conditions that cannot be proved");
  app.add_option("-M", mode, "-Munconstrained is the same as --unconstrained");
  app.add_option("--cert", cert_path, "write a certificate for the proved goals");
  app.add_flag("--strict-hints", opt.strict_hints, "reject rewrite hints that are not identities");
  app.add_option("--precision", opt.precision, "bits of interval endpoints")
      ->envname("TOOL_PRECISION")
      ->check(CLI::Range(24, 1 << 16));
  app.add_option("--budget", opt.budget, "rule firings before giving up")->check(CLI::PositiveNumber);
  app.add_option("--dichotomy-depth", opt.dichotomy_depth, "maximum bisection depth")
      ->check(CLI::NonNegativeNumber);

  std::string check_script, check_cert;
  CLI::App* check = app.add_subcommand("check", "replay a certificate against its script");
  check->add_option("script", check_script, "script file")->required();
  check->add_option("certificate", check_cert, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (check->parsed()) {
    std::string source, cert;
    if (!slurp(check_script, source) || !slurp(check_cert, cert)) {
      std::cerr << "error: cannot read input\n";
      return 1;
    }
    Verdict v = check_certificate(cert, source);
    std::cout << to_string(v) << "\n";
    return v.kind == VerdictKind::fail || v.kind == VerdictKind::hash_mismatch ? 2 : 0;
  }

  if (!mode.empty()) {
    if (mode != "unconstrained") {
      std::cerr << "error: unknown mode -M" << mode << "\n";
      return 1;
    }
    opt.unconstrained = true;
  }
  if (script_path.empty()) {
    std::cerr << app.help();
    return 1;
  }
  std::string source;
  if (!slurp(script_path, source)) {
    std::cerr << "error: cannot read " << script_path << "\n";
    return 1;
  }

  Script script;
  Report report;
  try {
    script = load_script(source);
    report = prove(script, opt);
  } catch (const ScriptError& e) {
    std::cerr << script_path << ":" << e.what() << "\n";
    return 1;
  } catch (const HintError& e) {
    std::cerr << script_path << ": " << e.what() << "\n";
    return 1;
  }
  std::cout << render_report(script, report);
  if (!cert_path.empty()) {
    std::ofstream out(cert_path, std::ios::binary);
    out << emit_certificate(script, report, opt);
    if (!out) {
      std::cerr << "error: cannot write " << cert_path << "\n";
      return 3;
    }
  }
  return exit_status(report);
}
