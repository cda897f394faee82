// Command-line front end. Talks to the engine exclusively through the C API.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capcalc/capcalc.h"

namespace {

struct OwnedStr {
  char* p = nullptr;
  ~OwnedStr() { capcalc_string_free(p); }
  char** slot() { return &p; }
  std::string str() const { return p ? p : ""; }
};

struct OwnedSource {
  capcalc_source* p = nullptr;
  ~OwnedSource() { capcalc_source_free(p); }
};

int exit_code(capcalc_status st) {
  switch (st) {
    case CAPCALC_OK:
      return 0;
    case CAPCALC_ERR_MISSING_BINDING:
      return 2;
    case CAPCALC_ERR_USAGE:
      return 64;
    default:
      return 1;
  }
}

int report(capcalc_status st, const OwnedStr& err) {
  std::cerr << "error: " << (err.p ? err.p : "unknown failure") << "\n";
  return exit_code(st);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

// --bind entries are "cap=channel"
bool split_bindings(const std::vector<std::string>& binds, std::vector<std::string>& names,
                    std::vector<std::string>& chans) {
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == b.size()) return false;
    names.push_back(b.substr(0, eq));
    chans.push_back(b.substr(eq + 1));
  }
  return true;
}

std::vector<const char*> c_view(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

int load_source(const std::string& path, OwnedSource& src) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 1;
  }
  OwnedStr err;
  capcalc_status st = capcalc_source_parse(text.c_str(), &src.p, err.slot());
  if (st != CAPCALC_OK) return report(st, err);
  return 0;
}

uint64_t env_seed() {
  if (const char* env = std::getenv("CAPCALC_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 7;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capability-calculus tool"};
  app.require_subcommand(1);

  std::string file;
  std::vector<std::string> binds;
  bool no_strict = false;

  auto* check = app.add_subcommand("check", "parse and typecheck a program");
  check->add_option("file", file, "program file")->required();

  auto* run = app.add_subcommand("run", "typecheck and evaluate a program");
  run->add_option("file", file, "program file")->required();
  run->add_option("--bind", binds, "capability binding cap=channel");
  run->add_flag("--no-strict", no_strict, "allow box bodies to produce output");

  auto* weigh = app.add_subcommand("weigh", "report value and effect weights");
  weigh->add_option("file", file, "program file")->required();
  weigh->add_option("--bind", binds, "capability binding cap=channel");

  auto* embed = app.add_subcommand("embed", "embed a pure term into the calculus");
  embed->add_option("file", file, "pure term file")->required();

  auto* unembed = app.add_subcommand("unembed", "reverse-translate a program's main term");
  unembed->add_option("file", file, "program file")->required();

  std::string suite = "all";
  uint64_t seed = 0;
  int instances = -1, caps = -1, max_carrier = -1;
  std::string monoid;
  bool emit_json = false;
  auto* laws = app.add_subcommand("laws", "run the property suites");
  laws->add_option("--suite", suite, "eq, model, embed, or all")->capture_default_str();
  auto* seed_opt = laws->add_option("--seed", seed, "generator seed (default: CAPCALC_SEED or 7)");
  laws->add_option("--instances", instances, "instances per rule / per property");
  laws->add_option("--caps", caps, "capability universe size for the model suite");
  laws->add_option("--max-carrier", max_carrier, "carrier bound for random model spaces");
  laws->add_option("--monoid", monoid, "trivial, trunc2, or idem");
  laws->add_flag("--json", emit_json, "one JSON object per result line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  if (check->parsed()) {
    OwnedSource src;
    if (int rc = load_source(file, src)) return rc;
    OwnedStr type, err;
    capcalc_status st = capcalc_source_check(src.p, type.slot(), err.slot());
    if (st != CAPCALC_OK) return report(st, err);
    std::cout << "main : " << type.str() << "\n";
    return 0;
  }

  if (run->parsed()) {
    OwnedSource src;
    if (int rc = load_source(file, src)) return rc;
    std::vector<std::string> names, chans;
    if (!split_bindings(binds, names, chans)) {
      std::cerr << "error: --bind expects cap=channel\n";
      return 64;
    }
    auto cn = c_view(names);
    auto cc = c_view(chans);
    OwnedStr value, output, err;
    capcalc_status st = capcalc_source_run(src.p, cn.data(), cc.data(), cn.size(),
                                           no_strict ? 0 : 1, value.slot(), output.slot(),
                                           err.slot());
    if (st != CAPCALC_OK) return report(st, err);
    std::cout << output.str() << "value: " << value.str() << "\n";
    return 0;
  }

  if (weigh->parsed()) {
    OwnedSource src;
    if (int rc = load_source(file, src)) return rc;
    std::vector<std::string> names, chans;
    if (!split_bindings(binds, names, chans)) {
      std::cerr << "error: --bind expects cap=channel\n";
      return 64;
    }
    auto cn = c_view(names);
    auto cc = c_view(chans);
    OwnedStr vw, ew, err;
    capcalc_status st =
        capcalc_source_weigh(src.p, cn.data(), cc.data(), cn.size(), vw.slot(), ew.slot(),
                             err.slot());
    if (st != CAPCALC_OK) return report(st, err);
    std::cout << "value: " << vw.str() << "\n"
              << "effects: " << ew.str() << "\n";
    return 0;
  }

  if (embed->parsed()) {
    std::string text;
    if (!read_file(file, text)) {
      std::cerr << "error: cannot read " << file << "\n";
      return 1;
    }
    OwnedStr out, err;
    capcalc_status st = capcalc_embed(text.c_str(), out.slot(), err.slot());
    if (st != CAPCALC_OK) return report(st, err);
    std::cout << out.str() << "\n";
    return 0;
  }

  if (unembed->parsed()) {
    std::string text;
    if (!read_file(file, text)) {
      std::cerr << "error: cannot read " << file << "\n";
      return 1;
    }
    OwnedStr out, err;
    capcalc_status st = capcalc_unembed(text.c_str(), out.slot(), err.slot());
    if (st != CAPCALC_OK) return report(st, err);
    std::cout << out.str() << "\n";
    return 0;
  }

  if (laws->parsed()) {
    uint64_t effective_seed = seed_opt->count() > 0 ? seed : env_seed();
    OwnedStr rep, err;
    int all_pass = 0;
    capcalc_status st =
        capcalc_laws_run(suite.c_str(), effective_seed, instances, caps, max_carrier,
                         monoid.empty() ? nullptr : monoid.c_str(), emit_json ? 1 : 0,
                         rep.slot(), &all_pass, err.slot());
    if (st != CAPCALC_OK) return report(st, err);
    std::cout << rep.str();
    return all_pass ? 0 : 1;
  }

  return 64;
}
