#include "capcalc/capcalc.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "capcalc/interp.hpp"
#include "capcalc/modellab.hpp"
#include "capcalc/parser.hpp"
#include "capcalc/printer.hpp"
#include "capcalc/stlc.hpp"
#include "capcalc/suites.hpp"
#include "capcalc/typecheck.hpp"
#include "capcalc/weights.hpp"

struct capcalc_source {
  capcalc::SourceFile file;
  std::string text;
};

namespace {

using namespace capcalc;

char* dup_cstr(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** slot, const std::string& s) {
  if (slot) *slot = dup_cstr(s);
}

std::string where(const std::string& text, int pos) {
  if (pos < 0) return "";
  auto [line, col] = line_col(text, pos);
  return "line " + std::to_string(line) + ", col " + std::to_string(col) + ": ";
}

std::string describe_type_error(const std::string& text, const type_error& ex) {
  return where(text, ex.info.at ? ex.info.at->pos : -1) + ex.info.message();
}

std::map<std::string, std::string> binding_map(const char* const* names, const char* const* chans,
                                               size_t n) {
  std::map<std::string, std::string> m;
  for (size_t i = 0; i < n; ++i) m[names[i]] = chans[i];
  return m;
}

stlc::STypePtr stype_of(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Unit:
      return stlc::sty::unit();
    case Type::Kind::Arrow:
      return stlc::sty::arrow(stype_of(t->left), stype_of(t->right));
    default:
      throw error("type " + print_type(t) + " is outside the pure fragment");
  }
}

stlc::STermPtr sterm_of(const TermPtr& e) {
  switch (e->kind) {
    case Term::Kind::Unit:
      return stlc::stm::unit();
    case Term::Kind::Var:
      return stlc::stm::var(e->name);
    case Term::Kind::Lam:
      return stlc::stm::lam(e->name, stype_of(e->annot), sterm_of(e->a));
    case Term::Kind::App:
      return stlc::stm::app(sterm_of(e->a), sterm_of(e->b));
    default:
      throw error("term " + print_term(e) + " is outside the pure fragment");
  }
}

}  // namespace

extern "C" {

capcalc_status capcalc_source_parse(const char* text, capcalc_source** out, char** err) {
  if (!text || !out) {
    put(err, "null argument");
    return CAPCALC_ERR_USAGE;
  }
  try {
    auto* src = new capcalc_source{parse_source(text), text};
    *out = src;
    return CAPCALC_OK;
  } catch (const parse_error& ex) {
    put(err, "line " + std::to_string(ex.line) + ", col " + std::to_string(ex.col) + ": " +
                 ex.what());
    return CAPCALC_ERR_PARSE;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_PARSE;
  }
}

void capcalc_source_free(capcalc_source* src) { delete src; }

capcalc_status capcalc_source_check(const capcalc_source* src, char** type_out, char** err) {
  if (!src) {
    put(err, "null source");
    return CAPCALC_ERR_USAGE;
  }
  try {
    Context g;
    const Decl* main = src->file.main_decl();
    if (!main) throw error("program has no main declaration");
    for (const auto& d : src->file.decls) {
      if (d.kind == Decl::Kind::Cap) {
        g.push_back({d.name, ty::cap(), Qualifier::Impure});
      } else if (d.kind == Decl::Kind::Let) {
        TypePtr t = infer(g, d.term);
        if (d.annot && !type_equal(t, d.annot))
          throw type_error({TypeError::Kind::Mismatch, d.name, d.annot, t, d.term,
                            "declaration annotation"});
        g.push_back({d.name, t, Qualifier::Impure});
      }
    }
    put(type_out, print_type(infer(g, main->term)));
    return CAPCALC_OK;
  } catch (const type_error& ex) {
    put(err, describe_type_error(src->text, ex));
    return CAPCALC_ERR_TYPE;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_TYPE;
  }
}

capcalc_status capcalc_source_run(const capcalc_source* src, const char* const* cap_names,
                                  const char* const* channels, size_t n, int strict,
                                  char** value_out, char** output_out, char** err) {
  if (!src) {
    put(err, "null source");
    return CAPCALC_ERR_USAGE;
  }
  try {
    EvalOptions opts;
    opts.strict = strict != 0;
    RunResult r = run_source(src->file, binding_map(cap_names, channels, n), opts);
    std::string block;
    for (const auto& [chan, text] : r.output) block += chan + ": " + text + "\n";
    put(value_out, print_value(r.value));
    put(output_out, block);
    return CAPCALC_OK;
  } catch (const type_error& ex) {
    put(err, describe_type_error(src->text, ex));
    return CAPCALC_ERR_TYPE;
  } catch (const missing_binding& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_MISSING_BINDING;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_EVAL;
  }
}

capcalc_status capcalc_source_weigh(const capcalc_source* src, const char* const* cap_names,
                                    const char* const* channels, size_t n,
                                    char** value_weight_out, char** effect_weight_out,
                                    char** err) {
  if (!src) {
    put(err, "null source");
    return CAPCALC_ERR_USAGE;
  }
  try {
    auto bindings = binding_map(cap_names, channels, n);
    for (const auto& cap : src->file.cap_names())
      if (!bindings.count(cap)) bindings[cap] = cap;
    WeighResult w = weigh_program(src->file, bindings);
    put(value_weight_out, render_cap_set(w.value_weight));
    put(effect_weight_out, render_cap_set(w.effect_weight));
    return CAPCALC_OK;
  } catch (const type_error& ex) {
    put(err, describe_type_error(src->text, ex));
    return CAPCALC_ERR_TYPE;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_EVAL;
  }
}

capcalc_status capcalc_embed(const char* stlc_term, char** cap_term_out, char** err) {
  if (!stlc_term) {
    put(err, "null term");
    return CAPCALC_ERR_USAGE;
  }
  try {
    TermPtr raw = parse_term_text(stlc_term);
    stlc::STermPtr e = sterm_of(raw);
    put(cap_term_out, print_term(stlc::embed_term(e)));
    return CAPCALC_OK;
  } catch (const parse_error& ex) {
    put(err, "line " + std::to_string(ex.line) + ", col " + std::to_string(ex.col) + ": " +
                 ex.what());
    return CAPCALC_ERR_PARSE;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_TYPE;
  }
}

capcalc_status capcalc_unembed(const char* cap_source, char** stlc_term_out, char** err) {
  if (!cap_source) {
    put(err, "null source");
    return CAPCALC_ERR_USAGE;
  }
  try {
    SourceFile src = parse_source(cap_source);
    const Decl* main = src.main_decl();
    if (!main) throw error("program has no main declaration");
    Context g = source_context(src);
    infer(g, main->term);
    put(stlc_term_out, stlc::print_sterm(stlc::unembed_term(g, main->term)));
    return CAPCALC_OK;
  } catch (const parse_error& ex) {
    put(err, "line " + std::to_string(ex.line) + ", col " + std::to_string(ex.col) + ": " +
                 ex.what());
    return CAPCALC_ERR_PARSE;
  } catch (const type_error& ex) {
    put(err, describe_type_error(cap_source, ex));
    return CAPCALC_ERR_TYPE;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_TYPE;
  }
}

capcalc_status capcalc_laws_run(const char* suite, uint64_t seed, int instances, int caps,
                                int max_carrier, const char* monoid, int emit_json,
                                char** report_out, int* all_pass_out, char** err) {
  std::string s = suite ? suite : "";
  std::string mono = monoid && *monoid ? monoid : "trunc2";
  if (mono != "trivial" && mono != "trunc2" && mono != "idem") {
    put(err, "unknown monoid '" + mono + "'");
    return CAPCALC_ERR_USAGE;
  }
  bool do_eq = s == "eq" || s == "all";
  bool do_model = s == "model" || s == "all";
  bool do_embed = s == "embed" || s == "all";
  if (!do_eq && !do_model && !do_embed) {
    put(err, "unknown suite '" + s + "' (expected eq, model, embed, or all)");
    return CAPCALC_ERR_USAGE;
  }
  if (instances > 100000) {
    put(err, "instance count too large");
    return CAPCALC_ERR_USAGE;
  }
  try {
    std::vector<SuiteLine> lines;
    if (do_eq) {
      EqSuiteOptions o;
      o.seed = seed;
      if (instances > 0) o.instances = instances;
      auto ls = run_eq_suite(o);
      lines.insert(lines.end(), ls.begin(), ls.end());
    }
    if (do_model) {
      model::ModelOptions o;
      o.seed = seed;
      if (caps > 0) o.caps = caps;
      if (max_carrier > 0) o.max_carrier = max_carrier;
      o.monoid = mono;
      auto ls = model::run_model_suite(o);
      lines.insert(lines.end(), ls.begin(), ls.end());
    }
    if (do_embed) {
      EmbedSuiteOptions o;
      o.seed = seed;
      if (instances > 0) o.instances = instances;
      auto ls = run_embed_suite(o);
      lines.insert(lines.end(), ls.begin(), ls.end());
    }
    std::string out;
    bool ok = true;
    for (const auto& l : lines) {
      ok = ok && l.pass;
      if (emit_json) {
        nlohmann::json j{{"name", l.name}, {"pass", l.pass}, {"note", l.note}};
        out += j.dump();
      } else {
        out += l.name + ": " + (l.pass ? "PASS" : "FAIL");
        if (!l.note.empty()) out += " (" + l.note + ")";
      }
      out += '\n';
    }
    if (all_pass_out) *all_pass_out = ok ? 1 : 0;
    put(report_out, out);
    return CAPCALC_OK;
  } catch (const std::exception& ex) {
    put(err, ex.what());
    return CAPCALC_ERR_EVAL;
  }
}

void capcalc_string_free(char* s) { std::free(s); }

}  // extern "C"
