#pragma once

#include <map>
#include <string>
#include <vector>

#include "capcalc/parser.hpp"
#include "capcalc/syntax.hpp"

namespace capcalc {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct EnvEntry {
  std::string name;
  ValuePtr value;
  Qualifier qual;
};
using Env = std::vector<EnvEntry>;

struct Value {
  enum class Kind { Unit, Str, Chan, Pair, Closure, Box };
  Kind kind;
  std::string text;  // Str contents / Chan channel
  ValuePtr a, b;     // Pair components; Box payload in a
  // Closure: captured binds exactly the free variables of body minus param
  Env captured;
  std::string param;
  TypePtr param_type;
  TermPtr body;
};

namespace val {
ValuePtr unit();
ValuePtr str(std::string s);
ValuePtr chan(std::string c);
ValuePtr pair(ValuePtr a, ValuePtr b);
ValuePtr boxed(ValuePtr payload);
ValuePtr closure(Env captured, std::string param, TypePtr param_type, TermPtr body);
}  // namespace val

// absent key means the empty string; values are never empty
using Output = std::map<std::string, std::string>;

Output output_append(const Output& first, const Output& second);

struct eval_error : error {
  using error::error;
};

// a box body produced output (strict mode only)
struct strict_purity_violation : eval_error {
  explicit strict_purity_violation(Output discarded);
  Output discarded;
};

struct missing_binding : eval_error {
  explicit missing_binding(std::string cap);
  std::string cap;
};

struct EvalOptions {
  bool strict = true;
};

struct EvalResult {
  ValuePtr value;
  Output output;
};

EvalResult eval(const Env& env, const TermPtr& e, const EvalOptions& opts = {});

// applies a closure (or fails); shared by the harnesses
EvalResult apply_closure(const ValuePtr& fn, const ValuePtr& arg, const EvalOptions& opts = {});

const EnvEntry* lookup_env(const Env& env, const std::string& name);
Env purify_env(const Env& env);
Env restrict_env(const Env& env, const std::set<std::string>& keep);

bool value_equal(const ValuePtr& a, const ValuePtr& b);
std::string print_value(const ValuePtr& v);

// Typechecks and evaluates a whole source file: cap declarations resolve
// through bindings (declared name -> runtime channel), lets evaluate in
// declaration order, main last, outputs concatenated in that order.
struct RunResult {
  ValuePtr value;
  Output output;
  TypePtr type;
};

RunResult run_source(const SourceFile& src, const std::map<std::string, std::string>& bindings,
                     const EvalOptions& opts = {});

// context seen by a source file's main term: caps impure at cap, lets impure
Context source_context(const SourceFile& src);

}  // namespace capcalc
