#include "capcalc/interp.hpp"

#include <algorithm>

#include "capcalc/printer.hpp"
#include "capcalc/typecheck.hpp"

namespace capcalc {

namespace val {

static ValuePtr make(Value v) { return std::make_shared<Value>(std::move(v)); }

ValuePtr unit() {
  static ValuePtr u = make({Value::Kind::Unit, "", nullptr, nullptr, {}, "", nullptr, nullptr});
  return u;
}
ValuePtr str(std::string s) {
  return make({Value::Kind::Str, std::move(s), nullptr, nullptr, {}, "", nullptr, nullptr});
}
ValuePtr chan(std::string c) {
  return make({Value::Kind::Chan, std::move(c), nullptr, nullptr, {}, "", nullptr, nullptr});
}
ValuePtr pair(ValuePtr a, ValuePtr b) {
  return make({Value::Kind::Pair, "", std::move(a), std::move(b), {}, "", nullptr, nullptr});
}
ValuePtr boxed(ValuePtr payload) {
  return make({Value::Kind::Box, "", std::move(payload), nullptr, {}, "", nullptr, nullptr});
}
ValuePtr closure(Env captured, std::string param, TypePtr param_type, TermPtr body) {
  return make({Value::Kind::Closure, "", nullptr, nullptr, std::move(captured), std::move(param),
               std::move(param_type), std::move(body)});
}

}  // namespace val

Output output_append(const Output& first, const Output& second) {
  Output out = first;
  for (const auto& [chan, text] : second) out[chan] += text;
  return out;
}

static std::string render_output(const Output& o) {
  std::string s = "{";
  bool sep = false;
  for (const auto& [chan, text] : o) {
    if (sep) s += ", ";
    sep = true;
    s += chan + ": " + quote_string(text);
  }
  return s + "}";
}

strict_purity_violation::strict_purity_violation(Output d)
    : eval_error("box body produced output " + render_output(d)), discarded(std::move(d)) {}

missing_binding::missing_binding(std::string c)
    : eval_error("no channel bound for capability '" + c + "'"), cap(std::move(c)) {}

const EnvEntry* lookup_env(const Env& env, const std::string& name) {
  for (size_t i = env.size(); i-- > 0;)
    if (env[i].name == name) return &env[i];
  return nullptr;
}

Env purify_env(const Env& env) {
  Env out;
  for (const auto& e : env)
    if (e.qual == Qualifier::Safe) out.push_back(e);
  return out;
}

Env restrict_env(const Env& env, const std::set<std::string>& keep) {
  Env out;
  std::set<std::string> seen;
  for (size_t i = env.size(); i-- > 0;) {
    if (keep.count(env[i].name) && seen.insert(env[i].name).second)
      out.push_back(env[i]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

EvalResult eval(const Env& env, const TermPtr& e, const EvalOptions& opts) {
  switch (e->kind) {
    case Term::Kind::Unit:
      return {val::unit(), {}};
    case Term::Kind::Str:
      return {val::str(e->name), {}};
    case Term::Kind::Chan:
      return {val::chan(e->name), {}};
    case Term::Kind::Var: {
      const EnvEntry* b = lookup_env(env, e->name);
      if (!b) throw eval_error("unbound variable '" + e->name + "' at runtime");
      return {b->value, {}};
    }
    case Term::Kind::Lam: {
      std::set<std::string> fv = free_vars(e->a);
      fv.erase(e->name);
      return {val::closure(restrict_env(env, fv), e->name, e->annot, e->a), {}};
    }
    case Term::Kind::App: {
      // argument first, then function, then the body
      EvalResult arg = eval(env, e->b, opts);
      EvalResult fn = eval(env, e->a, opts);
      if (fn.value->kind != Value::Kind::Closure)
        throw eval_error("applied a non-closure value");
      Env inner = fn.value->captured;
      inner.push_back({fn.value->param, arg.value, Qualifier::Impure});
      EvalResult body = eval(inner, fn.value->body, opts);
      return {body.value,
              output_append(output_append(arg.output, fn.output), body.output)};
    }
    case Term::Kind::Pair: {
      // right component first
      EvalResult right = eval(env, e->b, opts);
      EvalResult left = eval(env, e->a, opts);
      return {val::pair(left.value, right.value), output_append(right.output, left.output)};
    }
    case Term::Kind::Fst: {
      EvalResult r = eval(env, e->a, opts);
      if (r.value->kind != Value::Kind::Pair) throw eval_error("fst of a non-pair");
      return {r.value->a, r.output};
    }
    case Term::Kind::Snd: {
      EvalResult r = eval(env, e->a, opts);
      if (r.value->kind != Value::Kind::Pair) throw eval_error("snd of a non-pair");
      return {r.value->b, r.output};
    }
    case Term::Kind::Print: {
      // payload string first, then the channel, then the emission
      EvalResult text = eval(env, e->b, opts);
      EvalResult chan = eval(env, e->a, opts);
      if (text.value->kind != Value::Kind::Str) throw eval_error("print payload is not a string");
      if (chan.value->kind != Value::Kind::Chan)
        throw eval_error("print channel is not a channel value");
      Output emitted;
      if (!text.value->text.empty()) emitted[chan.value->text] = text.value->text;
      return {val::unit(),
              output_append(output_append(text.output, chan.output), emitted)};
    }
    case Term::Kind::Box: {
      EvalResult body = eval(purify_env(env), e->a, opts);
      if (opts.strict && !body.output.empty()) throw strict_purity_violation(body.output);
      return {val::boxed(body.value), {}};
    }
    case Term::Kind::LetBox: {
      EvalResult scrut = eval(env, e->a, opts);
      if (scrut.value->kind != Value::Kind::Box)
        throw eval_error("let box scrutinee is not a box value");
      Env inner = env;
      inner.push_back({e->name, scrut.value->a, Qualifier::Safe});
      EvalResult body = eval(inner, e->b, opts);
      return {body.value, output_append(scrut.output, body.output)};
    }
  }
  throw error("eval: bad term");
}

EvalResult apply_closure(const ValuePtr& fn, const ValuePtr& arg, const EvalOptions& opts) {
  if (fn->kind != Value::Kind::Closure) throw eval_error("applied a non-closure value");
  Env inner = fn->captured;
  inner.push_back({fn->param, arg, Qualifier::Impure});
  return eval(inner, fn->body, opts);
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Str:
    case Value::Kind::Chan:
      return a->text == b->text;
    case Value::Kind::Pair:
      return value_equal(a->a, b->a) && value_equal(a->b, b->b);
    case Value::Kind::Box:
      return value_equal(a->a, b->a);
    case Value::Kind::Closure: {
      if (a->param != b->param || !type_equal(a->param_type, b->param_type) ||
          !term_equal(a->body, b->body))
        return false;
      if (a->captured.size() != b->captured.size()) return false;
      for (size_t i = 0; i < a->captured.size(); ++i) {
        if (a->captured[i].name != b->captured[i].name ||
            a->captured[i].qual != b->captured[i].qual ||
            !value_equal(a->captured[i].value, b->captured[i].value))
          return false;
      }
      return true;
    }
  }
  return false;
}

std::string print_value(const ValuePtr& v) {
  switch (v->kind) {
    case Value::Kind::Unit:
      return "()";
    case Value::Kind::Str:
      return quote_string(v->text);
    case Value::Kind::Chan:
      return "<chan " + v->text + ">";
    case Value::Kind::Pair:
      return "(" + print_value(v->a) + ", " + print_value(v->b) + ")";
    case Value::Kind::Box:
      return "box " + print_value(v->a);
    case Value::Kind::Closure:
      return print_term(tm::lam(v->param, v->param_type, v->body));
  }
  return "?";
}

Context source_context(const SourceFile& src) {
  Context g;
  for (const auto& d : src.decls) {
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
  return g;
}

RunResult run_source(const SourceFile& src, const std::map<std::string, std::string>& bindings,
                     const EvalOptions& opts) {
  const Decl* main = src.main_decl();
  if (!main) throw error("program has no main declaration");

  Context g;
  Env env;
  Output out;
  for (const auto& d : src.decls) {
    if (d.kind == Decl::Kind::Cap) {
      auto it = bindings.find(d.name);
      if (it == bindings.end()) throw missing_binding(d.name);
      g.push_back({d.name, ty::cap(), Qualifier::Impure});
      env.push_back({d.name, val::chan(it->second), Qualifier::Impure});
    } else if (d.kind == Decl::Kind::Let) {
      TypePtr t = infer(g, d.term);
      if (d.annot && !type_equal(t, d.annot))
        throw type_error({TypeError::Kind::Mismatch, d.name, d.annot, t, d.term,
                          "declaration annotation"});
      EvalResult r = eval(env, d.term, opts);
      out = output_append(out, r.output);
      g.push_back({d.name, t, Qualifier::Impure});
      env.push_back({d.name, r.value, Qualifier::Impure});
    }
  }
  TypePtr main_type = infer(g, main->term);
  EvalResult r = eval(env, main->term, opts);
  return {r.value, output_append(out, r.output), main_type};
}

}  // namespace capcalc
