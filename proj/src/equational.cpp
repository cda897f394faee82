#include "capcalc/equational.hpp"

#include "capcalc/interp.hpp"
#include "capcalc/printer.hpp"
#include "capcalc/substitution.hpp"
#include "capcalc/typecheck.hpp"

namespace capcalc {

const char* rule_slug(Rule r) {
  switch (r) {
    case Rule::BetaProd1: return "beta-prod1";
    case Rule::BetaProd2: return "beta-prod2";
    case Rule::EtaProd: return "eta-prod";
    case Rule::BetaArrow: return "beta-arrow";
    case Rule::EtaArrowImpure: return "eta-arrow-impure";
    case Rule::EtaArrowSafe: return "eta-arrow-safe";
    case Rule::BetaBox: return "beta-box";
    case Rule::EtaBoxSafe: return "eta-box-safe";
    case Rule::EtaBoxImpure: return "eta-box-impure";
  }
  return "?";
}

std::optional<TermPtr> try_rule(Rule r, const TermPtr& e, const Context& g) {
  switch (r) {
    case Rule::BetaProd1:
      if (e->kind == Term::Kind::Fst && e->a->kind == Term::Kind::Pair &&
          is_value(e->a->a) && is_value(e->a->b) && try_infer(g, e))
        return e->a->a;
      return std::nullopt;
    case Rule::BetaProd2:
      if (e->kind == Term::Kind::Snd && e->a->kind == Term::Kind::Pair &&
          is_value(e->a->a) && is_value(e->a->b) && try_infer(g, e))
        return e->a->b;
      return std::nullopt;
    case Rule::EtaProd: {
      if (!is_value(e)) return std::nullopt;
      auto t = try_infer(g, e);
      if (!t || (*t)->kind != Type::Kind::Prod) return std::nullopt;
      return tm::pair(tm::fst(e), tm::snd(e));
    }
    case Rule::BetaArrow: {
      if (e->kind != Term::Kind::App || e->a->kind != Term::Kind::Lam || !is_value(e->b))
        return std::nullopt;
      if (!try_infer(g, e)) return std::nullopt;
      return single_subst(e->b, Qualifier::Impure, e->a->name, e->a->a, g);
    }
    case Rule::EtaArrowImpure: {
      if (!is_value(e)) return std::nullopt;
      auto t = try_infer(g, e);
      if (!t || (*t)->kind != Type::Kind::Arrow) return std::nullopt;
      std::string x = fresh_name("x", free_vars(e));
      return tm::lam(x, (*t)->left, tm::app(e, tm::var(x)));
    }
    case Rule::EtaArrowSafe: {
      auto t = try_infer_safe(g, e);
      if (!t || (*t)->kind != Type::Kind::Arrow) return std::nullopt;
      std::string x = fresh_name("x", free_vars(e));
      return tm::lam(x, (*t)->left, tm::app(e, tm::var(x)));
    }
    case Rule::BetaBox: {
      if (e->kind != Term::Kind::LetBox || e->a->kind != Term::Kind::Box) return std::nullopt;
      if (!try_infer(g, e)) return std::nullopt;
      return single_subst(e->a->a, Qualifier::Safe, e->name, e->b, g);
    }
    case Rule::EtaBoxSafe:
    case Rule::EtaBoxImpure:
      return std::nullopt;  // need a context; see eta_box_expand
  }
  return std::nullopt;
}

namespace {

void collect_binders(const EvalCtxPtr& c, std::set<std::string>& out) {
  if (!c->binder.empty()) out.insert(c->binder);
  if (c->inner) collect_binders(c->inner, out);
}

}  // namespace

TermPtr eta_box_expand(CtxKind kind, const EvalCtxPtr& c, const TermPtr& e, const Context& g) {
  if (!ctx_well_formed(c, kind))
    throw error(kind == CtxKind::Impure
                    ? "context is not a valid impure evaluation context"
                    : "context is not a valid safe evaluation context");
  TypePtr te = kind == CtxKind::Safe ? infer_safe(g, e) : infer(g, e);
  if (te->kind != Type::Kind::Box)
    throw error("eta-box subject has non-box type " + print_type(te));

  TermPtr lhs = plug(c, e);
  std::set<std::string> avoid = free_vars(lhs);
  collect_binders(c, avoid);
  std::string x = fresh_name("x", avoid);
  TermPtr rhs = tm::let_box(x, e, plug(c, tm::box(tm::var(x))));

  TypePtr tl = infer(g, lhs);
  TypePtr tr = infer(g, rhs);
  if (!type_equal(tl, tr))
    throw error("eta-box sides type differently: " + print_type(tl) + " vs " + print_type(tr));
  return rhs;
}

namespace {

struct Comparer {
  Rng rng;
  DenotOptions opts;
  EvalOptions eval_opts;
  std::string witness;

  bool values_agree(const ValuePtr& v1, const ValuePtr& v2, const TypePtr& t, int depth) {
    switch (t->kind) {
      case Type::Kind::Unit:
        return true;
      case Type::Kind::Str:
      case Type::Kind::Cap:
        if (v1->text != v2->text) {
          witness = "values differ: " + print_value(v1) + " vs " + print_value(v2);
          return false;
        }
        return true;
      case Type::Kind::Prod:
        if (v1->kind != Value::Kind::Pair || v2->kind != Value::Kind::Pair) {
          witness = "values differ: " + print_value(v1) + " vs " + print_value(v2);
          return false;
        }
        return values_agree(v1->a, v2->a, t->left, depth) &&
               values_agree(v1->b, v2->b, t->right, depth);
      case Type::Kind::Box:
        if (v1->kind != Value::Kind::Box || v2->kind != Value::Kind::Box) {
          witness = "values differ: " + print_value(v1) + " vs " + print_value(v2);
          return false;
        }
        return values_agree(v1->a, v2->a, t->left, depth);
      case Type::Kind::Arrow: {
        if (depth <= 0) return true;
        for (int i = 0; i < opts.fn_args; ++i) {
          auto argt = gen_closed_value(rng, t->left, opts.arg_size);
          if (!argt) continue;
          ValuePtr arg = eval({}, *argt, eval_opts).value;
          EvalResult r1 = apply_closure(v1, arg, eval_opts);
          EvalResult r2 = apply_closure(v2, arg, eval_opts);
          if (r1.output != r2.output) {
            witness = "applied to " + print_term(*argt) + ": outputs differ";
            return false;
          }
          if (!values_agree(r1.value, r2.value, t->right, depth - 1)) {
            witness = "applied to " + print_term(*argt) + ": " + witness;
            return false;
          }
        }
        return true;
      }
    }
    return true;
  }
};

std::string render_subst(const Subst& s) {
  std::string out;
  for (const auto& e : s) {
    if (!out.empty()) out += ", ";
    out += e.name + " := " + print_term(e.term);
  }
  return out.empty() ? "(empty)" : out;
}

std::string render_output_diff(const Output& a, const Output& b) {
  auto one = [](const Output& o) {
    std::string s = "{";
    bool sep = false;
    for (const auto& [c, t] : o) {
      if (sep) s += ", ";
      sep = true;
      s += c + ": " + quote_string(t);
    }
    return s + "}";
  };
  return one(a) + " vs " + one(b);
}

}  // namespace

DenotResult denot_equal(const Context& g, const TermPtr& e1, const TermPtr& e2, const TypePtr& t,
                        uint64_t seed, const DenotOptions& opts) {
  Rng rng(seed);
  int effective = 0;
  for (int tries = 0; tries < opts.closings * 8 && effective < opts.closings; ++tries) {
    auto subst = gen_closing_subst(rng, g);
    if (!subst) continue;
    TermPtr c1 = apply_subst(*subst, e1);
    TermPtr c2 = apply_subst(*subst, e2);
    EvalResult r1 = eval({}, c1);
    EvalResult r2 = eval({}, c2);
    ++effective;
    if (r1.output != r2.output) {
      return {Verdict::Distinguished, "under " + render_subst(*subst) + ": outputs differ " +
                                          render_output_diff(r1.output, r2.output)};
    }
    Comparer cmp{rng.fork(effective), opts, {}, ""};
    if (!cmp.values_agree(r1.value, r2.value, t, 3)) {
      return {Verdict::Distinguished, "under " + render_subst(*subst) + ": " + cmp.witness};
    }
  }
  if (effective == 0) return {Verdict::Exhausted, ""};
  return {Verdict::Equal, ""};
}

namespace {

std::optional<TermPtr> step(const Context& g, const TermPtr& e) {
  switch (e->kind) {
    case Term::Kind::App: {
      if (auto b = step(g, e->b)) return tm::app(e->a, *b);
      if (!is_value(e->b)) return std::nullopt;
      if (auto a = step(g, e->a)) return tm::app(*a, e->b);
      if (e->a->kind == Term::Kind::Lam)
        return single_subst(e->b, Qualifier::Impure, e->a->name, e->a->a, g);
      return std::nullopt;
    }
    case Term::Kind::Pair: {
      if (auto b = step(g, e->b)) return tm::pair(e->a, *b);
      if (!is_value(e->b)) return std::nullopt;
      if (auto a = step(g, e->a)) return tm::pair(*a, e->b);
      return std::nullopt;
    }
    case Term::Kind::Fst: {
      if (auto a = step(g, e->a)) return tm::fst(*a);
      if (e->a->kind == Term::Kind::Pair && is_value(e->a)) return e->a->a;
      return std::nullopt;
    }
    case Term::Kind::Snd: {
      if (auto a = step(g, e->a)) return tm::snd(*a);
      if (e->a->kind == Term::Kind::Pair && is_value(e->a)) return e->a->b;
      return std::nullopt;
    }
    case Term::Kind::LetBox: {
      if (auto a = step(g, e->a)) return tm::let_box(e->name, *a, e->b);
      if (!is_value(e->a)) return std::nullopt;
      if (e->a->kind == Term::Kind::Box)
        return single_subst(e->a->a, Qualifier::Safe, e->name, e->b, g);
      auto ts = try_infer(g, e->a);
      if (!ts || (*ts)->kind != Type::Kind::Box) return std::nullopt;
      Context g2 = g;
      g2.push_back({e->name, (*ts)->left, Qualifier::Safe});
      if (auto b = step(g2, e->b)) return tm::let_box(e->name, e->a, *b);
      return std::nullopt;
    }
    default:
      return std::nullopt;  // no impure-context frame descends here
  }
}

}  // namespace

NormalizeResult rewrite_normalize(const Context& g, const TermPtr& e, int fuel) {
  NormalizeResult out{e, 0, false};
#ifndef NDEBUG
  auto ty = try_infer(g, e);
#endif
  while (true) {
    auto next = step(g, out.term);
    if (!next) return out;
#ifndef NDEBUG
    if (ty && out.steps < 8) {
      DenotResult d = denot_equal(g, out.term, *next, *ty, 11, DenotOptions{2, 2, 2});
      if (d.verdict == Verdict::Distinguished)
        throw error("normalization step changed meaning: " + d.witness);
    }
#endif
    out.term = *next;
    ++out.steps;
    if (out.steps >= fuel) {
      out.fuel_exhausted = step(g, out.term).has_value();
      return out;
    }
  }
}

}  // namespace capcalc
