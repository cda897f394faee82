#include "capcalc/typecheck.hpp"

#include "capcalc/printer.hpp"

namespace capcalc {

std::string TypeError::message() const {
  switch (kind) {
    case Kind::Unbound:
      return "unbound variable '" + name + "'";
    case Kind::ImpureInSafe:
      return "impure variable '" + name + "' used in a safe position";
    case Kind::Mismatch:
      return "type mismatch: expected " + print_type(expected) + ", got " + print_type(got) +
             (detail.empty() ? "" : " (" + detail + ")");
    case Kind::NotFunction:
      return "applied a non-function of type " + print_type(got);
    case Kind::NotProduct:
      return "projected from a non-product of type " + print_type(got);
    case Kind::NotBox:
      return "let box scrutinee has non-box type " + print_type(got);
  }
  return "type error";
}

type_error::type_error(TypeError i) : error(i.message()), info(std::move(i)) {}

const Binding* lookup_binding(const Context& g, const std::string& name) {
  for (size_t i = g.size(); i-- > 0;)
    if (g[i].name == name) return &g[i];
  return nullptr;
}

namespace {

[[noreturn]] void raise(TypeError::Kind k, const TermPtr& at, std::string name = "",
                        TypePtr expected = nullptr, TypePtr got = nullptr,
                        std::string detail = "") {
  throw type_error(
      {k, std::move(name), std::move(expected), std::move(got), at, std::move(detail)});
}

TypePtr infer_rec(const Context& g, const TermPtr& e);

// The safe judgement types e in the purified context. A failure about a
// variable the unpurified context does bind is reported as ImpureInSafe at
// its occurrence; channel literals are intrinsically impure and are rejected
// outright (they would smuggle a weighted value into a box).
TypePtr infer_safe_at(const Context& g, const TermPtr& e) {
  if (contains_chan_literal(e))
    raise(TypeError::Kind::ImpureInSafe, e, "<channel literal>");
  try {
    return infer_rec(purify_context(g), e);
  } catch (const type_error& err) {
    if (err.info.kind == TypeError::Kind::Unbound) {
      if (const Binding* b = lookup_binding(g, err.info.name); b && b->qual == Qualifier::Impure)
        raise(TypeError::Kind::ImpureInSafe, err.info.at, err.info.name);
    }
    throw;
  }
}

TypePtr infer_rec(const Context& g, const TermPtr& e) {
  switch (e->kind) {
    case Term::Kind::Unit:
      return ty::unit();
    case Term::Kind::Str:
      return ty::str();
    case Term::Kind::Chan:
      return ty::cap();
    case Term::Kind::Var: {
      const Binding* b = lookup_binding(g, e->name);
      if (!b) raise(TypeError::Kind::Unbound, e, e->name);
      return b->type;
    }
    case Term::Kind::Lam: {
      Context g2 = g;
      g2.push_back({e->name, e->annot, Qualifier::Impure});
      return ty::arrow(e->annot, infer_rec(g2, e->a));
    }
    case Term::Kind::App: {
      TypePtr tf = infer_rec(g, e->a);
      TypePtr ta = infer_rec(g, e->b);
      if (tf->kind != Type::Kind::Arrow) raise(TypeError::Kind::NotFunction, e->a, "", nullptr, tf);
      if (!type_equal(tf->left, ta))
        raise(TypeError::Kind::Mismatch, e->b, "", tf->left, ta, "function argument");
      return tf->right;
    }
    case Term::Kind::Pair:
      return ty::prod(infer_rec(g, e->a), infer_rec(g, e->b));
    case Term::Kind::Fst: {
      TypePtr t = infer_rec(g, e->a);
      if (t->kind != Type::Kind::Prod) raise(TypeError::Kind::NotProduct, e->a, "", nullptr, t);
      return t->left;
    }
    case Term::Kind::Snd: {
      TypePtr t = infer_rec(g, e->a);
      if (t->kind != Type::Kind::Prod) raise(TypeError::Kind::NotProduct, e->a, "", nullptr, t);
      return t->right;
    }
    case Term::Kind::Print: {
      TypePtr tc = infer_rec(g, e->a);
      if (tc->kind != Type::Kind::Cap)
        raise(TypeError::Kind::Mismatch, e->a, "", ty::cap(), tc, "print channel");
      TypePtr ts = infer_rec(g, e->b);
      if (ts->kind != Type::Kind::Str)
        raise(TypeError::Kind::Mismatch, e->b, "", ty::str(), ts, "print payload");
      return ty::unit();
    }
    case Term::Kind::Box:
      return ty::boxed(infer_safe_at(g, e->a));
    case Term::Kind::LetBox: {
      TypePtr t = infer_rec(g, e->a);
      if (t->kind != Type::Kind::Box) raise(TypeError::Kind::NotBox, e->a, "", nullptr, t);
      Context g2 = g;
      g2.push_back({e->name, t->left, Qualifier::Safe});
      return infer_rec(g2, e->b);
    }
  }
  throw error("infer: bad term");
}

}  // namespace

TypePtr infer(const Context& g, const TermPtr& e) { return infer_rec(g, e); }

TypePtr infer_safe(const Context& g, const TermPtr& e) { return infer_safe_at(g, e); }

std::optional<TypePtr> try_infer(const Context& g, const TermPtr& e, TypeError* err) {
  try {
    return infer(g, e);
  } catch (const type_error& ex) {
    if (err) *err = ex.info;
    return std::nullopt;
  }
}

std::optional<TypePtr> try_infer_safe(const Context& g, const TermPtr& e, TypeError* err) {
  try {
    return infer_safe(g, e);
  } catch (const type_error& ex) {
    if (err) *err = ex.info;
    return std::nullopt;
  }
}

bool check_weakening(const Context& g, const Context& d) {
  size_t j = 0;
  for (const auto& b : g) {
    if (j < d.size() && b.name == d[j].name && b.qual == d[j].qual &&
        type_equal(b.type, d[j].type))
      ++j;
  }
  return j == d.size();
}

bool check_subst(const Context& g, const Subst& s, const Context& d, std::string* reason) {
  auto why = [&](const std::string& r) {
    if (reason) *reason = r;
    return false;
  };
  if (s.size() != d.size()) return why("substitution and context lengths differ");
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i].name != d[i].name)
      return why("entry " + std::to_string(i) + " names '" + s[i].name + "' but context binds '" +
                 d[i].name + "'");
    if (s[i].qual != d[i].qual)
      return why("entry '" + s[i].name + "' qualifier differs from context");
    if (s[i].qual == Qualifier::Safe) {
      TypeError err;
      auto t = try_infer_safe(g, s[i].term, &err);
      if (!t) return why("safe entry '" + s[i].name + "': " + err.message());
      if (!type_equal(*t, d[i].type))
        return why("safe entry '" + s[i].name + "' has type " + print_type(*t) + ", context wants " +
                   print_type(d[i].type));
    } else {
      if (!is_value(s[i].term))
        return why("impure entry '" + s[i].name + "' is not a syntactic value");
      TypeError err;
      auto t = try_infer(g, s[i].term, &err);
      if (!t) return why("impure entry '" + s[i].name + "': " + err.message());
      if (!type_equal(*t, d[i].type))
        return why("impure entry '" + s[i].name + "' has type " + print_type(*t) +
                   ", context wants " + print_type(d[i].type));
    }
  }
  if (reason) reason->clear();
  return true;
}

}  // namespace capcalc
