#include "capcalc/substitution.hpp"

namespace capcalc {

TermPtr subst_lookup(const Subst& s, const std::string& name) {
  for (size_t i = s.size(); i-- > 0;)
    if (s[i].name == name) return s[i].term;
  throw subst_error(name, "variable '" + name + "' not covered by the substitution");
}

namespace {

// names a renamed binder must avoid: everything free in the substitution's
// range, its domain, and the term being substituted into
std::set<std::string> avoid_set(const Subst& s, const TermPtr& e) {
  std::set<std::string> avoid = free_vars(e);
  for (const auto& entry : s) {
    avoid.insert(entry.name);
    auto fv = free_vars(entry.term);
    avoid.insert(fv.begin(), fv.end());
  }
  return avoid;
}

TermPtr apply_rec(const Subst& s, const TermPtr& e) {
  switch (e->kind) {
    case Term::Kind::Unit:
    case Term::Kind::Str:
    case Term::Kind::Chan:
      return e;
    case Term::Kind::Var:
      return subst_lookup(s, e->name);
    case Term::Kind::Lam: {
      std::set<std::string> avoid = avoid_set(s, e->a);
      avoid.insert(e->name);
      std::string y = fresh_name(e->name, avoid);
      Subst s2 = s;
      s2.push_back({e->name, tm::var(y), Qualifier::Impure});
      return tm::lam(y, e->annot, apply_rec(s2, e->a));
    }
    case Term::Kind::App:
      return tm::app(apply_rec(s, e->a), apply_rec(s, e->b));
    case Term::Kind::Pair:
      return tm::pair(apply_rec(s, e->a), apply_rec(s, e->b));
    case Term::Kind::Fst:
      return tm::fst(apply_rec(s, e->a));
    case Term::Kind::Snd:
      return tm::snd(apply_rec(s, e->a));
    case Term::Kind::Print:
      return tm::print(apply_rec(s, e->a), apply_rec(s, e->b));
    case Term::Kind::Box:
      return tm::box(apply_rec(purify_subst(s), e->a));
    case Term::Kind::LetBox: {
      TermPtr scrut = apply_rec(s, e->a);
      std::set<std::string> avoid = avoid_set(s, e->b);
      avoid.insert(e->name);
      std::string y = fresh_name(e->name, avoid);
      Subst s2 = s;
      s2.push_back({e->name, tm::var(y), Qualifier::Safe});
      return tm::let_box(y, scrut, apply_rec(s2, e->b));
    }
  }
  throw error("apply_subst: bad term");
}

}  // namespace

TermPtr apply_subst(const Subst& s, const TermPtr& e) { return apply_rec(s, e); }

Subst identity_subst(const Context& g) {
  Subst s;
  for (const auto& b : g) s.push_back({b.name, tm::var(b.name), b.qual});
  return s;
}

TermPtr single_subst(const TermPtr& replacement, Qualifier q, const std::string& x,
                     const TermPtr& e, const Context& g) {
  Subst s = identity_subst(g);
  s.push_back({x, replacement, q});
  return apply_subst(s, e);
}

}  // namespace capcalc
