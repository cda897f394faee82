#include "capcalc/gen.hpp"

#include "capcalc/typecheck.hpp"

namespace capcalc {

std::string pool_channel(int i) { return "c" + std::to_string(i % kChannelPool); }

TypePtr gen_type(Rng& rng, int depth, bool value_ok) {
  if (depth <= 0 || rng.chance(2, 5)) {
    int leaf = rng.below(value_ok ? 4 : 3);
    switch (leaf) {
      case 0:
      case 1: return ty::unit();
      case 2: return ty::str();
      default: return ty::cap();
    }
  }
  switch (rng.below(4)) {
    case 0:
      return ty::prod(gen_type(rng, depth - 1, value_ok), gen_type(rng, depth - 1, value_ok));
    case 1:
      // domains may mention cap freely; codomains keep the parent's policy
      return ty::arrow(gen_type(rng, depth - 1, true), gen_type(rng, depth - 1, value_ok));
    case 2:
      return ty::boxed(gen_type(rng, depth - 1, false));
    default:
      return gen_type(rng, depth - 1, value_ok);
  }
}

Context gen_closable_context(Rng& rng, int n) {
  Context g;
  for (int i = 0; i < n; ++i) {
    bool safe = rng.chance(1, 3);
    g.push_back({"x" + std::to_string(i), gen_type(rng, 2, !safe),
                 safe ? Qualifier::Safe : Qualifier::Impure});
  }
  return g;
}

namespace {

const std::vector<std::string>& string_pool() {
  static std::vector<std::string> pool = {"", "a", "b", "ab", "hello"};
  return pool;
}

std::string gen_binder(Rng& rng, const Context& g) {
  static const std::vector<std::string> names = {"x", "y", "z", "f", "g", "p"};
  std::string base = rng.pick(names);
  std::set<std::string> used;
  for (const auto& b : g) used.insert(b.name);
  if (!used.count(base)) return base;
  return fresh_name(base, used);
}

// can a cap value be projected out of some binding in g?
bool type_yields_cap(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Cap: return true;
    case Type::Kind::Prod: return type_yields_cap(t->left) || type_yields_cap(t->right);
    case Type::Kind::Box: return type_yields_cap(t->left);
    default: return false;
  }
}

bool cap_reachable(const Context& g) {
  for (const auto& b : g)
    if (type_yields_cap(b.type)) return true;
  return false;
}

TypePtr small_type(Rng& rng) { return gen_type(rng, 1, false); }

// Shared search budget: the retry loop in gen_at would otherwise compound
// across recursion levels and blow up on uninhabited corners (cap with no
// capability in scope). One unit per gen_at entry.
struct Fuel {
  int left;
};

std::optional<TermPtr> gen_at(Rng& rng, const Context& g, const TypePtr& t, int size,
                              bool values_only, Fuel& fuel);

std::optional<TermPtr> gen_intro(Rng& rng, const Context& g, const TypePtr& t, int size,
                                 bool values_only, Fuel& fuel) {
  switch (t->kind) {
    case Type::Kind::Unit:
      return tm::unit();
    case Type::Kind::Str:
      return tm::str(rng.pick(string_pool()));
    case Type::Kind::Cap:
      return std::nullopt;  // no introduction form
    case Type::Kind::Prod: {
      auto a = gen_at(rng, g, t->left, size / 2, values_only, fuel);
      if (!a) return std::nullopt;
      auto b = gen_at(rng, g, t->right, size / 2, values_only, fuel);
      if (!b) return std::nullopt;
      return tm::pair(*a, *b);
    }
    case Type::Kind::Arrow: {
      std::string x = gen_binder(rng, g);
      Context g2 = g;
      g2.push_back({x, t->left, Qualifier::Impure});
      auto body = gen_at(rng, g2, t->right, size - 1, false, fuel);
      if (!body) return std::nullopt;
      return tm::lam(x, t->left, *body);
    }
    case Type::Kind::Box: {
      auto body = gen_at(rng, purify_context(g), t->left, size - 1, false, fuel);
      if (!body) return std::nullopt;
      return tm::box(*body);
    }
  }
  return std::nullopt;
}

std::optional<TermPtr> gen_var(Rng& rng, const Context& g, const TypePtr& t) {
  std::vector<const Binding*> hits;
  for (const auto& b : g)
    if (type_equal(b.type, t)) hits.push_back(&b);
  if (hits.empty()) return std::nullopt;
  return tm::var(hits[rng.below(static_cast<int>(hits.size()))]->name);
}

std::optional<TermPtr> gen_elim(Rng& rng, const Context& g, const TypePtr& t, int size,
                                Fuel& fuel) {
  switch (rng.below(5)) {
    case 0: {  // application
      TypePtr dom = g.empty() || rng.chance(1, 2) ? small_type(rng)
                                                  : g[rng.below(static_cast<int>(g.size()))].type;
      auto fn = gen_at(rng, g, ty::arrow(dom, t), size / 2, false, fuel);
      if (!fn) return std::nullopt;
      auto arg = gen_at(rng, g, dom, size / 2, false, fuel);
      if (!arg) return std::nullopt;
      return tm::app(*fn, *arg);
    }
    case 1: {  // fst
      auto e = gen_at(rng, g, ty::prod(t, small_type(rng)), size - 1, false, fuel);
      if (!e) return std::nullopt;
      return tm::fst(*e);
    }
    case 2: {  // snd
      auto e = gen_at(rng, g, ty::prod(small_type(rng), t), size - 1, false, fuel);
      if (!e) return std::nullopt;
      return tm::snd(*e);
    }
    case 3: {  // let box
      TypePtr payload = small_type(rng);
      auto scrut = gen_at(rng, g, ty::boxed(payload), size / 2, false, fuel);
      if (!scrut) return std::nullopt;
      std::string x = gen_binder(rng, g);
      Context g2 = g;
      g2.push_back({x, payload, Qualifier::Safe});
      auto body = gen_at(rng, g2, t, size / 2, false, fuel);
      if (!body) return std::nullopt;
      return tm::let_box(x, *scrut, *body);
    }
    default: {  // print
      if (t->kind != Type::Kind::Unit || !cap_reachable(g)) return std::nullopt;
      auto chan = gen_at(rng, g, ty::cap(), size / 2, false, fuel);
      if (!chan) return std::nullopt;
      auto text = gen_at(rng, g, ty::str(), size / 2, false, fuel);
      if (!text) return std::nullopt;
      return tm::print(*chan, *text);
    }
  }
}

std::optional<TermPtr> gen_at(Rng& rng, const Context& g, const TypePtr& t, int size,
                              bool values_only, Fuel& fuel) {
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (--fuel.left < 0) return std::nullopt;
    std::optional<TermPtr> out;
    if (size <= 1) {
      out = rng.chance(1, 2) ? gen_var(rng, g, t) : std::nullopt;
      if (!out) out = gen_intro(rng, g, t, 0, values_only, fuel);
      if (!out) out = gen_var(rng, g, t);
    } else {
      switch (rng.below(values_only ? 2 : 3)) {
        case 0: out = gen_var(rng, g, t); break;
        case 1: out = gen_intro(rng, g, t, size, values_only, fuel); break;
        default: out = gen_elim(rng, g, t, size, fuel); break;
      }
    }
    if (out) return out;
  }
  return std::nullopt;
}

constexpr int kGenFuel = 3000;

}  // namespace

std::optional<TermPtr> gen_term(Rng& rng, const Context& g, const TypePtr& t, int size) {
  Fuel fuel{kGenFuel};
  return gen_at(rng, g, t, size, false, fuel);
}

std::optional<TermPtr> gen_value_term(Rng& rng, const Context& g, const TypePtr& t, int size) {
  Fuel fuel{kGenFuel};
  return gen_at(rng, g, t, size, true, fuel);
}

std::optional<TermPtr> gen_closed_value(Rng& rng, const TypePtr& t, int size) {
  switch (t->kind) {
    case Type::Kind::Unit:
      return tm::unit();
    case Type::Kind::Str:
      return tm::str(rng.pick(string_pool()));
    case Type::Kind::Cap:
      return tm::chan(pool_channel(rng.below(kChannelPool)));
    case Type::Kind::Prod: {
      auto a = gen_closed_value(rng, t->left, size / 2);
      auto b = gen_closed_value(rng, t->right, size / 2);
      if (!a || !b) return std::nullopt;
      return tm::pair(*a, *b);
    }
    case Type::Kind::Arrow: {
      // bodies come from the cap-free generator, so closures close over
      // nothing; channel arguments still flow in through the parameter
      Context g;
      g.push_back({"x", t->left, Qualifier::Impure});
      Fuel fuel{kGenFuel};
      auto body = gen_at(rng, g, t->right, size - 1, false, fuel);
      if (!body) return std::nullopt;
      return tm::lam("x", t->left, *body);
    }
    case Type::Kind::Box: {
      Fuel fuel{kGenFuel};
      auto body = gen_at(rng, Context{}, t->left, size - 1, false, fuel);
      if (!body) return std::nullopt;
      return tm::box(*body);
    }
  }
  return std::nullopt;
}

std::optional<TermPtr> gen_safe_closed(Rng& rng, const TypePtr& t, int size) {
  Fuel fuel{kGenFuel};
  return gen_at(rng, Context{}, t, size, false, fuel);
}

std::optional<Subst> gen_closing_subst(Rng& rng, const Context& g) {
  Subst s;
  for (const auto& b : g) {
    if (b.qual == Qualifier::Safe) {
      auto e = gen_safe_closed(rng, b.type, 3);
      if (!e) return std::nullopt;
      s.push_back({b.name, *e, Qualifier::Safe});
    } else {
      auto v = gen_closed_value(rng, b.type, 3);
      if (!v) return std::nullopt;
      s.push_back({b.name, *v, Qualifier::Impure});
    }
  }
  return s;
}

}  // namespace capcalc
