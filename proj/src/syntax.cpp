#include "capcalc/syntax.hpp"

#include <algorithm>
#include <map>

namespace capcalc {

namespace ty {

static TypePtr leaf(Type::Kind k) {
  return std::make_shared<Type>(Type{k, nullptr, nullptr});
}

TypePtr unit() {
  static TypePtr t = leaf(Type::Kind::Unit);
  return t;
}
TypePtr str() {
  static TypePtr t = leaf(Type::Kind::Str);
  return t;
}
TypePtr cap() {
  static TypePtr t = leaf(Type::Kind::Cap);
  return t;
}
TypePtr prod(TypePtr a, TypePtr b) {
  return std::make_shared<Type>(Type{Type::Kind::Prod, std::move(a), std::move(b)});
}
TypePtr arrow(TypePtr a, TypePtr b) {
  return std::make_shared<Type>(Type{Type::Kind::Arrow, std::move(a), std::move(b)});
}
TypePtr boxed(TypePtr a) {
  return std::make_shared<Type>(Type{Type::Kind::Box, std::move(a), nullptr});
}

}  // namespace ty

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Unit:
    case Type::Kind::Str:
    case Type::Kind::Cap:
      return true;
    case Type::Kind::Box:
      return type_equal(a->left, b->left);
    case Type::Kind::Prod:
    case Type::Kind::Arrow:
      return type_equal(a->left, b->left) && type_equal(a->right, b->right);
  }
  return false;
}

namespace tm {

static TermPtr make(Term t) { return std::make_shared<Term>(std::move(t)); }

TermPtr unit(int pos) { return make({Term::Kind::Unit, "", nullptr, nullptr, nullptr, pos}); }
TermPtr str(std::string text, int pos) {
  return make({Term::Kind::Str, std::move(text), nullptr, nullptr, nullptr, pos});
}
TermPtr chan(std::string channel) {
  return make({Term::Kind::Chan, std::move(channel), nullptr, nullptr, nullptr, -1});
}
TermPtr var(std::string name, int pos) {
  return make({Term::Kind::Var, std::move(name), nullptr, nullptr, nullptr, pos});
}
TermPtr lam(std::string param, TypePtr annot, TermPtr body, int pos) {
  return make({Term::Kind::Lam, std::move(param), std::move(annot), std::move(body), nullptr, pos});
}
TermPtr app(TermPtr fn, TermPtr arg, int pos) {
  return make({Term::Kind::App, "", nullptr, std::move(fn), std::move(arg), pos});
}
TermPtr pair(TermPtr left, TermPtr right, int pos) {
  return make({Term::Kind::Pair, "", nullptr, std::move(left), std::move(right), pos});
}
TermPtr fst(TermPtr e, int pos) {
  return make({Term::Kind::Fst, "", nullptr, std::move(e), nullptr, pos});
}
TermPtr snd(TermPtr e, int pos) {
  return make({Term::Kind::Snd, "", nullptr, std::move(e), nullptr, pos});
}
TermPtr print(TermPtr channel, TermPtr text, int pos) {
  return make({Term::Kind::Print, "", nullptr, std::move(channel), std::move(text), pos});
}
TermPtr box(TermPtr body, int pos) {
  return make({Term::Kind::Box, "", nullptr, std::move(body), nullptr, pos});
}
TermPtr let_box(std::string binder, TermPtr scrutinee, TermPtr body, int pos) {
  return make({Term::Kind::LetBox, std::move(binder), nullptr, std::move(scrutinee),
               std::move(body), pos});
}

TermPtr seq(TermPtr e1, TermPtr e2, int pos) {
  auto avoid = free_vars(e2);
  std::string x = avoid.count("_u") ? fresh_name("_u", avoid) : "_u";
  return app(lam(x, ty::unit(), std::move(e2), pos), std::move(e1), pos);
}

}  // namespace tm

bool is_value(const TermPtr& e) {
  switch (e->kind) {
    case Term::Kind::Unit:
    case Term::Kind::Str:
    case Term::Kind::Chan:
    case Term::Kind::Var:
    case Term::Kind::Lam:
    case Term::Kind::Box:
      return true;
    case Term::Kind::Pair:
      return is_value(e->a) && is_value(e->b);
    default:
      return false;
  }
}

Context purify_context(const Context& g) {
  Context out;
  for (const auto& b : g)
    if (b.qual == Qualifier::Safe) out.push_back(b);
  return out;
}

Subst purify_subst(const Subst& s) {
  Subst out;
  for (const auto& e : s)
    if (e.qual == Qualifier::Safe) out.push_back(e);
  return out;
}

static void free_vars_into(const TermPtr& e, std::set<std::string>& bound,
                           std::set<std::string>& out) {
  switch (e->kind) {
    case Term::Kind::Unit:
    case Term::Kind::Str:
    case Term::Kind::Chan:
      return;
    case Term::Kind::Var:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case Term::Kind::Lam: {
      bool fresh = bound.insert(e->name).second;
      free_vars_into(e->a, bound, out);
      if (fresh) bound.erase(e->name);
      return;
    }
    case Term::Kind::LetBox: {
      free_vars_into(e->a, bound, out);
      bool fresh = bound.insert(e->name).second;
      free_vars_into(e->b, bound, out);
      if (fresh) bound.erase(e->name);
      return;
    }
    case Term::Kind::App:
    case Term::Kind::Pair:
    case Term::Kind::Print:
      free_vars_into(e->a, bound, out);
      free_vars_into(e->b, bound, out);
      return;
    case Term::Kind::Fst:
    case Term::Kind::Snd:
    case Term::Kind::Box:
      free_vars_into(e->a, bound, out);
      return;
  }
}

std::set<std::string> free_vars(const TermPtr& e) {
  std::set<std::string> bound, out;
  free_vars_into(e, bound, out);
  return out;
}

bool contains_chan_literal(const TermPtr& e) {
  if (e->kind == Term::Kind::Chan) return true;
  if (e->a && contains_chan_literal(e->a)) return true;
  if (e->b && contains_chan_literal(e->b)) return true;
  return false;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if ((a->annot == nullptr) != (b->annot == nullptr)) return false;
  if (a->annot && !type_equal(a->annot, b->annot)) return false;
  if ((a->a == nullptr) != (b->a == nullptr)) return false;
  if (a->a && !term_equal(a->a, b->a)) return false;
  if ((a->b == nullptr) != (b->b == nullptr)) return false;
  if (a->b && !term_equal(a->b, b->b)) return false;
  return true;
}

namespace {

// de Bruijn style comparison: each binder pushes its name onto the scope
// used for its own side, variables compare by matching depth.
bool alpha_eq(const TermPtr& a, const TermPtr& b, std::vector<std::string>& sa,
              std::vector<std::string>& sb) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Unit:
      return true;
    case Term::Kind::Str:
    case Term::Kind::Chan:
      return a->name == b->name;
    case Term::Kind::Var: {
      for (size_t i = sa.size(); i-- > 0;) {
        bool hita = sa[i] == a->name;
        bool hitb = sb[i] == b->name;
        if (hita || hitb) return hita && hitb;
      }
      return a->name == b->name;  // both free
    }
    case Term::Kind::Lam: {
      if (!type_equal(a->annot, b->annot)) return false;
      sa.push_back(a->name);
      sb.push_back(b->name);
      bool ok = alpha_eq(a->a, b->a, sa, sb);
      sa.pop_back();
      sb.pop_back();
      return ok;
    }
    case Term::Kind::LetBox: {
      if (!alpha_eq(a->a, b->a, sa, sb)) return false;
      sa.push_back(a->name);
      sb.push_back(b->name);
      bool ok = alpha_eq(a->b, b->b, sa, sb);
      sa.pop_back();
      sb.pop_back();
      return ok;
    }
    case Term::Kind::App:
    case Term::Kind::Pair:
    case Term::Kind::Print:
      return alpha_eq(a->a, b->a, sa, sb) && alpha_eq(a->b, b->b, sa, sb);
    case Term::Kind::Fst:
    case Term::Kind::Snd:
    case Term::Kind::Box:
      return alpha_eq(a->a, b->a, sa, sb);
  }
  return false;
}

}  // namespace

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  std::vector<std::string> sa, sb;
  return alpha_eq(a, b, sa, sb);
}

static std::pair<std::string, long> split_suffix(const std::string& name) {
  auto tick = name.rfind('\'');
  if (tick == std::string::npos || tick + 1 >= name.size()) return {name, 0};
  for (size_t i = tick + 1; i < name.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(name[i]))) return {name, 0};
  return {name.substr(0, tick), std::stol(name.substr(tick + 1))};
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  auto [root, n] = split_suffix(base);
  long maxn = n;
  for (const auto& a : avoid) {
    auto [aroot, an] = split_suffix(a);
    if (aroot == root) maxn = std::max(maxn, an);
  }
  return root + "'" + std::to_string(maxn + 1);
}

size_t term_size(const TermPtr& e) {
  size_t n = 1;
  if (e->a) n += term_size(e->a);
  if (e->b) n += term_size(e->b);
  return n;
}

namespace ec {

static EvalCtxPtr make(EvalCtx c) { return std::make_shared<EvalCtx>(std::move(c)); }

EvalCtxPtr hole() {
  static EvalCtxPtr h = make({});
  return h;
}
EvalCtxPtr app_fun(EvalCtxPtr inner, TermPtr arg) {
  return make({EvalCtx::Frame::AppFun, std::move(inner), std::move(arg), "", nullptr});
}
EvalCtxPtr app_arg(TermPtr fn, EvalCtxPtr inner) {
  return make({EvalCtx::Frame::AppArg, std::move(inner), std::move(fn), "", nullptr});
}
EvalCtxPtr lam_body(std::string param, TypePtr annot, EvalCtxPtr inner) {
  return make({EvalCtx::Frame::LamBody, std::move(inner), nullptr, std::move(param),
               std::move(annot)});
}
EvalCtxPtr fst(EvalCtxPtr inner) {
  return make({EvalCtx::Frame::FstF, std::move(inner), nullptr, "", nullptr});
}
EvalCtxPtr snd(EvalCtxPtr inner) {
  return make({EvalCtx::Frame::SndF, std::move(inner), nullptr, "", nullptr});
}
EvalCtxPtr pair_left(EvalCtxPtr inner, TermPtr right) {
  return make({EvalCtx::Frame::PairLeft, std::move(inner), std::move(right), "", nullptr});
}
EvalCtxPtr pair_right(TermPtr left, EvalCtxPtr inner) {
  return make({EvalCtx::Frame::PairRight, std::move(inner), std::move(left), "", nullptr});
}
EvalCtxPtr box_body(EvalCtxPtr inner) {
  return make({EvalCtx::Frame::BoxBody, std::move(inner), nullptr, "", nullptr});
}
EvalCtxPtr let_box_scrut(std::string binder, EvalCtxPtr inner, TermPtr body) {
  return make({EvalCtx::Frame::LetBoxScrut, std::move(inner), std::move(body),
               std::move(binder), nullptr});
}
EvalCtxPtr let_box_body(std::string binder, TermPtr scrutinee, EvalCtxPtr inner) {
  return make({EvalCtx::Frame::LetBoxBody, std::move(inner), std::move(scrutinee),
               std::move(binder), nullptr});
}

}  // namespace ec

bool ctx_well_formed(const EvalCtxPtr& c, CtxKind kind) {
  switch (c->frame) {
    case EvalCtx::Frame::Hole:
      return true;
    case EvalCtx::Frame::LamBody:
    case EvalCtx::Frame::BoxBody:
      if (kind == CtxKind::Impure) return false;
      return ctx_well_formed(c->inner, kind);
    case EvalCtx::Frame::AppFun:
    case EvalCtx::Frame::PairLeft:
    case EvalCtx::Frame::LetBoxBody:
      if (kind == CtxKind::Impure && !is_value(c->side)) return false;
      return ctx_well_formed(c->inner, kind);
    case EvalCtx::Frame::AppArg:
    case EvalCtx::Frame::FstF:
    case EvalCtx::Frame::SndF:
    case EvalCtx::Frame::PairRight:
    case EvalCtx::Frame::LetBoxScrut:
      return ctx_well_formed(c->inner, kind);
  }
  return false;
}

TermPtr plug(const EvalCtxPtr& c, const TermPtr& e) {
  switch (c->frame) {
    case EvalCtx::Frame::Hole:
      return e;
    case EvalCtx::Frame::AppFun:
      return tm::app(plug(c->inner, e), c->side);
    case EvalCtx::Frame::AppArg:
      return tm::app(c->side, plug(c->inner, e));
    case EvalCtx::Frame::LamBody:
      return tm::lam(c->binder, c->annot, plug(c->inner, e));
    case EvalCtx::Frame::FstF:
      return tm::fst(plug(c->inner, e));
    case EvalCtx::Frame::SndF:
      return tm::snd(plug(c->inner, e));
    case EvalCtx::Frame::PairLeft:
      return tm::pair(plug(c->inner, e), c->side);
    case EvalCtx::Frame::PairRight:
      return tm::pair(c->side, plug(c->inner, e));
    case EvalCtx::Frame::BoxBody:
      return tm::box(plug(c->inner, e));
    case EvalCtx::Frame::LetBoxScrut:
      return tm::let_box(c->binder, plug(c->inner, e), c->side);
    case EvalCtx::Frame::LetBoxBody:
      return tm::let_box(c->binder, c->side, plug(c->inner, e));
  }
  throw error("plug: bad frame");
}

}  // namespace capcalc
