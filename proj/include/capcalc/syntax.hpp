#pragma once

// Abstract syntax for the capability calculus: types, terms, contexts,
// substitutions, and the two evaluation-context grammars.

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace capcalc {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Qualifier { Safe, Impure };

inline const char* qualifier_name(Qualifier q) {
  return q == Qualifier::Safe ? "s" : "i";
}

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Unit, Str, Cap, Prod, Arrow, Box };
  Kind kind;
  TypePtr left;   // Prod/Arrow left, Box payload
  TypePtr right;  // Prod/Arrow right
};

namespace ty {
TypePtr unit();
TypePtr str();
TypePtr cap();
TypePtr prod(TypePtr a, TypePtr b);
TypePtr arrow(TypePtr a, TypePtr b);
TypePtr boxed(TypePtr a);
}  // namespace ty

bool type_equal(const TypePtr& a, const TypePtr& b);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Chan is the runtime-only channel literal: the parser never produces it,
// it enters terms through harness-side closing substitutions.
struct Term {
  enum class Kind { Unit, Str, Chan, Var, Lam, App, Pair, Fst, Snd, Print, Box, LetBox };
  Kind kind;
  std::string name;  // Str text, Chan channel, Var name, Lam/LetBox binder
  TypePtr annot;     // Lam annotation
  TermPtr a;         // Lam body, App fun, Pair left, Fst/Snd/Box body, Print channel, LetBox scrutinee
  TermPtr b;         // App arg, Pair right, Print string, LetBox body
  int pos = -1;      // byte offset in source; -1 for synthesized terms
};

namespace tm {
TermPtr unit(int pos = -1);
TermPtr str(std::string text, int pos = -1);
TermPtr chan(std::string channel);
TermPtr var(std::string name, int pos = -1);
TermPtr lam(std::string param, TypePtr annot, TermPtr body, int pos = -1);
TermPtr app(TermPtr fn, TermPtr arg, int pos = -1);
TermPtr pair(TermPtr left, TermPtr right, int pos = -1);
TermPtr fst(TermPtr e, int pos = -1);
TermPtr snd(TermPtr e, int pos = -1);
TermPtr print(TermPtr channel, TermPtr text, int pos = -1);
TermPtr box(TermPtr body, int pos = -1);
TermPtr let_box(std::string binder, TermPtr scrutinee, TermPtr body, int pos = -1);
// e1 ; e2 desugars to (fun x: unit -> e2) e1 with x fresh for e2
TermPtr seq(TermPtr e1, TermPtr e2, int pos = -1);
}  // namespace tm

struct Binding {
  std::string name;
  TypePtr type;
  Qualifier qual;
};
using Context = std::vector<Binding>;

struct SubstEntry {
  std::string name;
  TermPtr term;
  Qualifier qual;
};
using Subst = std::vector<SubstEntry>;

bool is_value(const TermPtr& e);
Context purify_context(const Context& g);
Subst purify_subst(const Subst& s);
std::set<std::string> free_vars(const TermPtr& e);
bool contains_chan_literal(const TermPtr& e);

// strict structural equality (names matter)
bool term_equal(const TermPtr& a, const TermPtr& b);
// equality modulo bound-variable names
bool alpha_equal(const TermPtr& a, const TermPtr& b);

// Fresh names are <root>'<n> where root is base with any existing '<n>
// suffix stripped and n exceeds every suffix that appears in avoid.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

size_t term_size(const TermPtr& e);

// Evaluation contexts. Safe contexts may place the hole under binders
// (lambda bodies, box bodies); impure contexts may not, and require the
// sibling already be a value in the three left-of-evaluation positions
// (E v, (E, v), let box x = v in E).
enum class CtxKind { Safe, Impure };

struct EvalCtx;
using EvalCtxPtr = std::shared_ptr<const EvalCtx>;

struct EvalCtx {
  enum class Frame {
    Hole,
    AppFun,       // inner applied to side:  C e   /  E v
    AppArg,       // side applied to inner:  e C   /  e E
    LamBody,      // safe only
    FstF,
    SndF,
    PairLeft,     // (C, e)  /  (E, v)
    PairRight,    // (e, C)  /  (e, E)
    BoxBody,      // safe only
    LetBoxScrut,  // let box binder = C in side
    LetBoxBody,   // let box binder = side in C
  };
  Frame frame = Frame::Hole;
  EvalCtxPtr inner;    // subcontext containing the hole
  TermPtr side;        // sibling term where the frame has one
  std::string binder;  // LamBody/LetBoxScrut/LetBoxBody
  TypePtr annot;       // LamBody
};

namespace ec {
EvalCtxPtr hole();
EvalCtxPtr app_fun(EvalCtxPtr inner, TermPtr arg);
EvalCtxPtr app_arg(TermPtr fn, EvalCtxPtr inner);
EvalCtxPtr lam_body(std::string param, TypePtr annot, EvalCtxPtr inner);
EvalCtxPtr fst(EvalCtxPtr inner);
EvalCtxPtr snd(EvalCtxPtr inner);
EvalCtxPtr pair_left(EvalCtxPtr inner, TermPtr right);
EvalCtxPtr pair_right(TermPtr left, EvalCtxPtr inner);
EvalCtxPtr box_body(EvalCtxPtr inner);
EvalCtxPtr let_box_scrut(std::string binder, EvalCtxPtr inner, TermPtr body);
EvalCtxPtr let_box_body(std::string binder, TermPtr scrutinee, EvalCtxPtr inner);
}  // namespace ec

bool ctx_well_formed(const EvalCtxPtr& c, CtxKind kind);
TermPtr plug(const EvalCtxPtr& c, const TermPtr& e);

}  // namespace capcalc
