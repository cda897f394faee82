#pragma once

// Simply-typed lambda calculus sidecar: a minimal pure CBV calculus together
// with the embedding into the capability calculus (arrows become boxed-domain
// arrows) and the annotation-erasing reverse translation.

#include "capcalc/gen.hpp"
#include "capcalc/syntax.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace capcalc::stlc {

struct SType;
using STypePtr = std::shared_ptr<const SType>;

struct SType {
    enum class Kind { Unit, Arrow };
    Kind kind;
    STypePtr left;
    STypePtr right;
};

namespace sty {
STypePtr unit();
STypePtr arrow(STypePtr dom, STypePtr cod);
} // namespace sty

bool stype_equal(const STypePtr& a, const STypePtr& b);
std::string print_stype(const STypePtr& t);

struct STerm;
using STermPtr = std::shared_ptr<const STerm>;

struct STerm {
    enum class Kind { Unit, Var, Lam, App };
    Kind kind;
    std::string name;   // Var, Lam binder
    STypePtr annot;     // Lam
    STermPtr a;         // Lam body, App fn
    STermPtr b;         // App arg
};

namespace stm {
STermPtr unit();
STermPtr var(std::string name);
STermPtr lam(std::string name, STypePtr annot, STermPtr body);
STermPtr app(STermPtr fn, STermPtr arg);
} // namespace stm

bool sterm_equal(const STermPtr& a, const STermPtr& b);
std::string print_sterm(const STermPtr& e);

using SContext = std::vector<std::pair<std::string, STypePtr>>;

// Throws capcalc::error on ill-typed input.
STypePtr stlc_infer(const SContext& g, const STermPtr& e);

std::vector<std::string> stlc_free_vars(const STermPtr& e);

// Capture-avoiding substitution [arg/x]e; binders are renamed when needed.
STermPtr stlc_subst(const STermPtr& arg, const std::string& x, const STermPtr& e);

// Big-step CBV evaluation of a closed term. Throws on fuel exhaustion or a
// stuck application (neither happens for well-typed closed terms).
STermPtr stlc_eval(const STermPtr& e, int fuel = 100000);

// Embedding: arrows acquire boxed domains, lambdas unbox their argument,
// applications box theirs. Embedded contexts bind everything safely.
TypePtr embed_type(const STypePtr& t);
Context embed_context(const SContext& g);
TermPtr embed_term(const STermPtr& e);

// Reverse translation. Base types collapse to unit, boxes vanish, prints
// become (), let box turns into an immediate application. Products have no
// reverse image and are rejected. The typing context supplies the binder
// annotation for the let box clause.
STypePtr unembed_type(const TypePtr& t);
SContext unembed_context(const Context& g);
STermPtr unembed_term(const Context& g, const TermPtr& e);

// Generators for suite sampling.
STypePtr gen_stype(Rng& rng, int depth);
STermPtr gen_sterm(Rng& rng, const SContext& g, const STypePtr& want, int size);
SContext gen_scontext(Rng& rng, int max_entries);

} // namespace capcalc::stlc
