#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "capcalc/gen.hpp"
#include "capcalc/syntax.hpp"

namespace capcalc {

// the nine non-congruence equations
enum class Rule {
  BetaProd1,
  BetaProd2,
  EtaProd,
  BetaArrow,
  EtaArrowImpure,
  EtaArrowSafe,
  BetaBox,
  EtaBoxSafe,
  EtaBoxImpure,
};

const char* rule_slug(Rule r);

// If e matches r's left-hand side and the side conditions hold in g, returns
// the right-hand side (capture-avoiding). The box-eta rules need an
// evaluation context and go through eta_box_expand instead.
std::optional<TermPtr> try_rule(Rule r, const TermPtr& e, const Context& g);

// Builds `let box x = e in C<box x>` and validates the box-eta side
// conditions: the context matches kind, e is box-typed (safe-typed for the
// safe kind), and both sides typecheck at one type. Throws error otherwise.
TermPtr eta_box_expand(CtxKind kind, const EvalCtxPtr& c, const TermPtr& e, const Context& g);

// One checkable equation: both sides typecheck at ty in ctx. witness carries
// rule-specific provenance (for the box-eta rules, the evaluation context
// rendered with [] at the hole).
struct EqInstance {
  Context ctx;
  TermPtr lhs;
  TermPtr rhs;
  TypePtr ty;
  Rule rule;
  std::string witness;
};

enum class Verdict { Equal, Distinguished, Exhausted };

struct DenotOptions {
  int closings = 6;  // closing substitutions sampled
  int fn_args = 4;   // arguments sampled per function comparison
  int arg_size = 3;
};

struct DenotResult {
  Verdict verdict;
  std::string witness;  // nonempty iff Distinguished
};

// Test-based denotational comparison: closes g, evaluates both sides,
// compares outputs exactly and values type-directedly (functions by sampled
// application). Equal means no disagreement was found; Exhausted means not a
// single comparison could be run.
DenotResult denot_equal(const Context& g, const TermPtr& e1, const TermPtr& e2, const TypePtr& t,
                        uint64_t seed, const DenotOptions& opts = {});

struct NormalizeResult {
  TermPtr term;
  int steps = 0;
  bool fuel_exhausted = false;
};

// Applies the four beta rules at the unique position the impure context
// grammar permits (arguments before functions, right pair components before
// left, let-box scrutinees before bodies) until no redex remains or fuel
// runs out. Never rewrites under lambda, box, or print.
NormalizeResult rewrite_normalize(const Context& g, const TermPtr& e, int fuel);

}  // namespace capcalc
