#pragma once

#include "capcalc/syntax.hpp"

namespace capcalc {

struct subst_error : error {
  subst_error(std::string var, const std::string& msg) : error(msg), var(std::move(var)) {}
  std::string var;
};

// rightmost entry wins; throws subst_error when absent
TermPtr subst_lookup(const Subst& s, const std::string& name);

// Simultaneous substitution. Binders always rename: every lambda and let box
// picks a fresh primed name, box bodies see the purified substitution.
TermPtr apply_subst(const Subst& s, const TermPtr& e);

// identity substitution for g (each variable maps to itself, same qualifier)
Subst identity_subst(const Context& g);

// [replacement/x]e over the identity substitution for g
TermPtr single_subst(const TermPtr& replacement, Qualifier q, const std::string& x,
                     const TermPtr& e, const Context& g);

}  // namespace capcalc
