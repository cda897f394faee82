#pragma once

#include <optional>
#include <string>

#include "capcalc/syntax.hpp"

namespace capcalc {

struct TypeError {
  enum class Kind {
    Unbound,       // variable not in context
    ImpureInSafe,  // impure variable (or channel literal) used in a safe position
    Mismatch,      // expected/got disagree
    NotFunction,
    NotProduct,
    NotBox,
  };
  Kind kind = Kind::Mismatch;
  std::string name;           // Unbound/ImpureInSafe variable
  TypePtr expected;           // Mismatch
  TypePtr got;                // Mismatch/NotFunction/NotProduct/NotBox
  TermPtr at;                 // offending occurrence
  std::string detail;
  std::string message() const;
};

struct type_error : error {
  explicit type_error(TypeError info);
  TypeError info;
};

// rightmost binding wins
const Binding* lookup_binding(const Context& g, const std::string& name);

TypePtr infer(const Context& g, const TermPtr& e);       // throws type_error
TypePtr infer_safe(const Context& g, const TermPtr& e);  // the safe judgement

std::optional<TypePtr> try_infer(const Context& g, const TermPtr& e,
                                 TypeError* err = nullptr);
std::optional<TypePtr> try_infer_safe(const Context& g, const TermPtr& e,
                                      TypeError* err = nullptr);

// d must be a subsequence of g with identical entries
bool check_weakening(const Context& g, const Context& d);

// well-formedness of a substitution from g to d: entries align positionally,
// safe entries are safe-typed in g, impure entries are values typed in g
bool check_subst(const Context& g, const Subst& s, const Context& d,
                 std::string* reason = nullptr);

}  // namespace capcalc
