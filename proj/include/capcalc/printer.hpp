#pragma once

#include <string>

#include "capcalc/syntax.hpp"

namespace capcalc {

std::string print_type(const TypePtr& t);
std::string print_term(const TermPtr& e);
std::string quote_string(const std::string& s);

}  // namespace capcalc
