#pragma once

#include <set>
#include <string>

#include "capcalc/interp.hpp"

namespace capcalc {

using CapSet = std::set<std::string>;

struct box_weight_violation : error {
  explicit box_weight_violation(CapSet payload_weight);
  CapSet payload_weight;
};

// Static weight of a value: channels {c}, pairs union, closures the union
// over the captured environment, boxes empty (payload must weigh nothing).
CapSet weight_of_value(const ValuePtr& v);

// channels with nonempty output
CapSet weight_of_output(const Output& o);

CapSet cap_union(const CapSet& a, const CapSet& b);
bool cap_subset(const CapSet& a, const CapSet& b);
std::string render_cap_set(const CapSet& s);

struct WeighResult {
  CapSet value_weight;
  CapSet effect_weight;
};

WeighResult weigh_program(const SourceFile& src,
                          const std::map<std::string, std::string>& bindings,
                          const EvalOptions& opts = {});

}  // namespace capcalc
