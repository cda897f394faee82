#include "capcalc/weights.hpp"

namespace capcalc {

box_weight_violation::box_weight_violation(CapSet w)
    : error("box payload has nonempty weight " + render_cap_set(w)),
      payload_weight(std::move(w)) {}

CapSet weight_of_value(const ValuePtr& v) {
  switch (v->kind) {
    case Value::Kind::Unit:
    case Value::Kind::Str:
      return {};
    case Value::Kind::Chan:
      return {v->text};
    case Value::Kind::Pair:
      return cap_union(weight_of_value(v->a), weight_of_value(v->b));
    case Value::Kind::Closure: {
      CapSet w;
      for (const auto& e : v->captured) {
        CapSet part = weight_of_value(e.value);
        w.insert(part.begin(), part.end());
      }
      return w;
    }
    case Value::Kind::Box: {
      CapSet payload = weight_of_value(v->a);
      if (!payload.empty()) throw box_weight_violation(std::move(payload));
      return {};
    }
  }
  return {};
}

CapSet weight_of_output(const Output& o) {
  CapSet w;
  for (const auto& [chan, text] : o)
    if (!text.empty()) w.insert(chan);
  return w;
}

CapSet cap_union(const CapSet& a, const CapSet& b) {
  CapSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

bool cap_subset(const CapSet& a, const CapSet& b) {
  for (const auto& x : a)
    if (!b.count(x)) return false;
  return true;
}

std::string render_cap_set(const CapSet& s) {
  std::string out = "{";
  bool sep = false;
  for (const auto& c : s) {
    if (sep) out += ", ";
    sep = true;
    out += c;
  }
  return out + "}";
}

WeighResult weigh_program(const SourceFile& src,
                          const std::map<std::string, std::string>& bindings,
                          const EvalOptions& opts) {
  RunResult r = run_source(src, bindings, opts);
  return {weight_of_value(r.value), weight_of_output(r.output)};
}

}  // namespace capcalc
