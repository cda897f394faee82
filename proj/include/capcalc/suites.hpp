#pragma once

// Property-suite runners behind the `laws` subcommand. Each returns its
// pass/fail lines in canonical order; identical options give identical lines.

#include <cstdint>
#include <optional>
#include <vector>

#include "capcalc/equational.hpp"
#include "capcalc/report.hpp"

namespace capcalc {

// Generates a random instance of r satisfying its side conditions, or
// nullopt when the dice land on an ungeneratable shape (callers retry).
std::optional<EqInstance> gen_eq_instance(Rule r, Rng& rng);

struct EqSuiteOptions {
  uint64_t seed = 7;
  int instances = 200;  // per rule
};

// Per-rule soundness instances, congruence wrappers, the side-condition
// regressions, and beta-normalization termination on the embedded image.
std::vector<SuiteLine> run_eq_suite(const EqSuiteOptions& opts);

struct EmbedSuiteOptions {
  uint64_t seed = 7;
  int instances = 500;  // beta/eta pairs; typing runs 4x this
};

// Typing preservation, type/context round trips, beta-eta preservation,
// ground-observation round trips, erasure, and the conservativity smoke.
std::vector<SuiteLine> run_embed_suite(const EmbedSuiteOptions& opts);

}  // namespace capcalc
