#pragma once

// Seeded random generation of types, contexts, well-typed terms, and closing
// substitutions. Generation is deterministic for a fixed seed: bounded ints
// come straight off the engine rather than through distribution objects.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "capcalc/syntax.hpp"

namespace capcalc {

struct Rng {
  explicit Rng(uint64_t seed) : eng(seed) {}
  std::mt19937_64 eng;
  uint64_t next() { return eng(); }
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n)); }
  bool chance(int num, int den) { return below(den) < num; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(static_cast<int>(v.size()))];
  }
  // independent stream for a subtask
  Rng fork(uint64_t salt) { return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ULL)); }
};

// closing substitutions draw channels from a fixed pool c0..c3
inline constexpr int kChannelPool = 4;
std::string pool_channel(int i);

// value_ok permits cap in value positions (leaves, product components,
// arrow domains); box payloads and arrow codomains stay cap-free so every
// generated type admits the closed inhabitants the harness needs.
TypePtr gen_type(Rng& rng, int depth, bool value_ok);

// safe slots get cap-free types, impure slots get value_ok types
Context gen_closable_context(Rng& rng, int n);

std::optional<TermPtr> gen_term(Rng& rng, const Context& g, const TypePtr& t, int size);
std::optional<TermPtr> gen_value_term(Rng& rng, const Context& g, const TypePtr& t, int size);
// closed syntactic value; cap positions are filled from the channel pool
std::optional<TermPtr> gen_closed_value(Rng& rng, const TypePtr& t, int size);
// closed chanlit-free term (fits safe substitution slots)
std::optional<TermPtr> gen_safe_closed(Rng& rng, const TypePtr& t, int size);
std::optional<Subst> gen_closing_subst(Rng& rng, const Context& g);

}  // namespace capcalc
