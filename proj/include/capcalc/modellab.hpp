#pragma once

// Finite-model lab: capability spaces as finite carriers with a weight
// relation into a powerset of channels, weight-preserving maps between them,
// and brute-force checks of the categorical laws the calculus leans on
// (products, exponentials, the writer monad with its strength, the safety
// comonad, monad cancellation, the tensor-hom adjunction, and the exception
// and state monad variants).

#include "capcalc/report.hpp"
#include "capcalc/syntax.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace capcalc::model {

using Mask = std::uint32_t;

// Carrier elements are dense ids 0..size-1. weights[x] is the sorted,
// deduplicated family of admissible capability sets of element x; it is
// normally nonempty, but tensor products may leave an element with no
// admissible weight at all. Labels are for counterexample printing.
struct FinSpace {
    std::string name;
    Mask universe = 0;
    std::vector<std::vector<Mask>> weights;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(weights.size()); }
    bool weighted(int x, Mask c) const;
};

using SpacePtr = std::shared_ptr<const FinSpace>;

std::string render_mask(Mask m, const std::vector<std::string>& caps);

struct FinMap {
    SpacePtr dom;
    SpacePtr cod;
    std::vector<int> table;
};

// Empty result means the table is weight-preserving; otherwise a description
// of the first violated instance.
std::optional<std::string> hom_violation(const SpacePtr& dom, const SpacePtr& cod,
                                         const std::vector<int>& table);

// Constructor-checked hom. Throws capcalc::error when the table breaks the
// weight-preservation condition.
FinMap make_map(SpacePtr dom, SpacePtr cod, std::vector<int> table, const std::string& what);

FinMap compose(const FinMap& f, const FinMap& g); // f then g
FinMap identity_map(const SpacePtr& a);
bool map_equal(const FinMap& f, const FinMap& g);

// All weight-preserving tables dom -> cod. Throws when |cod|^|dom| exceeds
// the enumeration bound.
std::vector<std::vector<int>> enumerate_homs(const SpacePtr& dom, const SpacePtr& cod,
                                             long long bound = 2000000);

struct FinMonoid {
    std::string name;
    int size = 0;
    int id_elem = 0;
    std::vector<std::vector<int>> mul; // mul[a][b]
    std::vector<std::string> labels;

    int times(int a, int b) const { return mul[a][b]; }
    bool commutative() const;
};

// Throws on a broken associativity or identity law.
FinMonoid make_monoid(std::string name, int id_elem, std::vector<std::vector<int>> mul,
                      std::vector<std::string> labels);

FinMonoid monoid_trivial();
// Free monoid on `letters` generators, truncated at words of length maxlen;
// any longer product saturates to an absorbing sink element.
FinMonoid monoid_truncated_free(int letters, int maxlen);
FinMonoid monoid_trunc2(); // two letters, length two: the string-like instance
FinMonoid monoid_idem();   // {identity, e} with e*e = e

// Space constructors. Every carrier stays within the entry bound or the
// constructor throws.
inline constexpr long long kSpaceBound = 1000000;

SpacePtr space_terminal();
SpacePtr space_cap(const std::vector<std::string>& caps);
SpacePtr space_product(const SpacePtr& a, const SpacePtr& b);
SpacePtr space_exponential(const SpacePtr& a, const SpacePtr& b);
SpacePtr space_tensor(const SpacePtr& a, const SpacePtr& b);
SpacePtr space_linexp(const SpacePtr& a, const SpacePtr& b);

// Pair decoding for product-like carriers (product and tensor): id = ia*|B|+ib.
inline int pair_id(int ia, int ib, int bsize) { return ia * bsize + ib; }

// Function decoding for exponential-like carriers: entry i of table f is
// (id / |B|^i) % |B|.
int exp_apply(long long fid, int arg, int bsize);
long long exp_encode(const std::vector<int>& table, int bsize);

// The safety comonad on objects: the subspace of elements all of whose
// admissible weights are empty. embed[i] is the base-space id of box
// element i (the counit's table).
struct BoxSpace {
    SpacePtr space;
    std::vector<int> embed;
};
BoxSpace functor_box(const SpacePtr& a);

// Writer monad over a finite monoid stand-in for strings. Carrier is
// |A| * |M|^k where k is the number of channels in A's universe; the output
// component maps each channel to a monoid element.
struct TSpace {
    SpacePtr space;
    SpacePtr base;
    FinMonoid monoid;
    std::vector<int> channels; // universe bit positions, ascending

    int elem(int a, const std::vector<int>& out) const;
    int value_of(int t) const;
    std::vector<int> out_of(int t) const;
};
TSpace functor_T(const SpacePtr& a, const FinMonoid& m);

// Exception monad: carrier |A|+1, the extra element fails with weight
// {fail} on a fresh capability bit.
struct ExcSpace {
    SpacePtr space;
    SpacePtr base;
    Mask fail_bit = 0;
    int fail_id() const { return base->size(); }
};
ExcSpace functor_exception(const SpacePtr& a);

// State monad over a naive heap of `locs` locations holding `vals` values;
// capabilities are location sets, and an element's stored weights are the
// minimal admissible read/write footprints.
struct StateSpace {
    SpacePtr space;
    SpacePtr base;
    int locs = 0;
    int vals = 0;
    int heaps = 0; // vals^locs

    int elem(const std::vector<std::pair<int, int>>& table) const; // per-heap (a, h')
    std::pair<int, int> apply(long long fid, int h) const;
};
StateSpace functor_state(const SpacePtr& a, int locs, int vals);

// Law checks. Each is complete over its finite domain: a passing line means
// no counterexample exists at that size.
std::vector<SuiteLine> check_ccc(const SpacePtr& a, const SpacePtr& b, const SpacePtr& c,
                                 const std::vector<std::string>& caps, const std::string& tag);
std::vector<SuiteLine> check_tensor_hom(const SpacePtr& a, const SpacePtr& b, const SpacePtr& c,
                                        const std::vector<std::string>& caps,
                                        const std::string& tag);
std::vector<SuiteLine> check_monad(const SpacePtr& a, const SpacePtr& b, const FinMonoid& m,
                                   const std::vector<std::string>& caps, const std::string& tag);
std::vector<SuiteLine> check_comonad(const SpacePtr& a, const SpacePtr& b,
                                     const std::vector<std::string>& caps, const std::string& tag);
std::vector<SuiteLine> check_cancellation(const SpacePtr& a, const FinMonoid& m,
                                          const std::vector<std::string>& caps,
                                          const std::string& tag);
std::vector<SuiteLine> check_exception(const SpacePtr& a, const std::vector<std::string>& caps,
                                       const std::string& tag);
std::vector<SuiteLine> check_state(const SpacePtr& a, int locs, int vals, const std::string& tag);
std::vector<SuiteLine> check_functoriality(const SpacePtr& a, const SpacePtr& b, const SpacePtr& c,
                                           const FinMonoid& m, const std::string& tag);

// Closed programs of first-order type evaluated by the interpreter must land
// on an admissible weight of the corresponding writer-monad element.
std::vector<SuiteLine> check_interp_coherence(std::uint64_t seed, int programs);

struct ModelOptions {
    std::uint64_t seed = 7;
    int caps = 2;
    int max_carrier = 3;
    std::string monoid = "trunc2"; // trivial | trunc2 | idem
};

std::vector<SuiteLine> run_model_suite(const ModelOptions& opts);

} // namespace capcalc::model
