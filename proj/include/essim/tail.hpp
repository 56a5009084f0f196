#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "essim/dynamics.hpp"

namespace essim {

// The stabilized partition generating the tail sigma-algebra
// intersection_n T^{-n}A. Computed by iterated coarsening: each level's
// blocks are the distinct nonempty preimages of the previous level's blocks.
// A flat step is permanent because each level is a function of the previous
// one; every strict step loses at least one block, so depth <= #atoms.
struct TailAlgebra {
  std::vector<MSet> blocks;  // disjoint atom unions covering X, ordered by lowest atom
  int depth = 0;             // first n with the level-n partition equal to level n+1
};

TailAlgebra tail_algebra(const DynSystem& s);

// The tail-measurable hull: the smallest tail set containing A mod lambda,
// canonical representative. Computed two independent ways and compared: as
// the union of T^{-m} T-hat^m A over all m (decided exactly on the detected
// orbit structure), and as the union of tail-algebra blocks meeting A
// positively.
MSet tail_hull(const DynSystem& s, const MSet& a);

// A = tail_hull(A) mod lambda; cross-checked against A = T^{-n} T-hat^n A
// over the wrapped orbit range.
bool is_tail_set(const DynSystem& s, const MSet& a);

// T-hat^n A and T-hat^n B essentially disjoint for every n >= 0; decided over
// the detected orbit of the pair, cross-checked against disjointness of the
// tail hulls.
bool remain_separated(const DynSystem& s, const MSet& a, const MSet& b);

// The witness sets M_n = T-hat^n A of the separation definition, one per
// recorded orbit position.
std::vector<MSet> separation_witnesses(const DynSystem& s, const MSet& a);

// An eventually periodic sequence of measurable sets with A = T^{-n}A_n mod
// lambda for every n.
struct Corridor {
  MSet entrance;
  std::vector<MSet> pre;
  std::vector<MSet> period;  // nonempty

  const MSet& term(int n) const {
    if (n < int(pre.size())) return pre[std::size_t(n)];
    return period[std::size_t((n - int(pre.size())) % int(period.size()))];
  }
  int represented_terms() const { return int(pre.size() + period.size()); }
};

struct CorridorBounds {
  Corridor smallest;  // (T-hat^n A)_n
  Corridor largest;   // (T-hat^n A union (T-hat^n X)^c)_n
};

// Throws NotATailSet unless A is one.
CorridorBounds corridor_bounds(const DynSystem& s, const MSet& a);

// Is the given eventually periodic sequence a corridor with entrance A?
// Decided by the definition (A = T^{-n}A_n for every n, per-term preimage
// orbits covering all positions of each term) and by the sandwich
// T-hat^n A within A_n within T-hat^n A union (T-hat^n X)^c, both exact;
// the two must agree. Throws NotATailSet unless A is one.
bool corridor_verify(const DynSystem& s, const MSet& a, const std::vector<MSet>& pre,
                     const std::vector<MSet>& period);

struct AtomGrowth {
  MSet atom;
  Rat limit;  // mu(tail hull of the atom) = lim_n mu(T-hat^n atom)
};

struct ExactnessReport {
  bool exact = false;
  int tail_depth = 0;
  int positive_tail_blocks = 0;
  std::optional<std::pair<MSet, MSet>> separated_pair;  // witness when not exact

  bool limsup_full = false;
  std::optional<MSet> limsup_witness;  // positive atom whose image sizes stay small

  bool ergodic = false;
  // Right side of the separation criterion for exactness: ergodic, and no
  // positive set of the checked family remains separated from its essential
  // image.
  bool separation_criterion = false;
  std::optional<MSet> separation_criterion_witness;

  std::optional<std::vector<AtomGrowth>> image_growth;  // present iff mu was supplied
};

// Decides exactness from the tail algebra and cross-checks it three ways:
// no two positive atoms remain separated, every positive atom has full tail
// hull, and the separation criterion (ergodicity plus "A separated from
// T-hat A only for null A"). When an invariant probability density mu is
// supplied, also reports the exact limit of the nondecreasing image measures
// mu(T-hat^n a) per positive atom and checks that exactness is equivalent to
// all limits being 1. Throws NotAProbability / NotInvariant for a bad mu.
//
// The family for the separation criterion is every measurable set when
// 2^#atoms <= 1024; otherwise all positive atoms, the tail blocks and their
// complements and derived witnesses, plus a deterministic sample of atom
// unions. The block-derived witnesses keep the criterion equivalent to
// exactness even in the sampled regime: a non-exact ergodic system has a
// positive noninvariant tail block, whose derived set B = U intersect
// T^{-1}(T-hat U \ U) is a positive set separated from its image.
ExactnessReport exactness_report(const DynSystem& s,
                                 const std::optional<Density>& mu = std::nullopt);

}  // namespace essim
