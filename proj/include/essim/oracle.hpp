#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "essim/map.hpp"

namespace essim {

// Brute-force reference implementations by exhaustive enumeration over all
// measurable sets. These are transcriptions of the definitions and touch
// only measure_core primitives (measure, preimage, mod-lambda relations,
// point-map iterates); they deliberately share no code with the polynomial
// paths in images/dynamics/tail — the independence is what makes the
// cross-checks meaningful. Enumeration is capped at 2^20 sets (TooLarge).

constexpr int kOracleAtomCap = 20;
constexpr int kOraclePairAtomCap = 10;  // pair modes enumerate 4^n pairs

// The lambda'-minimal measurable support of the pushforward of lambda
// restricted to the payload: enumerate all codomain sets, keep the supports,
// return the canonical version of the minimal one (unique mod lambda').
MSet oracle_minimal_support(const MeasurableMap& t, const MSet& payload);

// All sets with A = T^{-1}A mod lambda, in mask order.
std::vector<MSet> oracle_invariant_sets(const MeasurableMap& endo);
// All sets with A within T^{-1}A mod lambda.
std::vector<MSet> oracle_forward_invariant_sets(const MeasurableMap& endo);

// A positive-measure wandering set if one exists (first in mask order).
std::optional<MSet> oracle_wandering_search(const MeasurableMap& endo);

struct OracleTailSets {
  std::vector<MSet> sets;  // every A equal mod lambda to a member of the tail algebra
  int depth = 0;
};
// Membership in intersection_n T^{-n}A decided from the definition: the
// sigma-algebras T^{-n}A are materialized as families of sets and
// intersected until the family stabilizes.
OracleTailSets oracle_tail_sets(const MeasurableMap& endo);

// Definition-level separation of one pair: for every n (decided over the
// cycle of the point-map iterates T^n) there must be a witness set M with
// A within T^{-n}M and B within T^{-n}M^c, both mod lambda. The maximal
// candidate M — the union of codomain atoms whose n-step preimage misses B
// mod lambda — decides existence.
bool oracle_remain_separated(const MeasurableMap& endo, const MSet& a, const MSet& b);

// All ordered pairs (A, B) of positive sets that remain separated, A < B in
// mask order. Capped at kOraclePairAtomCap atoms.
std::vector<std::pair<MSet, MSet>> oracle_separated_pairs(const MeasurableMap& endo);

// The maximal set with a nonsingular restriction: enumerate the sets that
// are forward invariant with lambda|_A o (T|_A)^{-1} equivalent to
// lambda|_A, and take their union (closed under unions by definition
// chasing).
MSet oracle_nonsingular_max(const MeasurableMap& endo);

}  // namespace essim
