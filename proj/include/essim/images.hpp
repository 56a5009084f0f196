#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "essim/map.hpp"

namespace essim {

// The essential image of A under T: the lambda'-minimal measurable support of
// the pushforward of lambda restricted to A. Computed directly as
//   { codomain atoms a' : lambda(A intersect T^{-1}a') > 0 },
// which is canonical (never contains a null atom).
MSet essential_image(const MeasurableMap& t, const MSet& a);

// Pushforward mass per codomain atom of lambda restricted to A.
std::vector<Rat> pushforward(const MeasurableMap& t, const MSet& a);

// A density with respect to lambda: one nonnegative rational per atom.
// Canonical form vanishes on null atoms (densities are only determined a.e.).
class Density {
 public:
  Density(SpacePtr space, std::vector<Rat> per_atom);

  static Density indicator(const MSet& a);
  static Density zero(const SpacePtr& s);

  const SpacePtr& space() const { return space_; }
  const Rat& value(int atom) const { return value_[std::size_t(atom)]; }
  const std::vector<Rat>& values() const { return value_; }

  // integral of f . u dlambda for a per-atom test function f (vector indexed
  // by atom); with f = 1 this is the total mass.
  Rat integrate(const std::vector<Rat>& f) const;
  Rat total_mass() const;
  // The measure with this density, evaluated on an MSet.
  Rat measure_of(const MSet& a) const;

  MSet support() const;

 private:
  SpacePtr space_;
  std::vector<Rat> value_;
};

// The transfer operator: the density of (u . lambda) o T^{-1} with respect to
// lambda'. Exact; 0/0 on null codomain atoms is defined as 0 (canonical
// version). Satisfies the duality  int (f' o T) u dlambda = int f' (Tu) dlambda'
// exactly for every per-atom f'.
Density transfer_density(const MeasurableMap& t, const Density& u);

// { Tu(1_A) > 0 }; equals essential_image(t, a) exactly, and that equality is
// asserted at runtime (the two routes are independent).
MSet essential_image_via_transfer(const MeasurableMap& t, const MSet& a);

// Comparison of the essential image with the set-theoretic image T(A).
struct ImageReport {
  PointSet set_image;       // exact T(A)
  bool is_measurable;       // is T(A) an atom union?
  MSet hull;                // smallest atom union containing T(A)
  MSet essential;           // essential image of A
  MSet normal_version;      // A_o = A intersect T^{-1}(essential image)
};

ImageReport set_image_report(const MeasurableMap& t, const MSet& a);

// The union N of all null domain atoms is ambitious iff the measurable hull
// of T(N) has positive measure (T(N) need not be measurable, so the test uses
// outer measure; the two agree whenever T(N) is measurable). Maximality of N
// makes this a complete test: any ambitious null set is contained in N.
std::optional<MSet> find_ambitious_null_set(const MeasurableMap& t);

// Restriction of T to the union of positive-weight domain atoms. The removed
// set is null, so the restricted map is a version of T mod lambda, and its
// only null measurable set is the empty set: no ambitious null sets remain.
MeasurableMap purge_ambitious_null_sets(const MeasurableMap& t);

// lambda o T^{-1} ~ lambda', i.e. the essential image of the whole domain is
// the whole codomain mod lambda'. Returns the first positive codomain atom
// missed by the pushforward when the answer is no.
struct NonsingularCheck {
  bool nonsingular;
  std::optional<MSet> missed_atom;
};
NonsingularCheck map_nonsingular(const MeasurableMap& t);

// A candidate set operator given as a full table over every subset of the
// domain atoms (2^n entries, atom masks as row indices). Intended for small
// n; construction rejects more than kMaxTableAtoms atoms.
class SetOperatorTable {
 public:
  static constexpr int kMaxTableAtoms = 16;

  // entries[mask] = codomain atom mask of the candidate image of the set with
  // the given atom mask. Throws TableIncomplete / TooManyAtoms.
  SetOperatorTable(SpacePtr domain, SpacePtr codomain, std::vector<std::uint64_t> entries);

  // The table of the essential-image operator itself.
  static SetOperatorTable of_essential_image(const MeasurableMap& t);

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }
  std::uint64_t entry(std::uint64_t mask) const { return entries_[std::size_t(mask)]; }
  std::size_t size() const { return entries_.size(); }

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<std::uint64_t> entries_;
};

enum class ImageAxiom {
  positivity,      // lambda(A) > 0  iff  lambda'(TA) > 0
  monotonicity,    // A included in B mod lambda implies TA included in TB mod lambda'
  retraction,      // T(T^{-1}B') included in B' mod lambda'
};

struct AxiomViolation {
  ImageAxiom axiom;
  std::uint64_t set_a;   // domain atom mask
  std::uint64_t set_b;   // second set of the pair (domain mask for
                         // monotonicity, codomain mask for retraction)
};

struct AxiomCheckResult {
  bool ok;
  std::optional<AxiomViolation> witness;  // first failure in canonical order
};

// Checks the three axioms that characterize the essential-image operator. If
// all hold, the candidate agrees with the essential image mod lambda' on
// every set; that implication is asserted before returning ok.
//
// Monotonicity is decided by (a) consistency under stripping null atoms and
// (b) one-positive-atom extensions, which together are equivalent to the full
// pairwise quantifier: A included in B mod lambda iff A minus nulls is a
// subset of B minus nulls, and subset chains on null-free masks are chains of
// single-atom extensions.
AxiomCheckResult verify_image_axioms(const MeasurableMap& t, const SetOperatorTable& candidate);

}  // namespace essim
