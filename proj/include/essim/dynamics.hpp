#pragma once

#include <optional>
#include <vector>

#include "essim/images.hpp"

namespace essim {

// An endomap system: a null-preserving map of a space into itself, measurable
// with respect to the same partition.
class DynSystem {
 public:
  static DynSystem create(MeasurableMap endomap);

  const SpacePtr& space() const { return map_.domain(); }
  const MeasurableMap& map() const { return map_; }

  MSet image(const MSet& a) const { return essential_image(map_, a); }
  MSet preimage(const MSet& a) const { return map_.preimage(a); }

 private:
  explicit DynSystem(MeasurableMap m) : map_(std::move(m)) {}
  MeasurableMap map_;
};

// Orbit of a deterministic self-map on a finite value space, recorded until
// the first exact repeat. values[0..preperiod+period) are pairwise distinct;
// the value at index preperiod+period would equal values[preperiod]. Every
// later term of the infinite orbit equals one of the recorded cycle values,
// which is what makes "for all n" and "lim sup" decidable on the record.
template <class T>
struct Orbit {
  std::vector<T> values;
  int preperiod = 0;
  int period = 0;

  int length() const { return preperiod + period; }
  const T& term(int n) const {
    if (n < length()) return values[std::size_t(n)];
    return values[std::size_t(preperiod + (n - preperiod) % period)];
  }
};

template <class T, class Step>
Orbit<T> detect_orbit(T start, Step step) {
  Orbit<T> orbit;
  orbit.values.push_back(std::move(start));
  for (;;) {
    T next = step(orbit.values.back());
    for (std::size_t k = 0; k < orbit.values.size(); ++k) {
      if (orbit.values[k] == next) {
        orbit.preperiod = int(k);
        orbit.period = int(orbit.values.size() - k);
        return orbit;
      }
    }
    orbit.values.push_back(std::move(next));
  }
}

// Orbit of T-hat^n A (canonical sets).
Orbit<MSet> image_orbit(const DynSystem& s, const MSet& a);
// Orbit of T^{-n} A (exact sets).
Orbit<MSet> preimage_orbit(const DynSystem& s, const MSet& a);

enum class InvKind { forward, full };

// forward: A included in T^{-1}A mod lambda; full: A = T^{-1}A mod lambda.
// Both the preimage route and the essential-image route of the
// characterization are computed and compared.
bool invariance_check(const DynSystem& s, const MSet& a, InvKind kind);

enum class HullKind { forward, invariant };

// Least (forward) invariant set containing A mod lambda, as a canonical
// representative. Forward hulls close A under the essential image; invariant
// hulls additionally close under preimages. A flat step ends each iteration:
// the step map is a function of the current set, so a repeat is permanent.
MSet hull(const DynSystem& s, const MSet& a, HullKind kind);

// The maximal nonsingular set, reached as the stabilized value of the
// decreasing chain T-hat^n X. The chain is strictly decreasing mod lambda
// until it stabilizes, so it takes at most #atoms steps.
struct NonsingularPart {
  MSet part;
  std::vector<MSet> chain;  // X, T-hat X, ..., stabilized value
};
NonsingularPart nonsingular_part(const DynSystem& s);

bool is_wandering(const DynSystem& s, const MSet& a);
bool is_recurrent(const DynSystem& s, const MSet& a);

struct Classification {
  bool nonsingular = false;
  bool conservative = false;
  bool ergodic = false;
  // Each false flag comes with a concrete witness.
  std::optional<MSet> nonsingular_witness;  // positive atom missed by the pushforward
  std::optional<MSet> wandering_witness;    // positive wandering atom
  std::optional<MSet> invariant_witness;    // nontrivial invariant set
};

// Per-atom reductions decide the three properties: a positive wandering set
// contains a positive wandering atom; every set is recurrent iff every
// positive atom is (union the per-atom recurrences); a nontrivial invariant
// set exists iff some positive atom's invariant hull has a positive
// complement. Conservativity is cross-checked against per-atom recurrence.
Classification classify(const DynSystem& s);

// Restriction of the system to a forward invariant set A. Points of A mapped
// outside A form a null set D = A intersect T^{-1}(A^c); whole null atoms of
// D are rerouted to a sink point chosen inside D (the first point, weight 0),
// which keeps the map total and atom-constant without changing anything mod
// lambda. Throws NotForwardInvariant when lambda(A \ T^{-1}A) > 0.
DynSystem restrict_system(const DynSystem& s, const MSet& a, const std::string& name);

// Smallest mass delta* that must be left out for the essential image to drop
// below 1 - epsilon:  min { lambda(A^c) : lambda(A) > 0, lambda(T-hat A) <
// 1 - epsilon }, by exhaustive enumeration; nullopt means no positive set
// violates the bound. Requires a nonsingular system with lambda(X) = 1.
// The empty set is excluded from the quantifier: its image is always null,
// and the guarantee "lambda(A) >= 1 - delta implies lambda(T-hat A) >= 1 -
// epsilon" never involves it for delta < 1.
std::optional<Rat> image_size_modulus(const DynSystem& s, const Rat& epsilon);

constexpr int kEnumerationCap = 20;  // 2^20 subsets

}  // namespace essim
