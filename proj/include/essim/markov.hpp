#pragma once

#include <optional>
#include <string>
#include <vector>

#include "essim/images.hpp"

namespace essim {

// A finite-state Markov model: states, an initial distribution, and a
// transition matrix. Rows of states reachable with positive probability must
// be stochastic; unreachable rows are unconstrained until something uses
// them.
struct MarkovModel {
  std::vector<std::string> states;
  std::vector<Rat> init;
  std::vector<std::vector<Rat>> trans;

  int state_count() const { return int(states.size()); }
};

// Throws InvalidModel with a diagnostic.
void validate_model(const MarkovModel& m);

// init . P == init, exactly.
bool is_stationary(const MarkovModel& m);

// The positive-entry digraph is strongly connected.
bool is_irreducible(const MarkovModel& m);

// States reachable with positive probability from the initial distribution.
std::vector<bool> reachable_states(const MarkovModel& m);

// The unique invariant probability of an irreducible matrix, solved exactly;
// nullopt when the linear system is singular (reducible matrices).
std::optional<std::vector<Rat>> stationary_distribution(const MarkovModel& m);

// The depth-m cylinder model of the shift: the domain space carries all words
// of length m with the Markov product weights, the codomain all words of
// length m-1, and the map drops the first symbol. Null preservation of the
// map is exactly absolute continuity of the one-step evolved law with
// respect to the (m-1)-marginal; a violation names the offending word.
struct CylinderSystem {
  int depth;
  SpacePtr domain;
  SpacePtr codomain;
  MeasurableMap map;
};

// Throws InvalidDepth for m < 2 (a depth-0 codomain would carry the trivial
// algebra), InvalidModel, NotNullPreserving(word), TooLarge for absurd word
// counts.
CylinderSystem build_cylinder_system(const MarkovModel& m, int depth);

// Number of words and index arithmetic for the word spaces (atom index =
// word in base #states, first symbol most significant).
std::vector<int> decode_word(const MarkovModel& m, int length, int index);
int encode_word(const MarkovModel& m, const std::vector<int>& symbols);
std::string word_name(const MarkovModel& m, const std::vector<int>& symbols);

// All domain words extending the given prefix of symbols.
MSet cylinder_set(const MarkovModel& m, const CylinderSystem& c, const std::vector<int>& prefix);

// Essential image of a union of word atoms under the drop-first-symbol map.
MSet cylinder_image(const CylinderSystem& c, const MSet& a);

struct StateFormulaCheck {
  int state;
  bool support_ok;
  MSet computed;  // cylinder image of [state]
  MSet expected;  // positive words starting with a state j with P(state, j) > 0
  // One row per target state j with p_j > 0: the exact transfer coefficient
  // p_i p_{i,j} / p_j next to the coefficient p_{i,j} / p_j printed in the
  // source formula. The two differ by the constant factor p_i; the transfer
  // density equals the exact coefficient on every positive word, which is
  // asserted, while the support statement holds for both.
  struct Coefficient {
    int target;
    Rat exact;
    Rat printed;
  };
  std::vector<Coefficient> coefficients;
};

struct MarkovFormulaReport {
  int depth;
  std::vector<StateFormulaCheck> per_state;
  bool all_support_ok;
};

// Requires a stationary (NotStationary) irreducible (NotIrreducible) model
// and depth >= 2.
MarkovFormulaReport verify_markov_formulas(const MarkovModel& m, int depth);

}  // namespace essim
