#pragma once

#include <string>
#include <utility>
#include <vector>

#include "essim/dynamics.hpp"
#include "essim/markov.hpp"

namespace essim {

// The named systems used across tests and shipped as files under fixtures/.

// X = {0,1} with the point mass at 0 and T == 0: the textbook ambitious
// null set {1}.
DynSystem fixture_ex1a();

// X = {0,1} with counting measure and T == 0: a tail set whose essential
// image is not a tail set.
DynSystem fixture_count2();

// Three points of weight 1, rotation x -> x+1 mod 3.
DynSystem fixture_rot3();

// Points 1,2,3 with weights 1/4,1/4,1/2 and T == 3.
DynSystem fixture_collapse();

// The grid family: points (m,n) for 1 <= m <= n <= N plus (1,0) and (0,0),
// counting measure, T(m,n) = (m-1,n) for m > 1, T(1,n) = (1,0) for n >= 1,
// T(1,0) = T(0,0) = (0,0). Its nonsingular part is {(0,0)} while the chain
// of full images passes through {(1,0),(0,0)}.
DynSystem fixture_grid(int n);

// The identity between two copies of a two-point space where the codomain
// carries the trivial partition {X}: the set image of one point is not
// measurable even though the map is.
MeasurableMap fixture_identity_to_trivial();

// I = {1,2}, P = [[1/2,1/2],[1,0]], stationary init (2/3, 1/3).
MarkovModel fixture_markov2();

// Identity transition matrix on two states, uniform init: stationary but
// reducible; each depth-1 class is closed.
MarkovModel fixture_csmc_a();

// Three states, uniform init, rows (1,0,0), (0,1,0), (1/2,1/2,0): the
// compiled depth-2 system is null-preserving but not nonsingular, with the
// words starting at state 2 as witness.
MarkovModel fixture_csmc_b();

// All endomap fixtures with their conventional names, for sweep tests.
std::vector<std::pair<std::string, DynSystem>> endomap_fixtures();

}  // namespace essim
