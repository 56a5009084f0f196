#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "essim/bits.hpp"
#include "essim/rat.hpp"

namespace essim {

class Space;
using SpacePtr = std::shared_ptr<const Space>;

// A finite measure space with a partition sigma-algebra: weighted points plus
// an ordered partition of the points into atoms. Immutable after creation;
// identity (the shared_ptr) is what ties MSets and maps to their space.
class Space {
 public:
  struct Block {
    std::string name;
    std::vector<std::string> points;
  };

  // Points keep input order; all atoms default to singletons unless blocks
  // are given, in which case the blocks must partition the points exactly.
  // Throws DuplicatePoint / NegativeWeight / PartitionOverlap / PartitionGap.
  static SpacePtr create(std::string name, std::vector<std::pair<std::string, Rat>> points,
                         std::vector<Block> blocks = {});

  const std::string& name() const { return name_; }
  int point_count() const { return int(points_.size()); }
  int atom_count() const { return int(atoms_.size()); }

  const std::string& point_name(int p) const { return points_[std::size_t(p)]; }
  const Rat& point_weight(int p) const { return point_weights_[std::size_t(p)]; }
  int atom_of_point(int p) const { return atom_of_[std::size_t(p)]; }

  const std::vector<int>& atom_points(int a) const { return atoms_[std::size_t(a)]; }
  const std::string& atom_name(int a) const { return atom_names_[std::size_t(a)]; }
  const Rat& atom_weight(int a) const { return atom_weights_[std::size_t(a)]; }
  bool atom_is_null(int a) const { return atom_weights_[std::size_t(a)].is_zero(); }

  const Rat& total_weight() const { return total_; }
  const Bits& positive_atoms() const { return positive_atoms_; }
  Bits full_atom_mask() const;
  Bits full_point_mask() const;

  std::optional<int> find_point(std::string_view id) const;
  std::optional<int> find_atom(std::string_view id) const;

  // Same point set and atom structure, weights scaled by c > 0 (or replaced).
  SpacePtr rescaled(const Rat& factor) const;
  SpacePtr with_weights(std::vector<Rat> point_weights, std::string name) const;

 private:
  Space() = default;

  std::string name_;
  std::vector<std::string> points_;
  std::vector<Rat> point_weights_;
  std::vector<std::vector<int>> atoms_;
  std::vector<std::string> atom_names_;
  std::vector<int> atom_of_;
  std::vector<Rat> atom_weights_;
  Rat total_;
  Bits positive_atoms_;
  std::unordered_map<std::string, int> point_index_;
  std::unordered_map<std::string, int> atom_index_;
};

// A measurable set: a set of atom indices of one space.
struct MSet {
  SpacePtr space;
  Bits atoms;

  bool contains_atom(int a) const { return atoms.test(a); }
};

MSet mset_empty(const SpacePtr& s);
MSet mset_full(const SpacePtr& s);
MSet mset_of_atoms(const SpacePtr& s, const std::vector<int>& atom_indices);
MSet mset_of_mask(const SpacePtr& s, const Bits& mask);
// Resolves atom names; throws UnknownIdentifier.
MSet mset_of_names(const SpacePtr& s, const std::vector<std::string>& atom_names);

void require_same_space(const MSet& a, const MSet& b);

Rat measure(const MSet& a);

// lambda(A) = 0.
bool ae_null(const MSet& a);
// lambda(A \ B) = 0.
bool ae_subset(const MSet& a, const MSet& b);
// lambda(A symmetric-difference B) = 0.
bool ae_equal(const MSet& a, const MSet& b);

// The representative of [A] mod lambda containing no null atoms.
MSet canonical(const MSet& a);

MSet set_union(const MSet& a, const MSet& b);
MSet set_intersect(const MSet& a, const MSet& b);
MSet set_diff(const MSet& a, const MSet& b);
MSet set_complement(const MSet& a);

// Exact point-level sets; needed because set-theoretic images of measurable
// sets are in general not atom unions.
struct PointSet {
  SpacePtr space;
  Bits points;
};

Rat point_weight_sum(const PointSet& s);
bool is_atom_union(const PointSet& s);
// Smallest atom union containing the point set.
MSet measurable_hull(const PointSet& s);
PointSet realize_points(const MSet& a);

// Sorted-by-atom-index display, "a b c" with the space's atom names; empty
// set renders as the empty-set symbol.
std::string format_atom_set(const MSet& a);
std::string format_point_set(const PointSet& s);

}  // namespace essim
