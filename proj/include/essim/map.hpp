#pragma once

#include <string>
#include <vector>

#include "essim/space.hpp"

namespace essim {

// A measurable, null-preserving point map between two spaces. Construction
// validates both properties exactly:
//   measurable       — every domain atom maps into a single codomain atom
//                      (equivalently, preimages of codomain atoms are atom
//                      unions);
//   null-preserving  — preimages of null codomain atoms are null.
class MeasurableMap {
 public:
  // point_image[p] is the codomain point index of the image of domain point p.
  // Throws NotMeasurable / NotNullPreserving naming the offending atom.
  static MeasurableMap create(SpacePtr domain, SpacePtr codomain, std::vector<int> point_image);

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }

  int image_point(int p) const { return point_image_[std::size_t(p)]; }
  int atom_image(int a) const { return atom_image_[std::size_t(a)]; }
  const Bits& atom_preimage_mask(int codomain_atom) const {
    return atom_preimage_[std::size_t(codomain_atom)];
  }

  // Exact set-theoretic preimage; an atom union by measurability. Commutes
  // exactly (not just mod lambda) with complement and finite unions and
  // intersections.
  MSet preimage(const MSet& b) const;

  // Exact set-theoretic image T(A) as a point set (not measurable in general).
  PointSet image_points(const MSet& a) const;

 private:
  MeasurableMap() = default;

  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<int> point_image_;
  std::vector<int> atom_image_;
  std::vector<Bits> atom_preimage_;
};

// outer . inner, validated like any other map.
MeasurableMap compose(const MeasurableMap& outer, const MeasurableMap& inner);

// n-fold self-composition of an endomap (n >= 0; n = 0 is the identity).
MeasurableMap endomap_power(const MeasurableMap& t, int n);

// Restriction of the domain to a set of atoms. Points of the kept atoms map
// as before; the codomain is unchanged. The restricted space keeps point and
// atom order.
MeasurableMap restrict_domain(const MeasurableMap& t, const MSet& kept, const std::string& name);

void require_domain(const MeasurableMap& t, const MSet& a);
void require_codomain(const MeasurableMap& t, const MSet& b);

}  // namespace essim
