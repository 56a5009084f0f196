#include "essim/map.hpp"

namespace essim {

MeasurableMap MeasurableMap::create(SpacePtr domain, SpacePtr codomain,
                                    std::vector<int> point_image) {
  if (int(point_image.size()) != domain->point_count())
    fail(Errc::InvalidMap, "point image must cover every domain point");
  for (int q : point_image)
    if (q < 0 || q >= codomain->point_count())
      fail(Errc::InvalidMap, "point image leaves the codomain");

  MeasurableMap t;
  t.domain_ = std::move(domain);
  t.codomain_ = std::move(codomain);
  t.point_image_ = std::move(point_image);

  // Measurability: the codomain atom of the image is constant on each domain
  // atom.
  t.atom_image_.assign(std::size_t(t.domain_->atom_count()), -1);
  for (int a = 0; a < t.domain_->atom_count(); ++a) {
    int target = -1;
    for (int p : t.domain_->atom_points(a)) {
      int q = t.codomain_->atom_of_point(t.point_image_[std::size_t(p)]);
      if (target == -1) target = q;
      if (q != target)
        fail(Errc::NotMeasurable, "domain atom '" + t.domain_->atom_name(a) +
                                      "' is split by the preimage partition");
    }
    t.atom_image_[std::size_t(a)] = target;
  }

  t.atom_preimage_.assign(std::size_t(t.codomain_->atom_count()), Bits(t.domain_->atom_count()));
  for (int a = 0; a < t.domain_->atom_count(); ++a)
    t.atom_preimage_[std::size_t(t.atom_image_[std::size_t(a)])].set(a);

  // Null preservation: lambda o T^{-1} << lambda'.
  for (int ca = 0; ca < t.codomain_->atom_count(); ++ca) {
    if (!t.codomain_->atom_is_null(ca)) continue;
    Rat mass(0);
    t.atom_preimage_[std::size_t(ca)].for_each([&](int a) { mass += t.domain_->atom_weight(a); });
    if (mass.is_positive())
      fail(Errc::NotNullPreserving, "null codomain atom '" + t.codomain_->atom_name(ca) +
                                        "' has a preimage of measure " + mass.str());
  }
  return t;
}

MSet MeasurableMap::preimage(const MSet& b) const {
  require_codomain(*this, b);
  Bits out(domain_->atom_count());
  b.atoms.for_each([&](int ca) { out |= atom_preimage_[std::size_t(ca)]; });
  return MSet{domain_, out};
}

PointSet MeasurableMap::image_points(const MSet& a) const {
  require_domain(*this, a);
  Bits out(codomain_->point_count());
  a.atoms.for_each([&](int atom) {
    for (int p : domain_->atom_points(atom)) out.set(point_image_[std::size_t(p)]);
  });
  return PointSet{codomain_, out};
}

MeasurableMap compose(const MeasurableMap& outer, const MeasurableMap& inner) {
  if (inner.codomain() != outer.domain())
    fail(Errc::SpaceMismatch, "composition requires matching middle space");
  std::vector<int> image(std::size_t(inner.domain()->point_count()), 0);
  for (int p = 0; p < inner.domain()->point_count(); ++p)
    image[std::size_t(p)] = outer.image_point(inner.image_point(p));
  return MeasurableMap::create(inner.domain(), outer.codomain(), std::move(image));
}

MeasurableMap endomap_power(const MeasurableMap& t, int n) {
  if (t.domain() != t.codomain()) fail(Errc::SpaceMismatch, "powers need an endomap");
  if (n < 0) fail(Errc::InvalidMap, "negative power");
  std::vector<int> image(std::size_t(t.domain()->point_count()), 0);
  for (int p = 0; p < t.domain()->point_count(); ++p) image[std::size_t(p)] = p;
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < t.domain()->point_count(); ++p)
      image[std::size_t(p)] = t.image_point(image[std::size_t(p)]);
  return MeasurableMap::create(t.domain(), t.codomain(), std::move(image));
}

MeasurableMap restrict_domain(const MeasurableMap& t, const MSet& kept, const std::string& name) {
  require_domain(t, kept);
  const SpacePtr& dom = t.domain();
  std::vector<std::pair<std::string, Rat>> points;
  std::vector<Space::Block> blocks;
  kept.atoms.for_each([&](int a) {
    Space::Block b;
    b.name = dom->atom_name(a);
    for (int p : dom->atom_points(a)) {
      points.emplace_back(dom->point_name(p), dom->point_weight(p));
      b.points.push_back(dom->point_name(p));
    }
    blocks.push_back(std::move(b));
  });
  SpacePtr sub = Space::create(name, std::move(points), std::move(blocks));
  std::vector<int> image(std::size_t(sub->point_count()), 0);
  for (int p = 0; p < sub->point_count(); ++p) {
    int orig = *dom->find_point(sub->point_name(p));
    image[std::size_t(p)] = t.image_point(orig);
  }
  return MeasurableMap::create(sub, t.codomain(), std::move(image));
}

void require_domain(const MeasurableMap& t, const MSet& a) {
  if (a.space != t.domain()) fail(Errc::SpaceMismatch, "set does not live on the map's domain");
}

void require_codomain(const MeasurableMap& t, const MSet& b) {
  if (b.space != t.codomain()) fail(Errc::SpaceMismatch, "set does not live on the map's codomain");
}

}  // namespace essim
