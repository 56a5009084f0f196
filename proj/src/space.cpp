#include "essim/space.hpp"

#include <algorithm>

namespace essim {

SpacePtr Space::create(std::string name, std::vector<std::pair<std::string, Rat>> points,
                       std::vector<Block> blocks) {
  auto space = std::shared_ptr<Space>(new Space());
  space->name_ = std::move(name);

  for (auto& [id, w] : points) {
    if (space->point_index_.count(id))
      fail(Errc::DuplicatePoint, "point '" + id + "' declared twice in space '" + space->name_ + "'");
    if (w.is_negative())
      fail(Errc::NegativeWeight, "point '" + id + "' has weight " + w.str());
    space->point_index_.emplace(id, int(space->points_.size()));
    space->points_.push_back(id);
    space->point_weights_.push_back(w);
  }

  std::vector<int> atom_of(space->points_.size(), -1);
  if (blocks.empty()) {
    for (int p = 0; p < space->point_count(); ++p) {
      space->atoms_.push_back({p});
      space->atom_names_.push_back(space->points_[std::size_t(p)]);
      atom_of[std::size_t(p)] = p;
    }
  } else {
    for (auto& block : blocks) {
      if (block.points.empty())
        fail(Errc::PartitionGap, "atom '" + block.name + "' is empty");
      std::vector<int> members;
      for (auto& id : block.points) {
        auto p = space->find_point(id);
        if (!p) fail(Errc::UnknownIdentifier, "atom '" + block.name + "' uses unknown point '" + id + "'");
        if (atom_of[std::size_t(*p)] != -1)
          fail(Errc::PartitionOverlap, "point '" + id + "' appears in two atoms");
        atom_of[std::size_t(*p)] = int(space->atoms_.size());
        members.push_back(*p);
      }
      space->atoms_.push_back(std::move(members));
      space->atom_names_.push_back(block.name);
    }
    for (int p = 0; p < space->point_count(); ++p)
      if (atom_of[std::size_t(p)] == -1)
        fail(Errc::PartitionGap, "point '" + space->points_[std::size_t(p)] + "' belongs to no atom");
  }
  space->atom_of_ = std::move(atom_of);

  space->positive_atoms_ = Bits(space->atom_count());
  space->total_ = Rat(0);
  for (int a = 0; a < space->atom_count(); ++a) {
    Rat w(0);
    for (int p : space->atoms_[std::size_t(a)]) w += space->point_weights_[std::size_t(p)];
    space->atom_weights_.push_back(w);
    space->total_ += w;
    if (w.is_positive()) space->positive_atoms_.set(a);
  }
  for (int a = 0; a < space->atom_count(); ++a) {
    auto [it, inserted] = space->atom_index_.emplace(space->atom_names_[std::size_t(a)], a);
    (void)it;
    if (!inserted)
      fail(Errc::DuplicatePoint, "atom id '" + space->atom_names_[std::size_t(a)] + "' declared twice");
  }
  return space;
}

Bits Space::full_atom_mask() const {
  Bits b(atom_count());
  return b.complement();
}

Bits Space::full_point_mask() const {
  Bits b(point_count());
  return b.complement();
}

std::optional<int> Space::find_point(std::string_view id) const {
  auto it = point_index_.find(std::string(id));
  if (it == point_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Space::find_atom(std::string_view id) const {
  auto it = atom_index_.find(std::string(id));
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

SpacePtr Space::rescaled(const Rat& factor) const {
  if (!factor.is_positive()) fail(Errc::NegativeWeight, "rescaling factor must be positive");
  std::vector<Rat> w;
  w.reserve(point_weights_.size());
  for (const Rat& x : point_weights_) w.push_back(x * factor);
  return with_weights(std::move(w), name_);
}

SpacePtr Space::with_weights(std::vector<Rat> point_weights, std::string name) const {
  if (point_weights.size() != points_.size())
    fail(Errc::SpaceMismatch, "weight vector does not match point count");
  std::vector<std::pair<std::string, Rat>> pts;
  for (std::size_t p = 0; p < points_.size(); ++p) pts.emplace_back(points_[p], point_weights[p]);
  std::vector<Block> blocks;
  for (int a = 0; a < atom_count(); ++a) {
    Block b;
    b.name = atom_names_[std::size_t(a)];
    for (int p : atoms_[std::size_t(a)]) b.points.push_back(points_[std::size_t(p)]);
    blocks.push_back(std::move(b));
  }
  return create(std::move(name), std::move(pts), std::move(blocks));
}

MSet mset_empty(const SpacePtr& s) { return MSet{s, Bits(s->atom_count())}; }

MSet mset_full(const SpacePtr& s) { return MSet{s, s->full_atom_mask()}; }

MSet mset_of_atoms(const SpacePtr& s, const std::vector<int>& atom_indices) {
  Bits b(s->atom_count());
  for (int a : atom_indices) b.set(a);
  return MSet{s, b};
}

MSet mset_of_mask(const SpacePtr& s, const Bits& mask) { return MSet{s, mask}; }

MSet mset_of_names(const SpacePtr& s, const std::vector<std::string>& atom_names) {
  Bits b(s->atom_count());
  for (const auto& id : atom_names) {
    auto a = s->find_atom(id);
    if (!a) fail(Errc::UnknownIdentifier, "unknown atom '" + id + "' in space '" + s->name() + "'");
    b.set(*a);
  }
  return MSet{s, b};
}

void require_same_space(const MSet& a, const MSet& b) {
  if (a.space != b.space)
    fail(Errc::SpaceMismatch, "sets live on different spaces ('" + a.space->name() + "' vs '" +
                                  b.space->name() + "')");
}

Rat measure(const MSet& a) {
  Rat sum(0);
  a.atoms.for_each([&](int atom) { sum += a.space->atom_weight(atom); });
  return sum;
}

bool ae_null(const MSet& a) { return !a.atoms.intersects(a.space->positive_atoms()); }

bool ae_subset(const MSet& a, const MSet& b) {
  require_same_space(a, b);
  return !(a.atoms - b.atoms).intersects(a.space->positive_atoms());
}

bool ae_equal(const MSet& a, const MSet& b) {
  require_same_space(a, b);
  return !(a.atoms ^ b.atoms).intersects(a.space->positive_atoms());
}

MSet canonical(const MSet& a) { return MSet{a.space, a.atoms & a.space->positive_atoms()}; }

MSet set_union(const MSet& a, const MSet& b) {
  require_same_space(a, b);
  return MSet{a.space, a.atoms | b.atoms};
}

MSet set_intersect(const MSet& a, const MSet& b) {
  require_same_space(a, b);
  return MSet{a.space, a.atoms & b.atoms};
}

MSet set_diff(const MSet& a, const MSet& b) {
  require_same_space(a, b);
  return MSet{a.space, a.atoms - b.atoms};
}

MSet set_complement(const MSet& a) { return MSet{a.space, a.atoms.complement()}; }

Rat point_weight_sum(const PointSet& s) {
  Rat sum(0);
  s.points.for_each([&](int p) { sum += s.space->point_weight(p); });
  return sum;
}

bool is_atom_union(const PointSet& s) {
  Bits touched(s.space->atom_count());
  s.points.for_each([&](int p) { touched.set(s.space->atom_of_point(p)); });
  bool whole = true;
  touched.for_each([&](int a) {
    for (int p : s.space->atom_points(a))
      if (!s.points.test(p)) whole = false;
  });
  return whole;
}

MSet measurable_hull(const PointSet& s) {
  Bits atoms(s.space->atom_count());
  s.points.for_each([&](int p) { atoms.set(s.space->atom_of_point(p)); });
  return MSet{s.space, atoms};
}

PointSet realize_points(const MSet& a) {
  Bits pts(a.space->point_count());
  a.atoms.for_each([&](int atom) {
    for (int p : a.space->atom_points(atom)) pts.set(p);
  });
  return PointSet{a.space, pts};
}

std::string format_atom_set(const MSet& a) {
  if (a.atoms.none()) return "∅";
  std::string out;
  a.atoms.for_each([&](int atom) {
    if (!out.empty()) out += ' ';
    out += a.space->atom_name(atom);
  });
  return out;
}

std::string format_point_set(const PointSet& s) {
  if (s.points.none()) return "∅";
  std::string out = "{";
  bool first = true;
  s.points.for_each([&](int p) {
    if (!first) out += ", ";
    first = false;
    out += s.space->point_name(p);
  });
  out += "}";
  return out;
}

}  // namespace essim
