#include "essim/dynamics.hpp"

namespace essim {

namespace {

bool mset_eq(const MSet& a, const MSet& b) { return a.atoms == b.atoms; }

}  // namespace

DynSystem DynSystem::create(MeasurableMap endomap) {
  if (endomap.domain() != endomap.codomain())
    fail(Errc::SpaceMismatch, "a dynamical system needs domain = codomain");
  return DynSystem(std::move(endomap));
}

Orbit<MSet> image_orbit(const DynSystem& s, const MSet& a) {
  Orbit<Bits> raw = detect_orbit(canonical(a).atoms, [&](const Bits& b) {
    return s.image(mset_of_mask(s.space(), b)).atoms;
  });
  Orbit<MSet> out;
  out.preperiod = raw.preperiod;
  out.period = raw.period;
  for (auto& b : raw.values) out.values.push_back(mset_of_mask(s.space(), b));
  return out;
}

Orbit<MSet> preimage_orbit(const DynSystem& s, const MSet& a) {
  Orbit<Bits> raw = detect_orbit(a.atoms, [&](const Bits& b) {
    return s.preimage(mset_of_mask(s.space(), b)).atoms;
  });
  Orbit<MSet> out;
  out.preperiod = raw.preperiod;
  out.period = raw.period;
  for (auto& b : raw.values) out.values.push_back(mset_of_mask(s.space(), b));
  return out;
}

bool invariance_check(const DynSystem& s, const MSet& a, InvKind kind) {
  require_domain(s.map(), a);
  MSet pre = s.preimage(a);
  MSet img = s.image(a);
  bool direct, via_images;
  if (kind == InvKind::forward) {
    direct = ae_subset(a, pre);
    via_images = ae_subset(img, a);
  } else {
    direct = ae_equal(a, pre);
    via_images = ae_subset(img, a) && ae_subset(s.image(set_complement(a)), set_complement(a));
  }
  if (direct != via_images)
    cross_check_failed("preimage and essential-image invariance criteria disagree");
  return direct;
}

MSet hull(const DynSystem& s, const MSet& a, HullKind kind) {
  require_domain(s.map(), a);
  MSet current = canonical(a);
  for (;;) {
    MSet next = set_union(current, s.image(current));
    if (mset_eq(next, current)) break;
    current = next;
  }
  if (kind == HullKind::invariant) {
    for (;;) {
      MSet next = canonical(set_union(current, s.preimage(current)));
      if (mset_eq(next, current)) break;
      current = next;
    }
  }
  return current;
}

NonsingularPart nonsingular_part(const DynSystem& s) {
  NonsingularPart out{mset_full(s.space()), {mset_full(s.space())}};
  MSet current = mset_full(s.space());
  for (;;) {
    MSet next = s.image(current);
    if (ae_equal(next, current)) {
      out.part = canonical(current);
      return out;
    }
    out.chain.push_back(next);
    current = next;
  }
}

bool is_wandering(const DynSystem& s, const MSet& a) {
  require_domain(s.map(), a);
  Orbit<MSet> orbit = preimage_orbit(s, a);
  // Terms at n > length() only repeat recorded values; n = length() wraps to
  // the start of the cycle, which matters when the whole orbit is one cycle.
  for (int n = 1; n <= orbit.length(); ++n)
    if (!ae_null(set_intersect(a, orbit.term(n)))) return false;
  return true;
}

bool is_recurrent(const DynSystem& s, const MSet& a) {
  require_domain(s.map(), a);
  Orbit<MSet> orbit = preimage_orbit(s, a);
  MSet reach = mset_empty(s.space());
  for (int n = 1; n <= orbit.length(); ++n) reach = set_union(reach, orbit.term(n));
  return ae_subset(a, reach);
}

Classification classify(const DynSystem& s) {
  Classification c;

  NonsingularCheck ns = map_nonsingular(s.map());
  c.nonsingular = ns.nonsingular;
  c.nonsingular_witness = ns.missed_atom;

  c.conservative = true;
  bool all_recurrent = true;
  s.space()->positive_atoms().for_each([&](int atom) {
    MSet a = mset_of_atoms(s.space(), {atom});
    if (c.conservative && is_wandering(s, a)) {
      c.conservative = false;
      c.wandering_witness = a;
    }
    if (all_recurrent && !is_recurrent(s, a)) all_recurrent = false;
  });
  if (c.conservative != all_recurrent)
    cross_check_failed("wandering-atom and recurrent-atom criteria disagree");

  c.ergodic = true;
  s.space()->positive_atoms().for_each([&](int atom) {
    if (!c.ergodic) return;
    MSet h = hull(s, mset_of_atoms(s.space(), {atom}), HullKind::invariant);
    if (!ae_null(set_complement(h))) {
      c.ergodic = false;
      c.invariant_witness = h;
    }
  });
  return c;
}

DynSystem restrict_system(const DynSystem& s, const MSet& a, const std::string& name) {
  require_domain(s.map(), a);
  MSet escaping = set_intersect(a, s.preimage(set_complement(a)));
  if (!ae_null(escaping))
    fail(Errc::NotForwardInvariant,
         "restriction target is not forward invariant; escaping mass " +
             measure(escaping).str());

  const SpacePtr& dom = s.space();
  std::vector<std::pair<std::string, Rat>> points;
  std::vector<Space::Block> blocks;
  a.atoms.for_each([&](int atom) {
    Space::Block b;
    b.name = dom->atom_name(atom);
    for (int p : dom->atom_points(atom)) {
      points.emplace_back(dom->point_name(p), dom->point_weight(p));
      b.points.push_back(dom->point_name(p));
    }
    blocks.push_back(std::move(b));
  });
  SpacePtr sub = Space::create(name, std::move(points), std::move(blocks));

  // Whole atoms of the null set D get rerouted to a sink point inside D.
  int sink = -1;
  if (escaping.atoms.any()) {
    int sink_atom = escaping.atoms.first();
    int orig_point = dom->atom_points(sink_atom).front();
    sink = *sub->find_point(dom->point_name(orig_point));
  }
  std::vector<int> image(std::size_t(sub->point_count()), 0);
  for (int p = 0; p < sub->point_count(); ++p) {
    int orig = *dom->find_point(sub->point_name(p));
    if (escaping.atoms.test(dom->atom_of_point(orig))) {
      image[std::size_t(p)] = sink;
      continue;
    }
    int target = s.map().image_point(orig);
    auto kept = sub->find_point(dom->point_name(target));
    if (!kept) fail(Errc::NotForwardInvariant, "point of positive mass escapes the restriction");
    image[std::size_t(p)] = *kept;
  }
  return DynSystem::create(MeasurableMap::create(sub, sub, std::move(image)));
}

std::optional<Rat> image_size_modulus(const DynSystem& s, const Rat& epsilon) {
  if (!epsilon.is_positive() || !(epsilon < Rat(1)))
    fail(Errc::InvalidEpsilon, "epsilon must lie in (0,1), got " + epsilon.str());
  if (s.space()->total_weight() != Rat(1))
    fail(Errc::NotNormalized, "image size modulus needs lambda(X) = 1, got " +
                                  s.space()->total_weight().str());
  if (!map_nonsingular(s.map()).nonsingular)
    fail(Errc::NotNonsingular, "image size modulus is defined for nonsingular systems");
  const int n = s.space()->atom_count();
  if (n > kEnumerationCap) fail(Errc::TooManyAtoms, "enumeration capped at 2^20 subsets");

  const Rat bound = Rat(1) - epsilon;
  std::optional<Rat> best;
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
    MSet a = mset_of_mask(s.space(), Bits::from_word(n, m));
    if (ae_null(a)) continue;
    if (measure(s.image(a)) < bound) {
      Rat gap = measure(set_complement(a));
      if (!best || gap < *best) best = gap;
    }
  }
  return best;
}

}  // namespace essim
