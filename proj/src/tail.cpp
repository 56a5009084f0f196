#include "essim/tail.hpp"

#include <algorithm>

namespace essim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Bits> sorted_partition(std::vector<Bits> blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](const Bits& a, const Bits& b) { return a.first() < b.first(); });
  return blocks;
}

// T^{-m} applied m times.
MSet preimage_power(const DynSystem& s, int m, const MSet& b) {
  MSet out = b;
  for (int k = 0; k < m; ++k) out = s.preimage(out);
  return out;
}

}  // namespace

TailAlgebra tail_algebra(const DynSystem& s) {
  const SpacePtr& sp = s.space();
  std::vector<Bits> current;
  for (int a = 0; a < sp->atom_count(); ++a) {
    Bits b(sp->atom_count());
    b.set(a);
    current.push_back(b);
  }
  int depth = 0;
  for (;;) {
    std::vector<Bits> next;
    for (const Bits& block : current) {
      Bits pre = s.preimage(mset_of_mask(sp, block)).atoms;
      if (pre.any()) next.push_back(pre);
    }
    next = sorted_partition(std::move(next));
    if (next == current) break;
    current = std::move(next);
    ++depth;
    if (depth > sp->atom_count())
      cross_check_failed("tail algebra failed to stabilize within #atoms coarsenings");
  }
  TailAlgebra out;
  out.depth = depth;
  for (const Bits& block : current) out.blocks.push_back(mset_of_mask(sp, block));
  return out;
}

MSet tail_hull(const DynSystem& s, const MSet& a) {
  require_domain(s.map(), a);

  // Route 1: union of A_m = T^{-m} T-hat^m A over every m >= 0. The image
  // orbit of T-hat^m A has preperiod q and period p; beyond it, A_{m+p} =
  // T^{-p} A_m exactly, so each residue class is an orbit of the deterministic
  // map T^{-p} and a recorded repeat covers all later m.
  Orbit<MSet> img = image_orbit(s, a);
  const int q = img.preperiod;
  const int p = img.period;
  MSet direct = mset_empty(s.space());
  for (int m = 0; m < q; ++m)
    direct = set_union(direct, preimage_power(s, m, img.values[std::size_t(m)]));
  for (int r = 0; r < p; ++r) {
    MSet start = preimage_power(s, q + r, img.values[std::size_t(q + r)]);
    Orbit<Bits> chain = detect_orbit(start.atoms, [&](const Bits& b) {
      return preimage_power(s, p, mset_of_mask(s.space(), b)).atoms;
    });
    for (const Bits& b : chain.values) direct = set_union(direct, mset_of_mask(s.space(), b));
  }
  MSet via_orbit = canonical(direct);

  // Route 2: tail sets are exactly the block unions mod lambda, so the hull
  // is the union of the blocks A meets positively.
  TailAlgebra ta = tail_algebra(s);
  MSet via_blocks = mset_empty(s.space());
  for (const MSet& block : ta.blocks)
    if (!ae_null(set_intersect(a, block))) via_blocks = set_union(via_blocks, block);
  via_blocks = canonical(via_blocks);

  if (via_orbit.atoms != via_blocks.atoms)
    cross_check_failed("tail hull via orbits disagrees with tail hull via the tail algebra");
  return via_blocks;
}

bool is_tail_set(const DynSystem& s, const MSet& a) {
  require_domain(s.map(), a);
  bool via_hull = ae_equal(a, tail_hull(s, a));

  // A = T^{-n} T-hat^n A for all n, decided over the orbit range plus the
  // wrap step n = q + p. Flatness there propagates: T^{-p} preserves
  // essential equality, so equality at the wrap forces equality on every
  // later term of each residue class.
  Orbit<MSet> img = image_orbit(s, a);
  bool via_terms = true;
  for (int n = 0; n <= img.length() && via_terms; ++n)
    if (!ae_equal(a, preimage_power(s, n, img.term(n)))) via_terms = false;

  if (via_hull != via_terms)
    cross_check_failed("tail-set test via hull disagrees with the corridor-term test");
  return via_hull;
}

namespace {

Orbit<std::pair<Bits, Bits>> pair_image_orbit(const DynSystem& s, const MSet& a, const MSet& b) {
  std::pair<Bits, Bits> start{canonical(a).atoms, canonical(b).atoms};
  return detect_orbit(start, [&](const std::pair<Bits, Bits>& cur) {
    return std::pair<Bits, Bits>{s.image(mset_of_mask(s.space(), cur.first)).atoms,
                                 s.image(mset_of_mask(s.space(), cur.second)).atoms};
  });
}

}  // namespace

bool remain_separated(const DynSystem& s, const MSet& a, const MSet& b) {
  require_domain(s.map(), a);
  require_domain(s.map(), b);
  Orbit<std::pair<Bits, Bits>> orbit = pair_image_orbit(s, a, b);
  bool separated = true;
  for (const auto& [ia, ib] : orbit.values)
    if (ia.intersects(ib)) separated = false;  // canonical masks: overlap means positive mass

  bool via_hulls = ae_null(set_intersect(tail_hull(s, a), tail_hull(s, b)));
  if (separated != via_hulls)
    cross_check_failed("separation via image orbits disagrees with tail-hull disjointness");
  return separated;
}

std::vector<MSet> separation_witnesses(const DynSystem& s, const MSet& a) {
  Orbit<MSet> img = image_orbit(s, a);
  return img.values;
}

CorridorBounds corridor_bounds(const DynSystem& s, const MSet& a) {
  if (!is_tail_set(s, a))
    fail(Errc::NotATailSet, "corridor bounds need a tail set as entrance");
  Orbit<std::pair<Bits, Bits>> orbit = pair_image_orbit(s, a, mset_full(s.space()));

  CorridorBounds out{{a, {}, {}}, {a, {}, {}}};
  for (int n = 0; n < orbit.length(); ++n) {
    const auto& [ia, ix] = orbit.values[std::size_t(n)];
    MSet small = mset_of_mask(s.space(), ia);
    MSet large = set_union(small, set_complement(mset_of_mask(s.space(), ix)));
    auto& small_dst = n < orbit.preperiod ? out.smallest.pre : out.smallest.period;
    auto& large_dst = n < orbit.preperiod ? out.largest.pre : out.largest.period;
    small_dst.push_back(small);
    large_dst.push_back(large);
  }

  // Both sequences satisfy the corridor identity on every represented term.
  for (int n = 0; n <= orbit.length(); ++n) {
    if (!ae_equal(a, preimage_power(s, n, out.smallest.term(n))) ||
        !ae_equal(a, preimage_power(s, n, out.largest.term(n))))
      cross_check_failed("constructed corridor bound violates the corridor identity");
  }
  return out;
}

bool corridor_verify(const DynSystem& s, const MSet& a, const std::vector<MSet>& pre,
                     const std::vector<MSet>& period) {
  if (!is_tail_set(s, a)) fail(Errc::NotATailSet, "corridor verification needs a tail-set entrance");
  if (period.empty()) fail(Errc::SyntaxError, "corridor period must be nonempty");
  for (const MSet& t : pre) require_domain(s.map(), t);
  for (const MSet& t : period) require_domain(s.map(), t);
  Corridor cand{a, pre, period};
  const int q = int(pre.size());
  const int p = int(period.size());

  // Route 1, the definition: A = T^{-n} A_n for every n. Preperiod positions
  // occur once; the period term j occurs at q + j + k p for every k >= 0,
  // an orbit of T^{-p} starting from T^{-(q+j)} of the term.
  bool direct = true;
  for (int n = 0; n < q && direct; ++n)
    if (!ae_equal(a, preimage_power(s, n, cand.term(n)))) direct = false;
  for (int j = 0; j < p && direct; ++j) {
    MSet start = preimage_power(s, q + j, cand.term(q + j));
    Orbit<Bits> chain = detect_orbit(start.atoms, [&](const Bits& b) {
      return preimage_power(s, p, mset_of_mask(s.space(), b)).atoms;
    });
    for (const Bits& b : chain.values)
      if (!ae_equal(a, mset_of_mask(s.space(), b))) direct = false;
  }

  // Route 2, the sandwich T-hat^n A within A_n within T-hat^n A + (T-hat^n
  // X)^c, checked over the joint orbit of (candidate position, T-hat^n A,
  // T-hat^n X) until the joint state repeats; beyond that every n repeats a
  // checked configuration.
  struct JointState {
    int pos;
    Bits img_a;
    Bits img_x;
    bool operator==(const JointState& o) const {
      return pos == o.pos && img_a == o.img_a && img_x == o.img_x;
    }
  };
  auto advance_pos = [&](int pos) { return pos + 1 < q + p ? pos + 1 : q; };
  JointState init{0, canonical(a).atoms, canonical(mset_full(s.space())).atoms};
  bool sandwich = true;
  {
    std::vector<JointState> seen;
    JointState cur = init;
    for (;;) {
      MSet img_a = mset_of_mask(s.space(), cur.img_a);
      MSet img_x = mset_of_mask(s.space(), cur.img_x);
      const MSet& term = cand.term(cur.pos);
      if (!ae_subset(img_a, term) ||
          !ae_subset(term, set_union(img_a, set_complement(img_x))))
        sandwich = false;
      seen.push_back(cur);
      JointState next{advance_pos(cur.pos), s.image(img_a).atoms, s.image(img_x).atoms};
      if (std::find(seen.begin(), seen.end(), next) != seen.end()) break;
      cur = next;
    }
  }

  if (direct != sandwich)
    cross_check_failed("corridor definition disagrees with the sandwich characterization");
  return direct;
}

namespace {

// The derived separation witness of a noninvariant tail set U:
// B = U intersect T^{-1}(T-hat U \ U); positive and separated from T-hat B
// whenever T-hat U is not essentially inside U.
MSet derived_separation_witness(const DynSystem& s, const MSet& u) {
  MSet c = set_diff(s.image(u), u);
  return set_intersect(u, s.preimage(c));
}

}  // namespace

ExactnessReport exactness_report(const DynSystem& s, const std::optional<Density>& mu) {
  const SpacePtr& sp = s.space();
  ExactnessReport rep;

  TailAlgebra ta = tail_algebra(s);
  rep.tail_depth = ta.depth;
  for (const MSet& b : ta.blocks)
    if (!ae_null(b)) ++rep.positive_tail_blocks;
  rep.exact = rep.positive_tail_blocks <= 1;

  // Cross-check: exact iff no two positive atoms remain separated, iff every
  // positive atom has full tail hull.
  std::vector<int> positive = sp->positive_atoms().indices();
  for (std::size_t i = 0; i < positive.size() && !rep.separated_pair; ++i) {
    for (std::size_t j = i + 1; j < positive.size() && !rep.separated_pair; ++j) {
      MSet ai = mset_of_atoms(sp, {positive[i]});
      MSet aj = mset_of_atoms(sp, {positive[j]});
      if (remain_separated(s, ai, aj)) rep.separated_pair = std::make_pair(ai, aj);
    }
  }
  if (rep.exact != !rep.separated_pair.has_value())
    cross_check_failed("tail-algebra triviality disagrees with atom separation");
  for (int atom : positive) {
    bool full = ae_null(set_complement(tail_hull(s, mset_of_atoms(sp, {atom}))));
    if (full != rep.exact)
      cross_check_failed("tail-algebra triviality disagrees with atom tail hulls");
  }

  // lim sup of lambda(T-hat^n a) is the maximum over the cycle of the orbit.
  rep.limsup_full = true;
  for (int atom : positive) {
    Orbit<MSet> orbit = image_orbit(s, mset_of_atoms(sp, {atom}));
    Rat best(0);
    for (int n = orbit.preperiod; n < orbit.length(); ++n) {
      Rat m = measure(orbit.values[std::size_t(n)]);
      if (best < m) best = m;
    }
    if (best != sp->total_weight()) {
      rep.limsup_full = false;
      if (!rep.limsup_witness) rep.limsup_witness = mset_of_atoms(sp, {atom});
    }
  }

  Classification cls = classify(s);
  rep.ergodic = cls.ergodic;
  if (rep.limsup_full && !(cls.nonsingular && cls.conservative && rep.exact))
    cross_check_failed("a lim-sup-full system must be nonsingular, conservative and exact");

  // Separation criterion for exactness: ergodic, and only null sets remain
  // separated from their essential image.
  {
    std::vector<Bits> family;
    const int n = sp->atom_count();
    if (n <= 10) {
      for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m)
        family.push_back(Bits::from_word(n, m));
    } else {
      for (int atom : positive) {
        Bits b(n);
        b.set(atom);
        family.push_back(b);
      }
      std::vector<Bits> unions;
      for (const MSet& block : ta.blocks) unions.push_back(block.atoms);
      if (int(ta.blocks.size()) <= 16) {
        unions.clear();
        for (std::uint64_t m = 1; m < (std::uint64_t(1) << ta.blocks.size()); ++m) {
          Bits u(n);
          for (std::size_t k = 0; k < ta.blocks.size(); ++k)
            if (m & (std::uint64_t(1) << k)) u |= ta.blocks[k].atoms;
          unions.push_back(u);
        }
      }
      for (const Bits& u : unions) {
        family.push_back(u);
        family.push_back(u.complement());
        family.push_back(derived_separation_witness(s, mset_of_mask(sp, u)).atoms);
        family.push_back(derived_separation_witness(s, mset_of_mask(sp, u.complement())).atoms);
      }
      std::uint64_t seed = 0x657373696d2e7461ULL;  // fixed: reports are deterministic
      for (int k = 0; k < 10000; ++k) {
        Bits b(n);
        for (int atom = 0; atom < n; ++atom)
          if (splitmix64(seed) & 1) b.set(atom);
        family.push_back(b);
      }
    }
    bool no_positive_separated = true;
    for (const Bits& b : family) {
      MSet cand = mset_of_mask(sp, b);
      if (ae_null(cand)) continue;
      if (remain_separated(s, cand, s.image(cand))) {
        no_positive_separated = false;
        if (!rep.separation_criterion_witness) rep.separation_criterion_witness = cand;
        break;
      }
    }
    rep.separation_criterion = rep.ergodic && no_positive_separated;
    if (rep.separation_criterion != rep.exact)
      cross_check_failed("separation criterion disagrees with tail-algebra exactness");
  }

  if (mu) {
    if (mu->space() != sp) fail(Errc::SpaceMismatch, "mu lives on a different space");
    if (mu->total_mass() != Rat(1))
      fail(Errc::NotAProbability, "mu has total mass " + mu->total_mass().str());
    for (int atom = 0; atom < sp->atom_count(); ++atom) {
      MSet a = mset_of_atoms(sp, {atom});
      Rat pre = mu->measure_of(s.preimage(a));
      Rat direct = mu->measure_of(a);
      if (pre != direct)
        fail(Errc::NotInvariant, "mu(T^{-1}a) = " + pre.str() + " but mu(a) = " + direct.str() +
                                     " on atom '" + sp->atom_name(atom) + "'");
    }
    std::vector<AtomGrowth> growth;
    bool all_full = true;
    for (int atom : positive) {
      MSet a = mset_of_atoms(sp, {atom});
      Rat limit = mu->measure_of(tail_hull(s, a));
      // mu(T-hat^n a) = mu(T^{-n} T-hat^n a) is nondecreasing and its cycle
      // value is the limit; both facts are checked.
      Orbit<MSet> orbit = image_orbit(s, a);
      Rat prev(-1);
      for (int n = 0; n < orbit.length(); ++n) {
        Rat m = mu->measure_of(orbit.values[std::size_t(n)]);
        if (m < prev)
          cross_check_failed("image growth under an invariant probability must be monotone");
        prev = m;
        if (n >= orbit.preperiod && m != limit)
          cross_check_failed("cycle-stabilized image measure differs from mu(tail hull)");
      }
      if (limit != Rat(1)) all_full = false;
      growth.push_back(AtomGrowth{a, limit});
    }
    if (all_full != rep.exact)
      cross_check_failed("image growth criterion disagrees with exactness");
    rep.image_growth = std::move(growth);
  }
  return rep;
}

}  // namespace essim
