#include "essim/markov.hpp"

namespace essim {

namespace {

constexpr long kMaxWords = 200000;

long word_count(const MarkovModel& m, int length) {
  long count = 1;
  for (int k = 0; k < length; ++k) {
    count *= m.state_count();
    if (count > kMaxWords) fail(Errc::TooLarge, "cylinder space exceeds the word cap");
  }
  return count;
}

Rat word_weight(const MarkovModel& m, const std::vector<int>& w) {
  if (w.empty()) return Rat(1);
  Rat out = m.init[std::size_t(w[0])];
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    out *= m.trans[std::size_t(w[k])][std::size_t(w[k + 1])];
  return out;
}

SpacePtr word_space(const MarkovModel& m, int length, const std::string& name) {
  long count = word_count(m, length);
  std::vector<std::pair<std::string, Rat>> points;
  points.reserve(std::size_t(count));
  for (long idx = 0; idx < count; ++idx) {
    std::vector<int> w = decode_word(m, length, int(idx));
    points.emplace_back(word_name(m, w), word_weight(m, w));
  }
  return Space::create(name, std::move(points));
}

}  // namespace

void validate_model(const MarkovModel& m) {
  const int n = m.state_count();
  if (n == 0) fail(Errc::InvalidModel, "a model needs at least one state");
  if (int(m.init.size()) != n || int(m.trans.size()) != n)
    fail(Errc::InvalidModel, "init and transition rows must cover every state");
  Rat init_sum(0);
  for (int i = 0; i < n; ++i) {
    if (int(m.trans[std::size_t(i)].size()) != n)
      fail(Errc::InvalidModel, "row '" + m.states[std::size_t(i)] + "' has the wrong length");
    if (m.init[std::size_t(i)].is_negative())
      fail(Errc::InvalidModel, "negative initial mass on '" + m.states[std::size_t(i)] + "'");
    init_sum += m.init[std::size_t(i)];
    for (int j = 0; j < n; ++j)
      if (m.trans[std::size_t(i)][std::size_t(j)].is_negative())
        fail(Errc::InvalidModel, "negative transition probability out of '" +
                                     m.states[std::size_t(i)] + "'");
  }
  if (init_sum != Rat(1))
    fail(Errc::InvalidModel, "initial distribution sums to " + init_sum.str());
  std::vector<bool> reach = reachable_states(m);
  for (int i = 0; i < n; ++i) {
    if (!reach[std::size_t(i)]) continue;
    Rat row_sum(0);
    for (int j = 0; j < n; ++j) row_sum += m.trans[std::size_t(i)][std::size_t(j)];
    if (row_sum != Rat(1))
      fail(Errc::InvalidModel,
           "reachable row '" + m.states[std::size_t(i)] + "' sums to " + row_sum.str());
  }
}

bool is_stationary(const MarkovModel& m) {
  const int n = m.state_count();
  for (int j = 0; j < n; ++j) {
    Rat mass(0);
    for (int i = 0; i < n; ++i) mass += m.init[std::size_t(i)] * m.trans[std::size_t(i)][std::size_t(j)];
    if (mass != m.init[std::size_t(j)]) return false;
  }
  return true;
}

bool is_irreducible(const MarkovModel& m) {
  const int n = m.state_count();
  for (int from = 0; from < n; ++from) {
    std::vector<bool> seen(std::size_t(n), false);
    std::vector<int> stack{from};
    seen[std::size_t(from)] = true;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j)
        if (m.trans[std::size_t(i)][std::size_t(j)].is_positive() && !seen[std::size_t(j)]) {
          seen[std::size_t(j)] = true;
          stack.push_back(j);
        }
    }
    for (int j = 0; j < n; ++j)
      if (!seen[std::size_t(j)]) return false;
  }
  return true;
}

std::vector<bool> reachable_states(const MarkovModel& m) {
  const int n = m.state_count();
  std::vector<bool> seen(std::size_t(n), false);
  std::vector<int> stack;
  for (int i = 0; i < n; ++i)
    if (i < int(m.init.size()) && m.init[std::size_t(i)].is_positive()) {
      seen[std::size_t(i)] = true;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    if (int(m.trans.size()) <= i) continue;
    for (int j = 0; j < n && j < int(m.trans[std::size_t(i)].size()); ++j)
      if (m.trans[std::size_t(i)][std::size_t(j)].is_positive() && !seen[std::size_t(j)]) {
        seen[std::size_t(j)] = true;
        stack.push_back(j);
      }
  }
  return seen;
}

std::optional<std::vector<Rat>> stationary_distribution(const MarkovModel& m) {
  // Solve pi (P - I) = 0 with the first balance equation replaced by the
  // normalization sum(pi) = 1; exact Gaussian elimination.
  const int n = m.state_count();
  std::vector<std::vector<Rat>> a(std::size_t(n), std::vector<Rat>(std::size_t(n + 1), Rat(0)));
  for (int j = 0; j < n; ++j) a[0][std::size_t(j)] = Rat(1);
  a[0][std::size_t(n)] = Rat(1);
  for (int row = 1; row < n; ++row) {
    for (int i = 0; i < n; ++i) a[std::size_t(row)][std::size_t(i)] = m.trans[std::size_t(i)][std::size_t(row)];
    a[std::size_t(row)][std::size_t(row)] -= Rat(1);
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (!a[std::size_t(row)][std::size_t(col)].is_zero()) {
        pivot = row;
        break;
      }
    if (pivot == -1) return std::nullopt;
    std::swap(a[std::size_t(col)], a[std::size_t(pivot)]);
    Rat lead = a[std::size_t(col)][std::size_t(col)];
    for (int k = col; k <= n; ++k) a[std::size_t(col)][std::size_t(k)] /= lead;
    for (int row = 0; row < n; ++row) {
      if (row == col || a[std::size_t(row)][std::size_t(col)].is_zero()) continue;
      Rat f = a[std::size_t(row)][std::size_t(col)];
      for (int k = col; k <= n; ++k)
        a[std::size_t(row)][std::size_t(k)] -= f * a[std::size_t(col)][std::size_t(k)];
    }
  }
  std::vector<Rat> pi(std::size_t(n), Rat(0));
  for (int i = 0; i < n; ++i) pi[std::size_t(i)] = a[std::size_t(i)][std::size_t(n)];
  return pi;
}

std::vector<int> decode_word(const MarkovModel& m, int length, int index) {
  std::vector<int> w(std::size_t(length), 0);
  for (int k = length - 1; k >= 0; --k) {
    w[std::size_t(k)] = index % m.state_count();
    index /= m.state_count();
  }
  return w;
}

int encode_word(const MarkovModel& m, const std::vector<int>& symbols) {
  int idx = 0;
  for (int s : symbols) idx = idx * m.state_count() + s;
  return idx;
}

std::string word_name(const MarkovModel& m, const std::vector<int>& symbols) {
  std::string out = "[";
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (k) out += ',';
    out += m.states[std::size_t(symbols[k])];
  }
  out += ']';
  return out;
}

CylinderSystem build_cylinder_system(const MarkovModel& m, int depth) {
  validate_model(m);
  if (depth < 2)
    fail(Errc::InvalidDepth, "cylinder systems need depth >= 2; the depth-" +
                                 std::to_string(depth - 1) + " codomain algebra is trivial");
  SpacePtr domain = word_space(m, depth, "cyl" + std::to_string(depth));
  SpacePtr codomain = word_space(m, depth - 1, "cyl" + std::to_string(depth - 1));
  long count = word_count(m, depth);
  std::vector<int> image(std::size_t(count), 0);
  for (long idx = 0; idx < count; ++idx) {
    std::vector<int> w = decode_word(m, depth, int(idx));
    std::vector<int> dropped(w.begin() + 1, w.end());
    image[std::size_t(idx)] = encode_word(m, dropped);
  }
  MeasurableMap map = MeasurableMap::create(domain, codomain, std::move(image));
  return CylinderSystem{depth, domain, codomain, std::move(map)};
}

MSet cylinder_set(const MarkovModel& m, const CylinderSystem& c, const std::vector<int>& prefix) {
  if (int(prefix.size()) > c.depth) fail(Errc::InvalidDepth, "prefix longer than the word depth");
  Bits atoms(c.domain->atom_count());
  long count = word_count(m, c.depth);
  for (long idx = 0; idx < count; ++idx) {
    std::vector<int> w = decode_word(m, c.depth, int(idx));
    bool match = true;
    for (std::size_t k = 0; k < prefix.size(); ++k)
      if (w[k] != prefix[k]) match = false;
    if (match) atoms.set(int(idx));
  }
  return MSet{c.domain, atoms};
}

MSet cylinder_image(const CylinderSystem& c, const MSet& a) { return essential_image(c.map, a); }

MarkovFormulaReport verify_markov_formulas(const MarkovModel& m, int depth) {
  validate_model(m);
  if (!is_stationary(m)) fail(Errc::NotStationary, "initial distribution is not invariant");
  if (!is_irreducible(m)) fail(Errc::NotIrreducible, "transition matrix is not irreducible");
  CylinderSystem c = build_cylinder_system(m, depth);

  MarkovFormulaReport rep{depth, {}, true};
  const int n = m.state_count();
  for (int i = 0; i < n; ++i) {
    StateFormulaCheck check{i, false, mset_empty(c.codomain), mset_empty(c.codomain), {}};
    check.computed = cylinder_image(c, cylinder_set(m, c, {i}));

    Bits expected(c.codomain->atom_count());
    for (int idx = 0; idx < c.codomain->atom_count(); ++idx) {
      std::vector<int> w = decode_word(m, depth - 1, idx);
      if (m.trans[std::size_t(i)][std::size_t(w[0])].is_positive() &&
          !c.codomain->atom_is_null(idx))
        expected.set(idx);
    }
    check.expected = MSet{c.codomain, expected};
    check.support_ok = check.computed.atoms == expected;
    rep.all_support_ok = rep.all_support_ok && check.support_ok;

    Density u = transfer_density(c.map, Density::indicator(cylinder_set(m, c, {i})));
    for (int j = 0; j < n; ++j) {
      if (!m.init[std::size_t(j)].is_positive()) continue;
      Rat printed = m.trans[std::size_t(i)][std::size_t(j)] / m.init[std::size_t(j)];
      Rat exact = m.init[std::size_t(i)] * printed;
      check.coefficients.push_back({j, exact, printed});
      // The exact coefficient is what the duality identity forces; every
      // positive word starting with j must carry it.
      for (int idx = 0; idx < c.codomain->atom_count(); ++idx) {
        if (c.codomain->atom_is_null(idx)) continue;
        if (decode_word(m, depth - 1, idx)[0] != j) continue;
        if (u.value(idx) != exact)
          cross_check_failed("transfer density off the predicted coefficient on " +
                             c.codomain->atom_name(idx));
      }
    }
    rep.per_state.push_back(std::move(check));
  }
  return rep;
}

}  // namespace essim
