#include "essim/fixtures.hpp"

namespace essim {

namespace {

DynSystem endomap(SpacePtr sp, std::vector<int> image) {
  MeasurableMap map = MeasurableMap::create(sp, sp, std::move(image));
  return DynSystem::create(std::move(map));
}

}  // namespace

DynSystem fixture_ex1a() {
  SpacePtr sp = Space::create("ex1a", {{"0", Rat(1)}, {"1", Rat(0)}});
  return endomap(sp, {0, 0});
}

DynSystem fixture_count2() {
  SpacePtr sp = Space::create("count2", {{"0", Rat(1)}, {"1", Rat(1)}});
  return endomap(sp, {0, 0});
}

DynSystem fixture_rot3() {
  SpacePtr sp = Space::create("rot3", {{"0", Rat(1)}, {"1", Rat(1)}, {"2", Rat(1)}});
  return endomap(sp, {1, 2, 0});
}

DynSystem fixture_collapse() {
  SpacePtr sp =
      Space::create("collapse", {{"1", Rat(1, 4)}, {"2", Rat(1, 4)}, {"3", Rat(1, 2)}});
  return endomap(sp, {2, 2, 2});
}

DynSystem fixture_grid(int n) {
  if (n < 1) fail(Errc::InvalidModel, "grid needs N >= 1");
  std::vector<std::pair<int, int>> coords;
  for (int col = 1; col <= n; ++col)
    for (int m = 1; m <= col; ++m) coords.emplace_back(m, col);
  coords.emplace_back(1, 0);
  coords.emplace_back(0, 0);

  auto name = [](std::pair<int, int> c) {
    return "(" + std::to_string(c.first) + "," + std::to_string(c.second) + ")";
  };
  std::vector<std::pair<std::string, Rat>> points;
  for (auto c : coords) points.emplace_back(name(c), Rat(1));
  SpacePtr sp = Space::create("grid" + std::to_string(n), std::move(points));

  auto index_of = [&](std::pair<int, int> c) { return *sp->find_point(name(c)); };
  std::vector<int> image(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    auto [m, col] = coords[i];
    std::pair<int, int> target;
    if (m > 1)
      target = {m - 1, col};
    else if (m == 1 && col >= 1)
      target = {1, 0};
    else
      target = {0, 0};  // (1,0) and (0,0) both land in (0,0)
    image[i] = index_of(target);
  }
  return endomap(sp, std::move(image));
}

MeasurableMap fixture_identity_to_trivial() {
  SpacePtr dom = Space::create("idtriv", {{"0", Rat(1, 2)}, {"1", Rat(1, 2)}});
  SpacePtr cod = Space::create("idtriv'", {{"0", Rat(1, 2)}, {"1", Rat(1, 2)}},
                               {Space::Block{"X", {"0", "1"}}});
  return MeasurableMap::create(dom, cod, {0, 1});
}

MarkovModel fixture_markov2() {
  MarkovModel m;
  m.states = {"1", "2"};
  m.init = {Rat(2, 3), Rat(1, 3)};
  m.trans = {{Rat(1, 2), Rat(1, 2)}, {Rat(1), Rat(0)}};
  return m;
}

MarkovModel fixture_csmc_a() {
  MarkovModel m;
  m.states = {"0", "1"};
  m.init = {Rat(1, 2), Rat(1, 2)};
  m.trans = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  return m;
}

MarkovModel fixture_csmc_b() {
  MarkovModel m;
  m.states = {"0", "1", "2"};
  m.init = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
  m.trans = {{Rat(1), Rat(0), Rat(0)},
             {Rat(0), Rat(1), Rat(0)},
             {Rat(1, 2), Rat(1, 2), Rat(0)}};
  return m;
}

std::vector<std::pair<std::string, DynSystem>> endomap_fixtures() {
  std::vector<std::pair<std::string, DynSystem>> out;
  out.emplace_back("ex1a", fixture_ex1a());
  out.emplace_back("count2", fixture_count2());
  out.emplace_back("rot3", fixture_rot3());
  out.emplace_back("collapse", fixture_collapse());
  out.emplace_back("grid2", fixture_grid(2));
  out.emplace_back("grid3", fixture_grid(3));
  out.emplace_back("grid4", fixture_grid(4));
  return out;
}

}  // namespace essim
