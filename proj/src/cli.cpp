#include "essim/cli.hpp"

#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "essim/oracle.hpp"
#include "essim/sysfile.hpp"
#include "essim/tail.hpp"

namespace essim {

namespace {

using Json = nlohmann::ordered_json;

std::string bool_text(bool b) { return b ? "true" : "false"; }

Json set_json(const MSet& s) {
  Json arr = Json::array();
  s.atoms.for_each([&](int a) { arr.push_back(s.space->atom_name(a)); });
  return arr;
}

Json point_set_json(const PointSet& s) {
  Json arr = Json::array();
  s.points.for_each([&](int p) { arr.push_back(s.space->point_name(p)); });
  return arr;
}

Json chain_json(const std::vector<MSet>& pre, const std::vector<MSet>& period) {
  Json chain;
  chain["pre"] = Json::array();
  chain["period"] = Json::array();
  for (const MSet& s : pre) chain["pre"].push_back(set_json(s));
  for (const MSet& s : period) chain["period"].push_back(set_json(s));
  return chain;
}

struct Output {
  std::ostream& os;
  bool json;
  Json doc;
  int live_exceptions = std::uncaught_exceptions();

  void line(const std::string& key, const std::string& value) {
    if (!json) os << key << ": " << value << "\n";
  }
  ~Output() {
    // skip the dump when unwinding: the error path owns the output
    if (json && std::uncaught_exceptions() == live_exceptions) os << doc.dump(2) << "\n";
  }
};

DynSystem require_endomap_system(const SystemFile& file) {
  if (!file.map) fail(Errc::SyntaxError, file.source + ": this command needs a @map block");
  if (file.map->domain() != file.map->codomain())
    fail(Errc::SyntaxError, file.source + ": this command needs an endomap (one space)");
  return DynSystem::create(*file.map);
}

MSet require_set(const SystemFile& file, const std::string& name) {
  auto it = file.sets.find(name);
  if (it != file.sets.end()) return it->second;
  // Single atom or point names double as set names.
  const SpacePtr& sp = file.domain();
  if (auto atom = sp->find_atom(name)) return mset_of_atoms(sp, {*atom});
  fail(Errc::UnknownIdentifier, "no set, atom or point named '" + name + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::SyntaxError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- analyze ---------------------------------------------------------------

int cmd_analyze(const std::string& path, bool normalize, const std::string& mu_path,
                bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  if (normalize) file = normalized(file);
  DynSystem system = require_endomap_system(file);

  std::optional<Density> mu;
  if (!mu_path.empty())
    mu.emplace(system.space(), parse_density_file(read_file(mu_path), mu_path, system.space()));

  Classification cls = classify(system);
  NonsingularPart nsp = nonsingular_part(system);
  TailAlgebra ta = tail_algebra(system);
  ExactnessReport ex = exactness_report(system, mu);

  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("space", system.space()->name() + " (" + std::to_string(system.space()->point_count()) +
                        " points, " + std::to_string(system.space()->atom_count()) +
                        " atoms, total weight " + system.space()->total_weight().str() + ")");
  out.line("nonsingular", bool_text(cls.nonsingular));
  if (cls.nonsingular_witness)
    out.line("nonsingular_witness", format_atom_set(*cls.nonsingular_witness));
  out.line("conservative", bool_text(cls.conservative));
  if (cls.wandering_witness) out.line("wandering_witness", format_atom_set(*cls.wandering_witness));
  out.line("ergodic", bool_text(cls.ergodic));
  if (cls.invariant_witness) out.line("invariant_witness", format_atom_set(*cls.invariant_witness));
  out.line("exact", bool_text(ex.exact));
  if (ex.separated_pair)
    out.line("separated_pair", format_atom_set(ex.separated_pair->first) + " | " +
                                   format_atom_set(ex.separated_pair->second));
  out.line("limsup_full", bool_text(ex.limsup_full));
  if (ex.limsup_witness) out.line("limsup_witness", format_atom_set(*ex.limsup_witness));
  out.line("separation_criterion", bool_text(ex.separation_criterion));
  out.line("tail_depth", std::to_string(ta.depth));
  for (std::size_t i = 0; i < ta.blocks.size(); ++i)
    out.line("tail_block[" + std::to_string(i) + "]", format_atom_set(ta.blocks[i]));
  out.line("positive_tail_blocks", std::to_string(ex.positive_tail_blocks));
  out.line("nonsingular_part", format_atom_set(nsp.part));
  for (std::size_t i = 0; i < nsp.chain.size(); ++i)
    out.line("image_chain[" + std::to_string(i) + "]", format_atom_set(nsp.chain[i]));
  if (ex.image_growth)
    for (const AtomGrowth& g : *ex.image_growth)
      out.line("image_growth " + format_atom_set(g.atom), g.limit.str());

  if (as_json) {
    Json& d = out.doc;
    d["system"] = file.source;
    d["properties"] = {{"nonsingular", cls.nonsingular},
                       {"conservative", cls.conservative},
                       {"ergodic", cls.ergodic},
                       {"exact", ex.exact},
                       {"limsup_full", ex.limsup_full},
                       {"separation_criterion", ex.separation_criterion}};
    Json witnesses = Json::object();
    if (cls.nonsingular_witness) witnesses["nonsingular"] = set_json(*cls.nonsingular_witness);
    if (cls.wandering_witness) witnesses["wandering"] = set_json(*cls.wandering_witness);
    if (cls.invariant_witness) witnesses["invariant"] = set_json(*cls.invariant_witness);
    if (ex.separated_pair)
      witnesses["separated_pair"] =
          Json::array({set_json(ex.separated_pair->first), set_json(ex.separated_pair->second)});
    if (ex.limsup_witness) witnesses["limsup"] = set_json(*ex.limsup_witness);
    d["witnesses"] = witnesses;
    std::vector<MSet> pre(nsp.chain.begin(), nsp.chain.end() - 1);
    d["chains"] = {{"full_image_chain", chain_json(pre, {nsp.chain.back()})}};
    d["tail"] = Json::object();
    d["tail"]["depth"] = ta.depth;
    d["tail"]["blocks"] = Json::array();
    for (const MSet& b : ta.blocks) d["tail"]["blocks"].push_back(set_json(b));
    d["tail"]["positive_blocks"] = ex.positive_tail_blocks;
    d["nonsingular_part"] = set_json(nsp.part);
    if (ex.image_growth) {
      Json growth = Json::array();
      for (const AtomGrowth& g : *ex.image_growth)
        growth.push_back({{"atom", set_json(g.atom)}, {"limit", g.limit.str()}});
      d["image_growth"] = growth;
    }
  }
  return 0;
}

// --- image -----------------------------------------------------------------

int cmd_image(const std::string& path, const std::string& set_name, int power, bool as_json,
              std::ostream& os) {
  SystemFile file = load_system_file(path);
  if (!file.map) fail(Errc::SyntaxError, file.source + ": image needs a @map block");
  MeasurableMap map = *file.map;
  if (power != 1) map = endomap_power(map, power);
  MSet a = require_set(file, set_name);
  ImageReport rep = set_image_report(map, a);
  std::optional<MSet> ambitious = find_ambitious_null_set(map);
  MeasurableMap purged = purge_ambitious_null_sets(map);

  PointSet purged_points{purged.domain(), purged.domain()->full_point_mask()};

  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("set", set_name + " = " + format_atom_set(a));
  if (power != 1) out.line("power", std::to_string(power));
  out.line("set_measure", measure(a).str());
  out.line("set_image",
           format_point_set(rep.set_image) + " (measure " + point_weight_sum(rep.set_image).str() + ")");
  out.line("set_image_measurable", bool_text(rep.is_measurable));
  out.line("measurable_hull", format_atom_set(rep.hull) + " (measure " + measure(rep.hull).str() + ")");
  out.line("essential_image", format_atom_set(rep.essential));
  out.line("normal_version", format_atom_set(rep.normal_version));
  out.line("ambitious_null_set", ambitious ? format_atom_set(*ambitious) : "none");
  out.line("purge_domain", format_point_set(purged_points));

  if (as_json) {
    Json& d = out.doc;
    d["system"] = file.source;
    d["set"] = set_json(a);
    d["power"] = power;
    d["set_measure"] = measure(a).str();
    d["set_image"] = point_set_json(rep.set_image);
    d["set_image_measure"] = point_weight_sum(rep.set_image).str();
    d["set_image_measurable"] = rep.is_measurable;
    d["measurable_hull"] = set_json(rep.hull);
    d["essential_image"] = set_json(rep.essential);
    d["normal_version"] = set_json(rep.normal_version);
    d["ambitious_null_set"] = ambitious ? set_json(*ambitious) : Json();
    d["purge_domain"] = point_set_json(purged_points);
  }
  return 0;
}

// --- hull ------------------------------------------------------------------

int cmd_hull(const std::string& path, const std::string& set_name, const std::string& kind,
             bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  DynSystem system = require_endomap_system(file);
  MSet a = require_set(file, set_name);
  MSet result = kind == "forward"  ? hull(system, a, HullKind::forward)
              : kind == "invariant" ? hull(system, a, HullKind::invariant)
              : kind == "tail"      ? tail_hull(system, a)
                                    : throw Error(Errc::SyntaxError, "unknown hull kind '" + kind + "'");
  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("set", set_name + " = " + format_atom_set(a));
  out.line("kind", kind);
  out.line("hull", format_atom_set(result));
  if (as_json) {
    out.doc["system"] = file.source;
    out.doc["set"] = set_json(a);
    out.doc["kind"] = kind;
    out.doc["hull"] = set_json(result);
  }
  return 0;
}

// --- separated ---------------------------------------------------------------

int cmd_separated(const std::string& path, const std::string& a_name, const std::string& b_name,
                  bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  DynSystem system = require_endomap_system(file);
  MSet a = require_set(file, a_name);
  MSet b = require_set(file, b_name);
  bool separated = remain_separated(system, a, b);
  std::vector<MSet> wa = separation_witnesses(system, a);
  std::vector<MSet> wb = separation_witnesses(system, b);

  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("a", a_name + " = " + format_atom_set(a));
  out.line("b", b_name + " = " + format_atom_set(b));
  out.line("remain_separated", bool_text(separated));
  for (std::size_t n = 0; n < wa.size(); ++n)
    out.line("witness_a[" + std::to_string(n) + "]", format_atom_set(wa[n]));
  for (std::size_t n = 0; n < wb.size(); ++n)
    out.line("witness_b[" + std::to_string(n) + "]", format_atom_set(wb[n]));
  if (as_json) {
    out.doc["system"] = file.source;
    out.doc["a"] = set_json(a);
    out.doc["b"] = set_json(b);
    out.doc["remain_separated"] = separated;
    Json wja = Json::array(), wjb = Json::array();
    for (const MSet& s : wa) wja.push_back(set_json(s));
    for (const MSet& s : wb) wjb.push_back(set_json(s));
    out.doc["witnesses"] = {{"a", wja}, {"b", wjb}};
  }
  return 0;
}

// --- corridor ----------------------------------------------------------------

int cmd_corridor(const std::string& path, const std::string& set_name,
                 const std::string& terms_path, bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  DynSystem system = require_endomap_system(file);
  MSet a = require_set(file, set_name);
  CorridorBounds bounds = corridor_bounds(system, a);
  std::optional<bool> verified;
  if (!terms_path.empty()) {
    TermsFile terms = parse_terms_file(read_file(terms_path), terms_path, file);
    verified = corridor_verify(system, a, terms.pre, terms.period);
  }

  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("entrance", set_name + " = " + format_atom_set(a));
  auto emit = [&](const std::string& label, const Corridor& c) {
    for (std::size_t n = 0; n < c.pre.size(); ++n)
      out.line(label + "_pre[" + std::to_string(n) + "]", format_atom_set(c.pre[n]));
    for (std::size_t n = 0; n < c.period.size(); ++n)
      out.line(label + "_period[" + std::to_string(n) + "]", format_atom_set(c.period[n]));
  };
  emit("smallest", bounds.smallest);
  emit("largest", bounds.largest);
  if (verified) out.line("corridor_valid", bool_text(*verified));
  if (as_json) {
    out.doc["system"] = file.source;
    out.doc["entrance"] = set_json(a);
    out.doc["chains"] = {{"smallest", chain_json(bounds.smallest.pre, bounds.smallest.period)},
                         {"largest", chain_json(bounds.largest.pre, bounds.largest.period)}};
    if (verified) out.doc["corridor_valid"] = *verified;
  }
  return 0;
}

// --- markov ------------------------------------------------------------------

std::vector<int> parse_cylinder_arg(const MarkovModel& m, const std::string& arg) {
  std::vector<int> symbols;
  std::string token;
  std::istringstream in(arg);
  while (std::getline(in, token, ',')) {
    bool found = false;
    for (int i = 0; i < m.state_count(); ++i)
      if (m.states[std::size_t(i)] == token) {
        symbols.push_back(i);
        found = true;
      }
    if (!found) fail(Errc::UnknownIdentifier, "unknown state '" + token + "'");
  }
  if (symbols.empty()) fail(Errc::SyntaxError, "empty cylinder prefix");
  return symbols;
}

int cmd_markov(const std::string& path, int depth, const std::string& cylinder_arg,
               bool verify_formulas, bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  if (!file.markov) fail(Errc::SyntaxError, file.source + ": markov needs a @markov block");
  const MarkovModel& model = *file.markov;
  CylinderSystem cyl = build_cylinder_system(model, depth);
  NonsingularCheck ns = map_nonsingular(cyl.map);

  Output out{os, as_json, {}};
  out.line("model", file.source);
  std::string states;
  for (std::size_t i = 0; i < model.states.size(); ++i)
    states += (i ? " " : "") + model.states[i];
  out.line("states", states);
  out.line("depth", std::to_string(depth));
  out.line("domain", cyl.domain->name() + " (" + std::to_string(cyl.domain->point_count()) +
                         " words, total weight " + cyl.domain->total_weight().str() + ")");
  out.line("codomain", cyl.codomain->name() + " (" + std::to_string(cyl.codomain->point_count()) +
                           " words, total weight " + cyl.codomain->total_weight().str() + ")");
  for (int a = 0; a < cyl.domain->atom_count(); ++a)
    out.line("domain_weight " + cyl.domain->atom_name(a), cyl.domain->atom_weight(a).str());
  out.line("null_preserving", "true");  // construction already validated it
  out.line("nonsingular", bool_text(ns.nonsingular));
  if (ns.missed_atom)
    out.line("nonsingular_witness", format_atom_set(*ns.missed_atom) + " (measure " +
                                        measure(*ns.missed_atom).str() + ")");

  Json cylinders = Json::array();
  if (!cylinder_arg.empty()) {
    std::vector<int> prefix = parse_cylinder_arg(model, cylinder_arg);
    MSet cset = cylinder_set(model, cyl, prefix);
    MSet image = cylinder_image(cyl, cset);
    out.line("cylinder", word_name(model, prefix));
    out.line("cylinder_set", format_atom_set(cset));
    out.line("essential_image", format_atom_set(image));
    cylinders.push_back({{"prefix", word_name(model, prefix)},
                         {"set", set_json(cset)},
                         {"essential_image", set_json(image)}});
  }

  Json formulas = Json::array();
  if (verify_formulas) {
    MarkovFormulaReport rep = verify_markov_formulas(model, depth);
    out.line("stationary", "true");
    out.line("irreducible", "true");
    out.line("all_supports_ok", bool_text(rep.all_support_ok));
    for (const StateFormulaCheck& check : rep.per_state) {
      const std::string& si = model.states[std::size_t(check.state)];
      out.line("formula_support [" + si + "]",
               std::string(check.support_ok ? "ok" : "FAIL") +
                   " computed = " + format_atom_set(check.computed) +
                   " expected = " + format_atom_set(check.expected));
      Json coefs = Json::array();
      for (const auto& c : check.coefficients) {
        const std::string& sj = model.states[std::size_t(c.target)];
        out.line("formula_coef [" + si + "]->[" + sj + "]",
                 "exact " + c.exact.str() + ", printed " + c.printed.str());
        coefs.push_back(
            {{"target", sj}, {"exact", c.exact.str()}, {"printed", c.printed.str()}});
      }
      formulas.push_back(
          {{"state", si}, {"support_ok", check.support_ok}, {"coefficients", coefs}});
    }
  }

  if (as_json) {
    Json& d = out.doc;
    d["system"] = file.source;
    d["depth"] = depth;
    Json weights = Json::object();
    for (int a = 0; a < cyl.domain->atom_count(); ++a)
      weights[cyl.domain->atom_name(a)] = cyl.domain->atom_weight(a).str();
    d["domain_weights"] = weights;
    d["properties"] = {{"null_preserving", true}, {"nonsingular", ns.nonsingular}};
    d["witnesses"] = Json::object();
    if (ns.missed_atom) d["witnesses"]["nonsingular"] = set_json(*ns.missed_atom);
    if (!cylinders.empty()) d["cylinders"] = cylinders;
    if (verify_formulas) d["formulas"] = formulas;
  }
  return 0;
}

// --- oracle ------------------------------------------------------------------

int cmd_oracle(const std::string& path, const std::string& mode, const std::string& set_name,
               bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  if (!file.map) fail(Errc::SyntaxError, file.source + ": oracle needs a @map block");
  const MeasurableMap& map = *file.map;

  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("mode", mode);
  bool agree = true;

  auto list_sets = [&](const std::string& key, const std::vector<MSet>& sets) {
    int shown = 0;
    for (const MSet& s : sets) {
      if (canonical(s).atoms != s.atoms) continue;  // list canonical representatives
      out.line(key + "[" + std::to_string(shown) + "]", format_atom_set(s));
      ++shown;
    }
    out.line(key + "_count", std::to_string(shown));
  };

  Json results = Json::object();
  if (mode == "minimal_support") {
    if (set_name.empty()) fail(Errc::SyntaxError, "minimal_support needs --set");
    MSet payload = require_set(file, set_name);
    MSet oracle = oracle_minimal_support(map, payload);
    MSet fast = essential_image(map, payload);
    agree = oracle.atoms == fast.atoms;
    out.line("oracle_minimal_support", format_atom_set(oracle));
    out.line("fast_essential_image", format_atom_set(fast));
    results["oracle"] = set_json(oracle);
    results["fast"] = set_json(fast);
  } else if (mode == "invariant_sets" || mode == "forward_invariant_sets") {
    DynSystem system = require_endomap_system(file);
    bool forward = mode == "forward_invariant_sets";
    std::vector<MSet> sets =
        forward ? oracle_forward_invariant_sets(map) : oracle_invariant_sets(map);
    for (const MSet& s : sets)
      if (!invariance_check(system, s, forward ? InvKind::forward : InvKind::full)) agree = false;
    list_sets(mode, sets);
    Json arr = Json::array();
    for (const MSet& s : sets)
      if (canonical(s).atoms == s.atoms) arr.push_back(set_json(s));
    results[mode] = arr;
  } else if (mode == "wandering_search") {
    DynSystem system = require_endomap_system(file);
    std::optional<MSet> found = oracle_wandering_search(map);
    agree = (found.has_value() == !classify(system).conservative);
    if (found && !is_wandering(system, *found)) agree = false;
    out.line("wandering_set", found ? format_atom_set(*found) : "none");
    results["wandering_set"] = found ? set_json(*found) : Json();
  } else if (mode == "tail_sets") {
    DynSystem system = require_endomap_system(file);
    OracleTailSets oracle = oracle_tail_sets(map);
    out.line("tail_depth", std::to_string(oracle.depth));
    for (const MSet& s : oracle.sets)
      if (!is_tail_set(system, s)) agree = false;
    // The two routes must find the same member count over all sets.
    const int n = map.domain()->atom_count();
    std::size_t fast_count = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m)
      if (is_tail_set(system, mset_of_mask(map.domain(), Bits::from_word(n, m)))) ++fast_count;
    if (fast_count != oracle.sets.size()) agree = false;
    list_sets("tail_set", oracle.sets);
    results["depth"] = oracle.depth;
  } else if (mode == "separated_pairs") {
    DynSystem system = require_endomap_system(file);
    auto pairs = oracle_separated_pairs(map);
    Json arr = Json::array();
    int shown = 0;
    for (const auto& [a, b] : pairs) {
      if (!remain_separated(system, a, b)) agree = false;
      if (canonical(a).atoms == a.atoms && canonical(b).atoms == b.atoms) {
        out.line("pair[" + std::to_string(shown) + "]",
                 format_atom_set(a) + " | " + format_atom_set(b));
        arr.push_back(Json::array({set_json(a), set_json(b)}));
        ++shown;
      }
    }
    out.line("pair_count", std::to_string(shown));
    results["pairs"] = arr;
  } else if (mode == "nonsingular_max") {
    DynSystem system = require_endomap_system(file);
    MSet oracle = oracle_nonsingular_max(map);
    MSet fast = nonsingular_part(system).part;
    agree = oracle.atoms == fast.atoms;
    out.line("oracle_nonsingular_max", format_atom_set(oracle));
    out.line("fast_nonsingular_part", format_atom_set(fast));
    results["oracle"] = set_json(oracle);
    results["fast"] = set_json(fast);
  } else {
    fail(Errc::SyntaxError, "unknown oracle mode '" + mode + "'");
  }

  out.line("agreement", bool_text(agree));
  if (as_json) {
    out.doc["system"] = file.source;
    out.doc["mode"] = mode;
    out.doc["results"] = results;
    out.doc["agreement"] = agree;
  }
  return agree ? 0 : 1;
}

// --- modulus -----------------------------------------------------------------

int cmd_modulus(const std::string& path, const std::string& epsilon, bool normalize,
                bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);
  if (normalize) file = normalized(file);
  DynSystem system = require_endomap_system(file);
  Rat eps = Rat::parse(epsilon);
  std::optional<Rat> delta = image_size_modulus(system, eps);

  Output out{os, as_json, {}};
  out.line("system", file.source);
  out.line("epsilon", eps.str());
  out.line("delta_star", delta ? delta->str() : "unbounded");
  if (as_json) {
    out.doc["system"] = file.source;
    out.doc["epsilon"] = eps.str();
    out.doc["delta_star"] = delta ? Json(delta->str()) : Json();
  }
  return 0;
}

// --- validate ----------------------------------------------------------------

int cmd_validate(const std::string& path, bool as_json, std::ostream& os) {
  SystemFile file = load_system_file(path);  // throws with diagnostics on bad input
  Output out{os, as_json, {}};
  out.line("system", file.source);
  for (const SpacePtr& sp : file.spaces)
    out.line("space " + sp->name(),
             "ok (" + std::to_string(sp->point_count()) + " points, " +
                 std::to_string(sp->atom_count()) + " atoms, total weight " +
                 sp->total_weight().str() + ")");
  if (file.map)
    out.line("map", "ok (" + file.map->domain()->name() + " -> " +
                        file.map->codomain()->name() + ", measurable, null-preserving)");
  if (file.markov) out.line("markov", "ok (" + std::to_string(file.markov->state_count()) + " states)");
  for (const auto& [name, set] : file.sets) out.line("set " + name, format_atom_set(set));
  if (as_json) {
    out.doc["system"] = file.source;
    out.doc["valid"] = true;
    Json spaces = Json::array();
    for (const SpacePtr& sp : file.spaces) spaces.push_back(sp->name());
    out.doc["spaces"] = spaces;
    out.doc["has_map"] = file.map.has_value();
    out.doc["has_markov"] = file.markov.has_value();
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact workbench for essential images of finite null-preserving systems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string file, set_name, mu_path, kind = "forward", a_name, b_name, terms_path, mode,
                    cylinder_arg, epsilon;
  bool normalize = false, verify_formulas = false;
  int power = 1, depth = 2;

  CLI::App* validate = app.add_subcommand("validate", "check a system file");
  validate->add_option("file", file)->required();

  CLI::App* analyze = app.add_subcommand("analyze", "classification and exactness report");
  analyze->add_option("file", file)->required();
  analyze->add_flag("--normalize", normalize, "rescale lambda to a probability");
  analyze->add_option("--mu", mu_path, "invariant probability density file");

  CLI::App* image = app.add_subcommand("image", "set image vs essential image");
  image->add_option("file", file)->required();
  image->add_option("--set", set_name)->required();
  image->add_option("--power", power, "report for T^n (endomaps)");

  CLI::App* hull_cmd = app.add_subcommand("hull", "forward / invariant / tail hull");
  hull_cmd->add_option("file", file)->required();
  hull_cmd->add_option("--set", set_name)->required();
  hull_cmd->add_option("--kind", kind)->check(CLI::IsMember({"forward", "invariant", "tail"}));

  CLI::App* separated = app.add_subcommand("separated", "do two sets remain separated?");
  separated->add_option("file", file)->required();
  separated->add_option("--a", a_name)->required();
  separated->add_option("--b", b_name)->required();

  CLI::App* corridor = app.add_subcommand("corridor", "corridor bounds / verification");
  corridor->add_option("file", file)->required();
  corridor->add_option("--set", set_name)->required();
  corridor->add_option("--verify", terms_path, "terms file to verify");

  CLI::App* markov = app.add_subcommand("markov", "compile and query a Markov model");
  markov->add_option("file", file)->required();
  markov->add_option("--depth", depth)->required();
  markov->add_option("--cylinder", cylinder_arg, "comma-separated state prefix");
  markov->add_flag("--verify-formulas", verify_formulas);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross-checks");
  oracle->add_option("file", file)->required();
  oracle->add_option("--mode", mode)->required();
  oracle->add_option("--set", set_name);

  CLI::App* modulus = app.add_subcommand("modulus", "image size modulus delta*(epsilon)");
  modulus->add_option("file", file)->required();
  modulus->add_option("--epsilon", epsilon)->required();
  modulus->add_flag("--normalize", normalize, "rescale lambda to a probability first");

  std::vector<const char*> argv;
  argv.push_back("essim");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    bool as_json = format == "json";
    if (validate->parsed()) return cmd_validate(file, as_json, out);
    if (analyze->parsed()) return cmd_analyze(file, normalize, mu_path, as_json, out);
    if (image->parsed()) return cmd_image(file, set_name, power, as_json, out);
    if (hull_cmd->parsed()) return cmd_hull(file, set_name, kind, as_json, out);
    if (separated->parsed()) return cmd_separated(file, a_name, b_name, as_json, out);
    if (corridor->parsed()) return cmd_corridor(file, set_name, terms_path, as_json, out);
    if (markov->parsed())
      return cmd_markov(file, depth, cylinder_arg, verify_formulas, as_json, out);
    if (oracle->parsed()) return cmd_oracle(file, mode, set_name, as_json, out);
    if (modulus->parsed()) return cmd_modulus(file, epsilon, normalize, as_json, out);
    err << "error: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::CrossCheckFailed ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace essim
