#include "essim/sysfile.hpp"

#include <fstream>
#include <sstream>

namespace essim {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void die(Errc code, const std::string& source, int line, const std::string& msg) {
  fail(code, source + ":" + std::to_string(line) + ": " + msg);
}

Rat parse_rat_at(const std::string& source, int line, const std::string& tok) {
  try {
    return Rat::parse(tok);
  } catch (const Error&) {
    die(Errc::SyntaxError, source, line, "expected an exact rational, got '" + tok + "'");
  }
}

// Raw declarations accumulated in a first pass; spaces are only built once
// their optional @partition block is known.
struct RawSpace {
  int line;
  std::string name;
  std::vector<std::pair<std::string, Rat>> points;
  std::vector<Space::Block> blocks;  // from @partition
  std::vector<std::string> blocked_points;
};

struct RawMap {
  int line = 0;
  std::string domain, codomain;  // empty: sole space endomap
  std::vector<std::pair<std::string, std::string>> arrows;
};

struct RawSet {
  int line;
  std::string name;
  std::vector<std::string> tokens;
};

}  // namespace

const SpacePtr& SystemFile::domain() const {
  if (map) return map->domain();
  if (spaces.size() == 1) return spaces.front();
  fail(Errc::SyntaxError, source + ": no map and no unique space to resolve sets against");
}

SystemFile parse_system_file(const std::string& text, const std::string& source_name) {
  std::vector<Line> lines = tokenize(text);

  std::vector<RawSpace> raw_spaces;
  std::optional<RawMap> raw_map;
  std::vector<RawSet> raw_sets;
  std::optional<MarkovModel> markov;
  int markov_line = 0;

  enum class Section { none, space, partition, map, markov };
  Section section = Section::none;
  RawSpace* in_space = nullptr;
  RawSpace* in_partition = nullptr;

  auto find_raw_space = [&](const std::string& name) -> RawSpace* {
    for (auto& rs : raw_spaces)
      if (rs.name == name) return &rs;
    return nullptr;
  };

  for (const Line& line : lines) {
    const auto& tok = line.tokens;
    const std::string& head = tok.front();

    if (head == "@space") {
      if (tok.size() != 2) die(Errc::SyntaxError, source_name, line.number, "@space needs a name");
      if (find_raw_space(tok[1]))
        die(Errc::SyntaxError, source_name, line.number, "space '" + tok[1] + "' declared twice");
      raw_spaces.push_back(RawSpace{line.number, tok[1], {}, {}, {}});
      in_space = &raw_spaces.back();
      section = Section::space;
      continue;
    }
    if (head == "@partition") {
      if (tok.size() != 2)
        die(Errc::SyntaxError, source_name, line.number, "@partition needs a space name");
      in_partition = find_raw_space(tok[1]);
      if (!in_partition)
        die(Errc::UnknownIdentifier, source_name, line.number, "unknown space '" + tok[1] + "'");
      section = Section::partition;
      continue;
    }
    if (head == "@map") {
      if (raw_map) die(Errc::SyntaxError, source_name, line.number, "only one @map block allowed");
      RawMap rm;
      rm.line = line.number;
      if (tok.size() == 4 && tok[2] == "->") {
        rm.domain = tok[1];
        rm.codomain = tok[3];
      } else if (tok.size() != 1) {
        die(Errc::SyntaxError, source_name, line.number, "use '@map' or '@map <dom> -> <cod>'");
      }
      raw_map = std::move(rm);
      section = Section::map;
      continue;
    }
    if (head == "@set") {
      if (tok.size() < 4 || tok[2] != "=")
        die(Errc::SyntaxError, source_name, line.number, "use '@set <id> = <atom-or-point> ...'");
      raw_sets.push_back(RawSet{line.number, tok[1], {tok.begin() + 3, tok.end()}});
      section = Section::none;
      continue;
    }
    if (head == "@markov") {
      if (markov) die(Errc::SyntaxError, source_name, line.number, "only one @markov block allowed");
      markov.emplace();
      markov_line = line.number;
      section = Section::markov;
      continue;
    }
    if (head.front() == '@')
      die(Errc::SyntaxError, source_name, line.number, "unknown directive '" + head + "'");

    switch (section) {
      case Section::space: {
        if (head != "point" || tok.size() != 3)
          die(Errc::SyntaxError, source_name, line.number, "expected 'point <id> <weight>'");
        in_space->points.emplace_back(tok[1], parse_rat_at(source_name, line.number, tok[2]));
        break;
      }
      case Section::partition: {
        if (head != "atom" || tok.size() < 3 || tok[1].back() != ':')
          die(Errc::SyntaxError, source_name, line.number, "expected 'atom <id>: <point> ...'");
        Space::Block block;
        block.name = tok[1].substr(0, tok[1].size() - 1);
        block.points.assign(tok.begin() + 2, tok.end());
        for (const auto& p : block.points) in_partition->blocked_points.push_back(p);
        in_partition->blocks.push_back(std::move(block));
        break;
      }
      case Section::map: {
        if (tok.size() != 3 || tok[1] != "->")
          die(Errc::SyntaxError, source_name, line.number, "expected '<point> -> <point>'");
        raw_map->arrows.emplace_back(tok[0], tok[2]);
        break;
      }
      case Section::markov: {
        if (head == "states") {
          markov->states.assign(tok.begin() + 1, tok.end());
        } else if (head == "init") {
          for (std::size_t k = 1; k < tok.size(); ++k)
            markov->init.push_back(parse_rat_at(source_name, line.number, tok[k]));
        } else if (head == "row") {
          if (tok.size() < 3 || tok[1].back() != ':')
            die(Errc::SyntaxError, source_name, line.number, "expected 'row <state>: <rat> ...'");
          std::string state = tok[1].substr(0, tok[1].size() - 1);
          std::size_t index = 0;
          bool found = false;
          for (std::size_t i = 0; i < markov->states.size(); ++i)
            if (markov->states[i] == state) {
              index = i;
              found = true;
            }
          if (!found)
            die(Errc::UnknownIdentifier, source_name, line.number, "unknown state '" + state + "'");
          markov->trans.resize(markov->states.size());
          auto& row = markov->trans[index];
          if (!row.empty())
            die(Errc::SyntaxError, source_name, line.number, "row '" + state + "' given twice");
          for (std::size_t k = 2; k < tok.size(); ++k)
            row.push_back(parse_rat_at(source_name, line.number, tok[k]));
        } else {
          die(Errc::SyntaxError, source_name, line.number, "expected 'states', 'init' or 'row'");
        }
        break;
      }
      case Section::none:
        die(Errc::SyntaxError, source_name, line.number, "statement outside any block");
    }
  }

  SystemFile out;
  out.source = source_name;

  for (RawSpace& rs : raw_spaces) {
    std::vector<Space::Block> blocks;
    if (!rs.blocks.empty()) {
      // Unlisted points become singleton atoms, in point order.
      blocks = rs.blocks;
      for (const auto& [id, w] : rs.points) {
        (void)w;
        bool listed = false;
        for (const auto& p : rs.blocked_points)
          if (p == id) listed = true;
        if (!listed) blocks.push_back(Space::Block{id, {id}});
      }
    }
    try {
      out.spaces.push_back(Space::create(rs.name, rs.points, std::move(blocks)));
    } catch (const Error& e) {
      die(e.code(), source_name, rs.line, e.message());
    }
  }

  if (raw_map) {
    SpacePtr dom, cod;
    if (raw_map->domain.empty()) {
      if (out.spaces.size() != 1)
        die(Errc::SyntaxError, source_name, raw_map->line,
            "'@map' without spaces needs exactly one @space");
      dom = cod = out.spaces.front();
    } else {
      for (const auto& sp : out.spaces) {
        if (sp->name() == raw_map->domain) dom = sp;
        if (sp->name() == raw_map->codomain) cod = sp;
      }
      if (!dom)
        die(Errc::UnknownIdentifier, source_name, raw_map->line,
            "unknown domain space '" + raw_map->domain + "'");
      if (!cod)
        die(Errc::UnknownIdentifier, source_name, raw_map->line,
            "unknown codomain space '" + raw_map->codomain + "'");
    }
    std::vector<int> image(std::size_t(dom->point_count()), -1);
    for (const auto& [from, to] : raw_map->arrows) {
      auto p = dom->find_point(from);
      if (!p)
        die(Errc::UnknownIdentifier, source_name, raw_map->line,
            "unknown domain point '" + from + "'");
      auto q = cod->find_point(to);
      if (!q)
        die(Errc::UnknownIdentifier, source_name, raw_map->line,
            "unknown codomain point '" + to + "'");
      if (image[std::size_t(*p)] != -1)
        die(Errc::SyntaxError, source_name, raw_map->line, "point '" + from + "' mapped twice");
      image[std::size_t(*p)] = *q;
    }
    for (int p = 0; p < dom->point_count(); ++p)
      if (image[std::size_t(p)] == -1)
        die(Errc::SyntaxError, source_name, raw_map->line,
            "point '" + dom->point_name(p) + "' has no image");
    try {
      out.map = MeasurableMap::create(dom, cod, std::move(image));
    } catch (const Error& e) {
      die(e.code(), source_name, raw_map->line, e.message());
    }
  }

  if (markov) {
    try {
      validate_model(*markov);
    } catch (const Error& e) {
      die(e.code(), source_name, markov_line, e.message());
    }
    out.markov = std::move(markov);
  }

  for (const RawSet& rs : raw_sets) {
    if (out.spaces.empty())
      die(Errc::SyntaxError, source_name, rs.line, "@set needs a declared space");
    const SpacePtr& sp = out.domain();
    Bits points(sp->point_count());
    for (const auto& t : rs.tokens) {
      if (auto atom = sp->find_atom(t)) {
        for (int p : sp->atom_points(*atom)) points.set(p);
      } else if (auto point = sp->find_point(t)) {
        points.set(*point);
      } else {
        die(Errc::UnknownIdentifier, source_name, rs.line,
            "'" + t + "' names neither an atom nor a point of '" + sp->name() + "'");
      }
    }
    PointSet ps{sp, points};
    if (!is_atom_union(ps))
      die(Errc::NotAnAtomUnion, source_name, rs.line,
          "set '" + rs.name + "' is not a union of atoms");
    if (out.sets.count(rs.name))
      die(Errc::SyntaxError, source_name, rs.line, "set '" + rs.name + "' declared twice");
    out.sets.emplace(rs.name, measurable_hull(ps));
  }

  if (out.spaces.empty() && !out.markov)
    fail(Errc::SyntaxError, source_name + ": no @space or @markov block found");
  return out;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::SyntaxError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_file(buf.str(), path);
}

SystemFile normalized(const SystemFile& file) {
  SystemFile out;
  out.source = file.source;
  out.markov = file.markov;

  std::vector<SpacePtr> rebuilt;
  for (const SpacePtr& sp : file.spaces) {
    if (!sp->total_weight().is_positive())
      fail(Errc::NotNormalized, "cannot normalize '" + sp->name() + "': total mass " +
                                    sp->total_weight().str());
    rebuilt.push_back(sp->rescaled(Rat(1) / sp->total_weight()));
  }
  out.spaces = rebuilt;

  auto rebuilt_of = [&](const SpacePtr& old) -> const SpacePtr& {
    for (std::size_t i = 0; i < file.spaces.size(); ++i)
      if (file.spaces[i] == old) return out.spaces[i];
    fail(Errc::SpaceMismatch, "space lost during normalization");
  };

  if (file.map) {
    std::vector<int> image(std::size_t(file.map->domain()->point_count()), 0);
    for (int p = 0; p < file.map->domain()->point_count(); ++p) image[std::size_t(p)] = file.map->image_point(p);
    out.map = MeasurableMap::create(rebuilt_of(file.map->domain()), rebuilt_of(file.map->codomain()),
                                    std::move(image));
  }
  for (const auto& [name, set] : file.sets)
    out.sets.emplace(name, mset_of_mask(rebuilt_of(set.space), set.atoms));
  return out;
}

std::vector<Rat> parse_density_file(const std::string& text, const std::string& source_name,
                                    const SpacePtr& space) {
  std::vector<Rat> values(std::size_t(space->atom_count()), Rat(0));
  for (const Line& line : tokenize(text)) {
    if (line.tokens.size() != 2)
      die(Errc::SyntaxError, source_name, line.number, "expected '<atom-id> <rat>'");
    auto atom = space->find_atom(line.tokens[0]);
    if (!atom)
      die(Errc::UnknownIdentifier, source_name, line.number,
          "unknown atom '" + line.tokens[0] + "'");
    values[std::size_t(*atom)] = parse_rat_at(source_name, line.number, line.tokens[1]);
  }
  return values;
}

TermsFile parse_terms_file(const std::string& text, const std::string& source_name,
                           const SystemFile& context) {
  const SpacePtr& sp = context.domain();
  TermsFile out;
  for (const Line& line : tokenize(text)) {
    const std::string& head = line.tokens.front();
    if (head != "pre" && head != "period")
      die(Errc::SyntaxError, source_name, line.number, "expected 'pre ...' or 'period ...'");
    Bits points(sp->point_count());
    for (std::size_t k = 1; k < line.tokens.size(); ++k) {
      const std::string& t = line.tokens[k];
      if (auto named = context.sets.find(t); named != context.sets.end()) {
        realize_points(named->second).points.for_each([&](int p) { points.set(p); });
      } else if (auto atom = sp->find_atom(t)) {
        for (int p : sp->atom_points(*atom)) points.set(p);
      } else if (auto point = sp->find_point(t)) {
        points.set(*point);
      } else {
        die(Errc::UnknownIdentifier, source_name, line.number, "'" + t + "' is unknown");
      }
    }
    PointSet ps{sp, points};
    if (!is_atom_union(ps))
      die(Errc::NotAnAtomUnion, source_name, line.number, "term is not a union of atoms");
    (head == "pre" ? out.pre : out.period).push_back(measurable_hull(ps));
  }
  return out;
}

}  // namespace essim
