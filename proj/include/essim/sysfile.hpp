#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "essim/map.hpp"
#include "essim/markov.hpp"

namespace essim {

// A parsed description file. The line-oriented grammar ('#' starts a
// comment, tokens are whitespace-separated):
//
//   @space <name>                 then lines  point <id> <weight>
//   @partition <spacename>        then lines  atom <id>: <point> ...
//                                 (unlisted points stay singleton atoms)
//   @map [<domain> -> <codomain>] then lines  <point> -> <point>
//                                 (an endomap when spaces are omitted and
//                                 only one space is declared)
//   @set <id> = <atom-or-point> ...
//   @markov                       then lines  states <id> ...
//                                             init <rat> ...
//                                             row <state>: <rat> ...
//
// Weights parse as exact rationals "p/q" or integers; decimals are rejected.
// Set definitions must resolve to atom unions of the map's domain.
struct SystemFile {
  std::string source;
  std::vector<SpacePtr> spaces;
  std::optional<MeasurableMap> map;
  std::map<std::string, MSet> sets;  // ordered: deterministic listings
  std::optional<MarkovModel> markov;

  const SpacePtr& domain() const;
};

// Errors carry "source:line:" prefixes.
SystemFile parse_system_file(const std::string& text, const std::string& source_name);
SystemFile load_system_file(const std::string& path);

// Same spaces and map with all weights multiplied by 1/lambda(X); requires
// positive total mass. Named sets are re-resolved onto the new spaces.
SystemFile normalized(const SystemFile& file);

// Per-atom density values, one line each: <atom-id> <rat>; unlisted atoms
// get 0.
std::vector<Rat> parse_density_file(const std::string& text, const std::string& source_name,
                                    const SpacePtr& space);

// Eventually periodic set sequences for corridor verification: lines
// "pre <atom-or-point> ..." and "period <atom-or-point> ...", one term per
// line; "pre" and "period" with no further tokens add an empty term.
struct TermsFile {
  std::vector<MSet> pre;
  std::vector<MSet> period;
};
TermsFile parse_terms_file(const std::string& text, const std::string& source_name,
                           const SystemFile& context);

}  // namespace essim
