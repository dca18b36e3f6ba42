#pragma once

// JSON encodings of analysis results. Words are written with the alphabet's
// own notation, so every payload is readable next to its spec file.
//
// Decoders exist for the result types a caller might want to reload; they
// throw ParseError (line 0) on malformed input.

#include <string>
#include <vector>

#include "json.hpp"
#include "rsub/disjoint.hpp"
#include "rsub/language.hpp"
#include "rsub/periodic.hpp"
#include "rsub/spectral.hpp"

namespace rsub::report {

  using json = nlohmann::json;

  json words(Alphabet const& A, std::vector<Word> const& ws);

  json compatibility(Alphabet const& A, CompatibilityReport const& c);
  json perron(PerronData const& p);
  json disjoint(Alphabet const& A, DisjointReport const& r);
  json inflation(Alphabet const& A, InflationReport const& r);
  json decompositions(Alphabet const& A, std::vector<Decomposition> const& ds);
  json necessary(NecessaryConditions const& nc);
  json existence(Alphabet const& A, ExistenceReport const& r);
  json block_verdict(Alphabet const& A, PeriodicBlockVerdict const& v);
  // blocks are left out when with_blocks is false
  json enumeration(Alphabet const& A, EnumerationReport const& r, bool with_blocks = true);

  // Summary used by the analyze command. Parts that need a primitive
  // compatible substitution are null otherwise, with the reason under
  // "preconditions".
  json analysis(Analyzer const& an, std::size_t existence_window);

  DisjointReport        disjoint_from(Alphabet const& A, json const& j);
  ExistenceReport       existence_from(Alphabet const& A, json const& j);
  PeriodicBlockVerdict  block_verdict_from(Alphabet const& A, json const& j);
  EnumerationReport     enumeration_from(Alphabet const& A, json const& j);
  std::vector<Decomposition> decompositions_from(Alphabet const& A, json const& j);

}  // namespace rsub::report
