#pragma once

// Deciding whether theta(u) and theta(v) can share a realisation for
// distinct legal words u and v.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rsub/core.hpp"
#include "rsub/language.hpp"

namespace rsub {

  struct DisjointWitness {
    // u < v in shortlex order; w lies in theta(u) and theta(v).
    Word u;
    Word v;
    Word w;
  };

  enum class Side { left, right };

  struct RemainderState {
    // The part of w covered by one side but not yet by the owing side.
    Word remainder;
    Side owing = Side::left;

    friend bool operator==(RemainderState const&, RemainderState const&) = default;
  };

  // Start of a search: distinct letters a (left) and b (right) whose chosen
  // images satisfy "wa is a prefix of wb".
  struct Quadruple {
    Letter a = 0;
    Letter b = 0;
    Word   wa;
    Word   wb;
  };

  struct QuadrupleTrace {
    Quadruple                   start;
    std::vector<RemainderState> explored;
  };

  enum class DisjointMethod { constant_length, remainder_search };

  struct DisjointReport {
    bool                           disjoint = true;
    DisjointMethod                 method   = DisjointMethod::remainder_search;
    std::optional<DisjointWitness> witness;
    // Present for a positive verdict of the remainder search.
    std::vector<QuadrupleTrace> certificate;
  };

  struct DisjointOptions {
    // Answer constant-length substitutions by comparing letter images.
    bool        constant_length_shortcut = true;
    // Guard against runaway searches; exceeding it throws.
    std::size_t max_nodes = 5'000'000;
  };

  // Throws PreconditionError when some letter has images of different
  // lengths, and whatever legality checks throw (the language needs a
  // compatible primitive substitution).
  DisjointReport has_disjoint_images(Language const& lang, DisjointOptions opts = {});

  // Re-checks a witness from scratch: u != v, both legal, and w parses as a
  // realisation of each.
  bool verify_witness(Language const& lang, DisjointWitness const& witness);

  // Whether w is a realisation of u.
  bool realises(RandomSubstitution const& theta, Word const& u, Word const& w);

  struct InflationViolation {
    std::size_t power = 0;
    Letter      letter = 0;
    Word        u;
    Word        v;
    Word        w;
  };

  struct InflationReport {
    std::optional<InflationViolation> violation;
    std::size_t                       checked_up_to = 0;
  };

  // Searches m = 1..m_max, every letter a and every pair u < v in theta^m(a)
  // for a common realisation of theta(u) and theta(v). Requires a compatible
  // substitution.
  InflationReport has_disjoint_inflation_images(RandomSubstitution const& theta,
                                                std::size_t               m_max);

  // Whether theta(u) and theta(v) intersect; returns a common realisation.
  std::optional<Word> common_realisation(RandomSubstitution const& theta,
                                         Word const&               u,
                                         Word const&               v);

  std::string to_string(Side side);
  std::string to_string(DisjointMethod method);

}  // namespace rsub
