#pragma once

// Substitutions shared by the test suites, built without the spec parser so
// that parser bugs cannot leak into the other suites.

#include <random>
#include <string>
#include <vector>

#include "rsub/core.hpp"

namespace fixtures {

  inline rsub::RandomSubstitution make(std::vector<std::string> const&              symbols,
                                       std::vector<std::vector<std::string>> const& images) {
    rsub::Alphabet                       A(symbols);
    std::vector<std::vector<rsub::Word>> sets;
    for (auto const& row : images) {
      auto& set = sets.emplace_back();
      for (auto const& s : row) {
        set.push_back(A.parse(s));
      }
    }
    return rsub::RandomSubstitution(A, sets);
  }

  // a -> ab | ba, b -> aa
  inline rsub::RandomSubstitution period_doubling() {
    return make({"a", "b"}, {{"ab", "ba"}, {"aa"}});
  }

  // a -> ab | ba, b -> a
  inline rsub::RandomSubstitution fibonacci() {
    return make({"a", "b"}, {{"ab", "ba"}, {"a"}});
  }

  // constant length 5, no periodic points
  inline rsub::RandomSubstitution length_five() {
    return make({"a", "b"}, {{"aabba", "ababa"}, {"aaaaa"}});
  }

  // three letters, overlapping images
  inline rsub::RandomSubstitution three_letter() {
    return make({"0", "1", "2"}, {{"0102", "1200", "0012"}, {"010"}, {"20102010"}});
  }

  // two letters, variable length, disjoint images
  inline rsub::RandomSubstitution mixed_length() {
    return make({"0", "1"}, {{"010", "100"}, {"0101"}});
  }

  inline rsub::Word word(rsub::RandomSubstitution const& theta, std::string const& s) {
    return theta.alphabet().parse(s);
  }

  inline std::string str(rsub::RandomSubstitution const& theta, rsub::Word const& w) {
    return theta.alphabet().format(w);
  }

  inline std::vector<std::string> strs(rsub::RandomSubstitution const& theta,
                                       std::vector<rsub::Word> const&  ws) {
    std::vector<std::string> out;
    for (auto const& w : ws) {
      out.push_back(str(theta, w));
    }
    return out;
  }

  inline rsub::Word random_word(std::mt19937_64& rng, std::size_t d, std::size_t len) {
    std::uniform_int_distribution<int> letter(0, static_cast<int>(d) - 1);
    rsub::Word                         w;
    for (std::size_t i = 0; i < len; ++i) {
      w.push_back(static_cast<rsub::Letter>(letter(rng)));
    }
    return w;
  }

  // All words of length n over d letters, in lexicographic order.
  inline std::vector<rsub::Word> all_words(std::size_t d, std::size_t n) {
    std::vector<rsub::Word> out{rsub::Word()};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<rsub::Word> next;
      for (auto const& w : out) {
        for (std::size_t a = 0; a < d; ++a) {
          auto x = w;
          x.push_back(static_cast<rsub::Letter>(a));
          next.push_back(x);
        }
      }
      out = std::move(next);
    }
    return out;
  }

}  // namespace fixtures
