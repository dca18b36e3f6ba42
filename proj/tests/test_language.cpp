#include <algorithm>
#include <filesystem>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "rsub/error.hpp"
#include "rsub/language.hpp"

using namespace rsub;
using fixtures::str;
using fixtures::strs;
using fixtures::word;

namespace {
  // Length-n factors of theta^k(a) over all letters and all k up to the
  // deepest level whose realisation set stays below a size cap.
  std::vector<Word> brute_force_legal(RandomSubstitution const& th, std::size_t n) {
    std::set<Word> out;
    for (std::size_t a = 0; a < th.size(); ++a) {
      std::vector<Word> level{Word{static_cast<Letter>(a)}};
      for (int k = 0; k < 12; ++k) {
        for (auto const& w : level) {
          for (std::size_t i = 0; i + n <= w.size(); ++i) {
            out.insert(w.substr(i, n));
          }
        }
        std::set<Word> next;
        std::size_t    budget = 0;
        for (auto const& w : level) {
          budget += RealisationStream(th, w).choice_count();
        }
        if (budget > 400000) {
          break;
        }
        for (auto const& w : level) {
          for (auto const& x : apply(th, w)) {
            next.insert(x);
          }
        }
        level.assign(next.begin(), next.end());
      }
    }
    return {out.begin(), out.end()};
  }

  std::vector<Word> table_words(Language const& L, std::size_t n) {
    return L.legal_words(n)->words();
  }
}  // namespace

TEST_CASE("word tables pack and unpack") {
  auto                     all = fixtures::all_words(3, 4);
  std::vector<Word>        some(all.rbegin(), all.rend());
  WordTable                t(4, 3, some, 2);
  CHECK(t.size() == 81);
  CHECK(t.words() == all);
  CHECK(t.depth() == 2);
  CHECK(t.contains(Word{2, 1, 0, 0}));
  CHECK(!t.contains(Word{2, 1, 0}));
  CHECK(!t.contains(Word{3, 1, 0, 0}));

  // 40 letters over a 3-letter alphabet does not fit into 64 bits
  CHECK(!WordTable::packable(40, 3));
  Word      x = Word{1}.power(40), y = Word{0}.power(40);
  WordTable big(40, 3, std::vector<Word>{x, y, x}, 0);
  CHECK(big.size() == 2);
  CHECK(big.at(0) == y);
  CHECK(big.contains(x));
}

TEST_CASE("legal words on the worked examples") {
  Language fib(fixtures::fibonacci());
  CHECK(fib.is_legal(word(fib.substitution(), "aaa")));
  auto l3 = strs(fib.substitution(), table_words(fib, 3));
  CHECK(std::find(l3.begin(), l3.end(), "aaa") != l3.end());

  Language rpd(fixtures::period_doubling());
  auto const& th = rpd.substitution();
  CHECK(strs(th, table_words(rpd, 1)) == std::vector<std::string>{"a", "b"});
  auto r3 = strs(th, table_words(rpd, 3));
  CHECK(std::find(r3.begin(), r3.end(), "bbb") == r3.end());
  CHECK(rpd.is_legal(word(th, "aab")));
  CHECK(!rpd.is_legal(word(th, "bbb")));
  CHECK(rpd.is_legal(Word()));
  CHECK(!rpd.is_legal(Word{0, 5}));
  CHECK_THROWS_AS(rpd.legal_words(0), InvalidArgument);
}

TEST_CASE("legal words need a primitive compatible substitution") {
  Language identity(fixtures::make({"a", "b"}, {{"a"}, {"b"}}));
  CHECK_THROWS_AS(identity.legal_words(2), PreconditionError);
  Language incompatible(fixtures::make({"a", "b"}, {{"a", "ab"}, {"a"}}));
  CHECK_THROWS_AS(incompatible.legal_words(2), PreconditionError);
  // the level iteration itself terminates anyway
  CHECK(identity.legal_words_by_levels(1).size() == 2);
  CHECK(identity.legal_words_by_levels(2).size() == 0);
}

TEST_CASE("level iteration agrees with brute-force expansion") {
  for (auto const& th : {fixtures::period_doubling(), fixtures::fibonacci(),
                         fixtures::length_five(), fixtures::mixed_length(),
                         fixtures::three_letter()}) {
    Language L(th);
    // the expansion budget only reaches every 6-word for the short images
    std::size_t top = th.max_image_len() > 5 ? 5 : 6;
    for (std::size_t n = 1; n <= top; ++n) {
      CAPTURE(to_spec_text(th));
      CAPTURE(n);
      CHECK(L.legal_words_by_levels(n).words() == brute_force_legal(th, n));
    }
  }
}

TEST_CASE("cover generation agrees with level iteration") {
  for (auto const& th : {fixtures::period_doubling(), fixtures::length_five(),
                         fixtures::mixed_length(), fixtures::three_letter()}) {
    Language L(th);
    REQUIRE(L.covers_available());
    for (std::size_t n = 3; n <= 12; ++n) {
      CAPTURE(to_spec_text(th));
      CAPTURE(n);
      CHECK(L.legal_words_by_covers(n).words() == L.legal_words_by_levels(n).words());
    }
  }
  CHECK(!Language(fixtures::fibonacci()).covers_available());
}

TEST_CASE("membership by covers agrees with the tables") {
  for (auto const& th : {fixtures::period_doubling(), fixtures::mixed_length()}) {
    Language L(th, LanguageOptions{.table_limit = 2});
    for (std::size_t n = 3; n <= 13; ++n) {
      auto table = L.legal_words_by_levels(n);
      for (auto const& w : fixtures::all_words(2, n)) {
        CAPTURE(str(th, w));
        CHECK(L.is_legal_by_covers(w) == table.contains(w));
      }
    }
  }
  // long words: random samples against the full table
  Language        big(fixtures::period_doubling(), LanguageOptions{.table_limit = 4});
  Language        ref(fixtures::period_doubling());
  std::mt19937_64 rng(1);
  auto            table = ref.legal_words(22);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = trial % 2 ? table->at(rng() % table->size()) : fixtures::random_word(rng, 2, 22);
    CHECK(big.is_legal(w) == table->contains(w));
  }
}

TEST_CASE("property: factor closure of legal words") {
  Language rpd(fixtures::period_doubling());
  for (std::size_t n = 2; n <= 10; ++n) {
    auto table = rpd.legal_words(n);
    for (std::size_t k = 0; k < table->size(); ++k) {
      Word w = table->at(k);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t len = 1; i + len <= n; ++len) {
          REQUIRE(rpd.is_legal(w.substr(i, len)));
        }
      }
    }
  }
}

TEST_CASE("property: substitution closure of legal words") {
  for (auto const& th : {fixtures::period_doubling(), fixtures::fibonacci(),
                         fixtures::mixed_length()}) {
    Language L(th);
    for (std::size_t n = 1; n <= 5; ++n) {
      auto table = L.legal_words(n);
      for (std::size_t k = 0; k < table->size(); ++k) {
        for (auto const& x : apply(th, table->at(k))) {
          for (std::size_t i = 0; i + n <= x.size(); ++i) {
            REQUIRE(table->contains(x.substr(i, n)));
          }
        }
      }
    }
  }
}

TEST_CASE("tables are shared between concurrent readers") {
  Language                                      L(fixtures::period_doubling());
  std::vector<std::shared_ptr<WordTable const>> got(8);
  std::vector<std::thread>                      pool;
  for (std::size_t t = 0; t < got.size(); ++t) {
    pool.emplace_back([&, t] { got[t] = L.legal_words(18); });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (auto const& g : got) {
    CHECK(g == got[0]);
  }
}

TEST_CASE("tables round-trip through the disk cache") {
  auto dir = std::filesystem::temp_directory_path() / "rsub-language-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto     th = fixtures::three_letter();
  Language first(th, LanguageOptions{.cache_dir = dir});
  auto     built = first.legal_words(7);
  auto     file  = dir / (fingerprint(th) + "-7.words");
  REQUIRE(std::filesystem::exists(file));

  Language second(th, LanguageOptions{.cache_dir = dir});
  auto     loaded = second.legal_words(7);
  CHECK(loaded->words() == built->words());
  CHECK(loaded->depth() == built->depth());

  // multi-character symbols are written dot-separated
  auto multi = fixtures::make({"x1", "x2"}, {{"x1.x2", "x2.x1"}, {"x1.x1"}});
  Language m(multi, LanguageOptions{.cache_dir = dir});
  auto     t3 = m.legal_words(3);
  auto     rt = read_table(dir / (fingerprint(multi) + "-3.words"), 3, multi.alphabet());
  CHECK(rt.words() == t3->words());
  std::filesystem::remove_all(dir);
}

TEST_CASE("decompositions") {
  Language    rpd(fixtures::period_doubling());
  auto const& th = rpd.substitution();
  auto        d  = decompose(rpd, word(th, "aabaababaaabaababa"));
  REQUIRE(d.size() == 1);
  CHECK(str(th, d[0].preimage) == "baaababaa");
  CHECK(d[0].cut_points.front() == 0);
  CHECK(d[0].cut_points.back() == 18);
  CHECK(d[0].realisations.size() == 9);

  auto ab = decompose(rpd, word(th, "ab"));
  REQUIRE(ab.size() == 1);
  CHECK(str(th, ab[0].preimage) == "a");
  CHECK(decompose(rpd, word(th, "aba")).empty());
  CHECK(decompose(rpd, Word()).empty());
  CHECK(str(th, decompose(rpd, word(th, "abba"))[0].preimage) == "aa");
  // aa.aa.aa would need the illegal preimage bbb
  CHECK(decompose(rpd, word(th, "aaaaaa")).empty());
  CHECK(decompose(rpd, word(th, "aabaab"), DecomposeOptions{.max_preimage_length = 2}).empty());

  // ambiguous without disjoint images: aba = ab.a = a.ba
  Language fib(fixtures::fibonacci());
  auto     f = decompose(fib, word(fib.substitution(), "aba"));
  REQUIRE(f.size() == 2);
  CHECK(strs(fib.substitution(), {f[0].preimage, f[1].preimage})
        == std::vector<std::string>{"ab", "ba"});
}

TEST_CASE("property: decompositions are sound and unique under disjoint images") {
  Language    rpd(fixtures::period_doubling());
  auto const& th = rpd.substitution();
  std::size_t nonempty = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    auto table = rpd.legal_words(n);
    for (std::size_t k = 0; k < table->size(); ++k) {
      Word w  = table->at(k);
      auto ds = decompose(rpd, w);
      REQUIRE(ds.size() <= 1);
      for (auto const& dec : ds) {
        ++nonempty;
        Word joined;
        for (std::size_t i = 0; i < dec.realisations.size(); ++i) {
          auto const& imgs = th.images(dec.preimage[i]);
          CHECK(std::binary_search(imgs.begin(), imgs.end(), dec.realisations[i]));
          CHECK(dec.cut_points[i] == joined.size());
          joined += dec.realisations[i];
        }
        CHECK(joined == w);
        CHECK(rpd.is_legal(dec.preimage));
      }
    }
  }
  CHECK(nonempty >= 100);
}

TEST_CASE("unavoidable sets") {
  Language    five(fixtures::length_five());
  auto const& t5 = five.substitution();
  // aaaab alone does not hit every 16-letter legal word
  auto single = unavoidable(five, {word(t5, "aaaab")}, 16);
  CHECK(!single.unavoidable);
  REQUIRE(single.witness);
  CHECK(!single.witness->contains(word(t5, "aaaab")));
  CHECK(five.is_legal(*single.witness));

  // legal 5-words that are not inflation words
  std::vector<Word> V;
  auto              l5 = five.legal_words(5);
  for (std::size_t k = 0; k < l5->size(); ++k) {
    Word w      = l5->at(k);
    bool inflat = false;
    for (std::size_t a = 0; a < t5.size(); ++a) {
      auto const& imgs = t5.images(static_cast<Letter>(a));
      inflat           = inflat || std::binary_search(imgs.begin(), imgs.end(), w);
    }
    if (!inflat) {
      V.push_back(w);
    }
  }
  CHECK(V.size() == 13);
  CHECK(unavoidable(five, V, 16).unavoidable);
  CHECK(!unavoidable(five, V, 10).unavoidable);

  Language    rpd(fixtures::period_doubling());
  auto const& th = rpd.substitution();
  auto        bb = unavoidable(rpd, {word(th, "bb")}, 8);
  CHECK(!bb.unavoidable);
  REQUIRE(bb.witness);
  // the witness avoids bb; (aab)^infinity has such windows
  CHECK(!bb.witness->contains(word(th, "bb")));
  CHECK(rpd.is_legal(word(th, "aabaabaa")));
  CHECK(unavoidable(rpd, {word(th, "a"), word(th, "b")}, 1).unavoidable);

  CHECK_THROWS_AS(unavoidable(rpd, {word(th, "bbb")}, 8), InvalidArgument);
  CHECK_THROWS_AS(unavoidable(rpd, {word(th, "aab")}, 2), InvalidArgument);
}
