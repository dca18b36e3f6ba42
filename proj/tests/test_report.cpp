#include "doctest.h"
#include "fixtures.hpp"
#include "rsub/error.hpp"
#include "rsub/report.hpp"

using namespace rsub;
using report::json;

namespace {

  // dump, parse, decode, encode again: the payload must not move
  template <class Encode, class Decode>
  void round_trip(json const& original, Encode encode, Decode decode) {
    auto reparsed = json::parse(original.dump());
    CHECK(reparsed == original);
    CHECK(encode(decode(reparsed)) == original);
  }

}  // namespace

TEST_CASE("disjoint reports round trip") {
  for (auto const& theta : {fixtures::fibonacci(), fixtures::period_doubling(),
                            fixtures::three_letter(), fixtures::mixed_length()}) {
    Language    lang(theta);
    auto const& A = theta.alphabet();
    for (bool shortcut : {true, false}) {
      auto r = has_disjoint_images(lang, {.constant_length_shortcut = shortcut});
      auto j = report::disjoint(A, r);
      round_trip(j, [&](auto const& x) { return report::disjoint(A, x); },
                 [&](json const& x) { return report::disjoint_from(A, x); });
      auto back = report::disjoint_from(A, j);
      CHECK(back.disjoint == r.disjoint);
      CHECK(back.certificate.size() == r.certificate.size());
      if (r.witness) {
        CHECK(back.witness->w == r.witness->w);
      }
    }
  }
}

TEST_CASE("enumeration and block reports round trip") {
  Analyzer    an(fixtures::period_doubling());
  auto const& A = an.substitution().alphabet();
  for (std::size_t p : {3, 4, 6, 9}) {
    auto r = enumerate_blocks(an, p);
    for (bool with_blocks : {true, false}) {
      auto j = report::enumeration(A, r, with_blocks);
      round_trip(j, [&](auto const& x) { return report::enumeration(A, x, with_blocks); },
                 [&](json const& x) { return report::enumeration_from(A, x); });
    }
    CHECK(report::enumeration_from(A, report::enumeration(A, r)).blocks == r.blocks);
  }
  for (auto s : {"aabaababa", "aaabababa", "aab", "ab", "aabaab"}) {
    auto v = is_periodic_block(an, fixtures::word(an.substitution(), s));
    auto j = report::block_verdict(A, v);
    round_trip(j, [&](auto const& x) { return report::block_verdict(A, x); },
               [&](json const& x) { return report::block_verdict_from(A, x); });
    if (v.periodic) {
      CHECK(verify_loop(an.substitution(), report::block_verdict_from(A, j)));
    }
  }
}

TEST_CASE("existence and decomposition reports round trip") {
  for (auto const& theta : {fixtures::fibonacci(), fixtures::period_doubling(),
                            fixtures::length_five()}) {
    Analyzer    an(theta);
    auto const& A = theta.alphabet();
    auto        j = report::existence(A, emptiness_check(an, 16));
    round_trip(j, [&](auto const& x) { return report::existence(A, x); },
               [&](json const& x) { return report::existence_from(A, x); });
  }
  Language    lang(fixtures::fibonacci());
  auto const& A = lang.substitution().alphabet();
  auto        j = report::decompositions(A, decompose(lang, fixtures::word(lang.substitution(), "abaab")));
  CHECK(j.size() >= 1);
  round_trip(j, [&](auto const& x) { return report::decompositions(A, x); },
             [&](json const& x) { return report::decompositions_from(A, x); });
}

TEST_CASE("multi-character alphabets keep dotted words") {
  auto        theta = fixtures::make({"x1", "x2"}, {{"x1.x2", "x2.x1"}, {"x1.x1"}});
  Analyzer    an(theta);
  auto const& A = theta.alphabet();
  auto        j = report::enumeration(A, enumerate_blocks(an, 3));
  CHECK(j["blocks"][0] == "x1.x1.x2");
  CHECK(report::enumeration_from(A, j).blocks.size() == 3);
}

TEST_CASE("malformed reports are rejected") {
  auto const  theta = fixtures::period_doubling();
  auto const& A     = theta.alphabet();
  CHECK_THROWS_AS(report::enumeration_from(A, json{{"period", 3}}), ParseError);
  CHECK_THROWS_AS(report::block_verdict_from(A, json::array()), ParseError);
  json j = report::enumeration(A, EnumerationReport{});
  j["path"] = "sideways";
  CHECK_THROWS_AS(report::enumeration_from(A, j), ParseError);
  j = report::enumeration(A, EnumerationReport{});
  j["blocks"] = {"abc"};
  CHECK_THROWS_AS(report::enumeration_from(A, j), ParseError);
}

TEST_CASE("analysis summary") {
  Analyzer fib(fixtures::fibonacci());
  auto     j = report::analysis(fib, 16);
  CHECK(j["perron"]["lambda_integer"] == false);
  CHECK(j["disjoint_images"]["witness"]["w"] == "aba");
  CHECK(j["existence"]["verdict"] == "proven_empty");

  Analyzer incompatible(fixtures::make({"a", "b"}, {{"ab", "aa"}, {"a"}}));
  j = report::analysis(incompatible, 16);
  CHECK(j["compatibility"]["compatible"] == false);
  CHECK(j["perron"].is_null());
  CHECK(j["preconditions"].is_string());

  Analyzer rpd(fixtures::period_doubling());
  j = report::analysis(rpd, 16);
  CHECK(j["perron"]["r_hat"] == json{2, 1});
  CHECK(j["perron"]["r_normalized"] == json{"2/3", "1/3"});
  CHECK(j["perron"]["characteristic_polynomial"] == json{-2, -1, 1});
}
