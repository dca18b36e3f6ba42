#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "fixtures.hpp"
#include "rsub/error.hpp"
#include "rsub/spectral.hpp"

using namespace rsub;

namespace {
  // Independent determinant oracle: Laplace expansion over BigInt.
  BigInt det(std::vector<std::vector<BigInt>> const& m) {
    std::size_t n = m.size();
    if (n == 0) {
      return 1;
    }
    BigInt total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<BigInt>> minor;
      for (std::size_t i = 1; i < n; ++i) {
        auto& row = minor.emplace_back();
        for (std::size_t k = 0; k < n; ++k) {
          if (k != j) {
            row.push_back(m[i][k]);
          }
        }
      }
      BigInt term = m[0][j] * det(minor);
      total += (j % 2 == 0) ? term : BigInt(-term);
    }
    return total;
  }

  BigInt eval_char(IntMatrix const& M, std::int64_t x) {
    std::vector<std::vector<BigInt>> m(M.dim(), std::vector<BigInt>(M.dim()));
    for (std::size_t i = 0; i < M.dim(); ++i) {
      for (std::size_t j = 0; j < M.dim(); ++j) {
        m[i][j] = (i == j ? x : 0) - M(i, j);
      }
    }
    return det(m);
  }

  BigInt eval_poly(std::vector<BigInt> const& c, std::int64_t x) {
    BigInt v = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      v = v * x + c[i];
    }
    return v;
  }
}  // namespace

TEST_CASE("compatibility") {
  CHECK(is_compatible(fixtures::fibonacci()).compatible);
  CHECK(is_compatible(fixtures::make({"a", "b"}, {{"aab", "baa"}, {"ab"}})).compatible);
  auto bad = is_compatible(fixtures::make({"a", "b"}, {{"a", "ab"}, {"b"}}));
  REQUIRE(!bad.compatible);
  REQUIRE(bad.counterexample);
  CHECK(bad.counterexample->letter == 0);
  CHECK(bad.counterexample->first_vector.counts == std::vector<std::uint64_t>{1, 0});
  CHECK(bad.counterexample->second_vector.counts == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("substitution matrices") {
  CHECK(substitution_matrix(fixtures::fibonacci()) == IntMatrix{{1, 1}, {1, 0}});
  CHECK(substitution_matrix(fixtures::period_doubling()) == IntMatrix{{1, 2}, {1, 0}});
  CHECK(substitution_matrix(fixtures::length_five()) == IntMatrix{{3, 5}, {2, 0}});
  CHECK_THROWS_AS(substitution_matrix(fixtures::make({"a", "b"}, {{"a", "ab"}, {"b"}})),
                  PreconditionError);
}

TEST_CASE("primitivity and constant length") {
  CHECK(is_primitive(fixtures::fibonacci()));
  CHECK(is_primitive(fixtures::period_doubling()));
  CHECK(primitivity_exponent(fixtures::period_doubling()) == 2);
  CHECK(!is_primitive(fixtures::make({"a", "b"}, {{"a"}, {"b"}})));
  CHECK(!is_primitive(fixtures::make({"a", "b"}, {{"ab"}, {"b"}})));
  // incompatible but primitive by the combinatorial definition
  CHECK(is_primitive(fixtures::make({"a", "b"}, {{"a", "ab"}, {"a"}})));

  CHECK(constant_length(fixtures::period_doubling()) == 2);
  CHECK(!constant_length(fixtures::fibonacci()));
  CHECK(constant_length(fixtures::length_five()) == 5);
}

TEST_CASE("Perron data") {
  auto fib = perron_analysis(fixtures::fibonacci());
  CHECK(!fib.lambda_exact);
  CHECK(!fib.r_hat);
  CHECK(!fib.virtual_period);
  CHECK(std::abs(fib.lambda_approx - (1 + std::sqrt(5.0)) / 2) < 1e-9);

  auto rpd = perron_analysis(fixtures::period_doubling());
  CHECK(rpd.lambda_exact == 2);
  CHECK(rpd.r_hat == std::vector<std::int64_t>{2, 1});
  CHECK(rpd.virtual_period == 3);
  REQUIRE(rpd.r_normalized.size() == 2);
  CHECK(rpd.r_normalized[0] == boost::rational<std::int64_t>(2, 3));
  CHECK(rpd.r_normalized[1] == boost::rational<std::int64_t>(1, 3));

  auto five = perron_analysis(fixtures::length_five());
  CHECK(five.lambda_exact == 5);
  CHECK(five.r_hat == std::vector<std::int64_t>{5, 2});
  CHECK(five.virtual_period == 7);

  auto three = perron_analysis(fixtures::three_letter());
  CHECK(!three.lambda_exact);  // lengths 4, 3, 8 give no integer eigenvalue

  CHECK_THROWS_AS(perron_analysis(fixtures::make({"a", "b"}, {{"a"}, {"b"}})),
                  PreconditionError);
  CHECK_THROWS_AS(perron_analysis(fixtures::make({"a", "b"}, {{"a", "ab"}, {"a"}})),
                  PreconditionError);
}

TEST_CASE("characteristic polynomial against a determinant oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t d = 1 + trial % 5;
    IntMatrix   M(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        M(i, j) = static_cast<std::int64_t>(rng() % 6);
      }
    }
    auto c = characteristic_polynomial(M);
    REQUIRE(c.size() == d + 1);
    CHECK(c[d] == 1);
    for (std::int64_t x : {-3, -1, 0, 1, 2, 7}) {
      CHECK(eval_poly(c, x) == eval_char(M, x));
    }
  }
}

TEST_CASE("property: Perron data of primitive constant-length substitutions") {
  // Random constant-length compatible substitutions on two or three letters:
  // lambda is the length, M r = lambda r exactly, gcd(r) = 1.
  std::mt19937_64 rng(17);
  int             checked = 0;
  for (int trial = 0; checked < 100 && trial < 2000; ++trial) {
    std::size_t d = 2 + trial % 2;
    std::size_t l = 2 + rng() % 3;
    std::vector<std::vector<Word>> images(d);
    for (std::size_t a = 0; a < d; ++a) {
      auto w = fixtures::random_word(rng, d, l);
      images[a].push_back(w);
      images[a].push_back(least_rotation(w));  // same abelianisation
    }
    std::vector<std::string> syms;
    for (std::size_t a = 0; a < d; ++a) {
      syms.push_back(std::string(1, char('a' + a)));
    }
    RandomSubstitution th(Alphabet(syms), images);
    if (!is_primitive(th)) {
      continue;
    }
    ++checked;
    auto P = perron_analysis(th);
    REQUIRE(P.lambda_exact);
    CHECK(*P.lambda_exact == static_cast<std::int64_t>(l));
    CHECK(std::abs(P.lambda_approx - static_cast<double>(l)) < 1e-9);
    auto Mr = P.matrix * *P.r_hat;
    std::int64_t g = 0, sum = 0;
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(Mr[i] == *P.lambda_exact * (*P.r_hat)[i]);
      CHECK((*P.r_hat)[i] > 0);
      g = std::gcd(g, (*P.r_hat)[i]);
      sum += (*P.r_hat)[i];
    }
    CHECK(g == 1);
    CHECK(*P.virtual_period == sum);
  }
  CHECK(checked == 100);
}

TEST_CASE("property: matrices and virtual periods of powers") {
  for (auto const& th : {fixtures::period_doubling(), fixtures::fibonacci(),
                         fixtures::length_five()}) {
    auto M = substitution_matrix(th);
    auto P = perron_analysis(th);
    std::size_t kmax = th.max_image_len() > 2 ? 2 : 3;
    for (std::size_t k = 1; k <= kmax; ++k) {
      auto thk = power(th, k);
      CHECK(substitution_matrix(thk) == M.pow(k));
      auto Pk = perron_analysis(thk);
      CHECK(Pk.virtual_period == P.virtual_period);
      if (P.lambda_exact) {
        CHECK(Pk.lambda_exact == static_cast<std::int64_t>(std::pow(*P.lambda_exact, k)));
      }
    }
  }
}
