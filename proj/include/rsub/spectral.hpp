#pragma once

// Substitution matrix, compatibility, primitivity and exact Perron-Frobenius
// data.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "rsub/core.hpp"

namespace rsub {

  using BigInt = boost::multiprecision::cpp_int;

  // Dense square matrix of 64-bit integers, row-major.
  class IntMatrix {
   public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t d) : _d(d), _entries(d * d, 0) {}
    IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static IntMatrix identity(std::size_t d);

    std::size_t dim() const noexcept {
      return _d;
    }
    std::int64_t& operator()(std::size_t i, std::size_t j) {
      return _entries[i * _d + j];
    }
    std::int64_t operator()(std::size_t i, std::size_t j) const {
      return _entries[i * _d + j];
    }

    std::int64_t column_sum(std::size_t j) const;
    std::vector<std::int64_t> operator*(std::vector<std::int64_t> const& x) const;
    IntMatrix operator*(IntMatrix const& other) const;
    IntMatrix pow(std::size_t k) const;

    friend bool operator==(IntMatrix const&, IntMatrix const&) = default;

   private:
    std::size_t               _d = 0;
    std::vector<std::int64_t> _entries;
  };

  struct CompatibilityReport {
    struct Counterexample {
      Letter        letter;
      Word          first;
      Word          second;
      AbelianVector first_vector;
      AbelianVector second_vector;
    };

    bool                          compatible = true;
    std::optional<Counterexample> counterexample;

    explicit operator bool() const noexcept {
      return compatible;
    }
  };

  CompatibilityReport is_compatible(RandomSubstitution const& theta);

  // m_ij = |theta(a_j)|_{a_i}. Throws PreconditionError when theta is not
  // compatible.
  IntMatrix substitution_matrix(RandomSubstitution const& theta);

  // Least k with a_i appearing in some word of theta^k(a_j) for all i, j, or
  // nullopt when no k up to Wielandt's bound (d-1)^2 + 1 works. For
  // compatible substitutions this is the least k with M^k > 0.
  std::optional<std::size_t> primitivity_exponent(RandomSubstitution const& theta);

  bool is_primitive(RandomSubstitution const& theta);

  std::optional<std::size_t> constant_length(RandomSubstitution const& theta);

  // Coefficients c_0, ..., c_d of det(xI - M), computed exactly with the
  // Faddeev-LeVerrier recurrence; c_d = 1.
  std::vector<BigInt> characteristic_polynomial(IntMatrix const& m);

  struct PerronData {
    IntMatrix matrix;
    double    lambda_approx = 0;
    // Present exactly when the PF eigenvalue is an integer.
    std::optional<std::int64_t> lambda_exact;
    // Minimal positive integer right PF eigenvector.
    std::optional<std::vector<std::int64_t>> r_hat;
    // ||r_hat||_1
    std::optional<std::int64_t> virtual_period;
    // r_hat / ||r_hat||_1, empty when r_hat is absent.
    std::vector<boost::rational<std::int64_t>> r_normalized;
    std::vector<BigInt>                         characteristic_polynomial;
  };

  // Throws PreconditionError unless theta is compatible and primitive.
  PerronData perron_analysis(RandomSubstitution const& theta);

}  // namespace rsub
