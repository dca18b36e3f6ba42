#include "rsub/spectral.hpp"

#include <algorithm>
#include <complex>
#include <numeric>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "rsub/error.hpp"

namespace rsub {

  using BigRational = boost::multiprecision::cpp_rational;

  ////////////////////////////////////////////////////////////////////////
  // IntMatrix
  ////////////////////////////////////////////////////////////////////////

  IntMatrix::IntMatrix(
      std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : _d(rows.size()) {
    _entries.reserve(_d * _d);
    for (auto const& row : rows) {
      if (row.size() != _d) {
        throw InvalidArgument("IntMatrix must be square");
      }
      _entries.insert(_entries.end(), row.begin(), row.end());
    }
  }

  IntMatrix IntMatrix::identity(std::size_t d) {
    IntMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
      m(i, i) = 1;
    }
    return m;
  }

  std::int64_t IntMatrix::column_sum(std::size_t j) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < _d; ++i) {
      s += (*this)(i, j);
    }
    return s;
  }

  std::vector<std::int64_t>
  IntMatrix::operator*(std::vector<std::int64_t> const& x) const {
    if (x.size() != _d) {
      throw InvalidArgument("dimension mismatch");
    }
    std::vector<std::int64_t> y(_d, 0);
    for (std::size_t i = 0; i < _d; ++i) {
      for (std::size_t j = 0; j < _d; ++j) {
        y[i] += (*this)(i, j) * x[j];
      }
    }
    return y;
  }

  IntMatrix IntMatrix::operator*(IntMatrix const& other) const {
    if (other._d != _d) {
      throw InvalidArgument("dimension mismatch");
    }
    IntMatrix out(_d);
    for (std::size_t i = 0; i < _d; ++i) {
      for (std::size_t k = 0; k < _d; ++k) {
        auto a = (*this)(i, k);
        if (a == 0) {
          continue;
        }
        for (std::size_t j = 0; j < _d; ++j) {
          out(i, j) += a * other(k, j);
        }
      }
    }
    return out;
  }

  IntMatrix IntMatrix::pow(std::size_t k) const {
    IntMatrix result = identity(_d);
    IntMatrix base   = *this;
    while (k > 0) {
      if (k & 1) {
        result = result * base;
      }
      base = base * base;
      k >>= 1;
    }
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // Compatibility and primitivity
  ////////////////////////////////////////////////////////////////////////

  CompatibilityReport is_compatible(RandomSubstitution const& theta) {
    CompatibilityReport report;
    for (std::size_t a = 0; a < theta.size(); ++a) {
      auto const& imgs  = theta.images(a);
      auto        first = abelianise(imgs.front(), theta.size());
      for (std::size_t k = 1; k < imgs.size(); ++k) {
        auto v = abelianise(imgs[k], theta.size());
        if (!(v == first)) {
          report.compatible     = false;
          report.counterexample = CompatibilityReport::Counterexample{
              static_cast<Letter>(a), imgs.front(), imgs[k], first, v};
          return report;
        }
      }
    }
    return report;
  }

  IntMatrix substitution_matrix(RandomSubstitution const& theta) {
    auto compat = is_compatible(theta);
    if (!compat) {
      auto const& ce = *compat.counterexample;
      auto const& A  = theta.alphabet();
      throw PreconditionError("substitution is not compatible: images "
                              + A.format(ce.first) + " and "
                              + A.format(ce.second) + " of letter "
                              + A.symbol(ce.letter)
                              + " have different abelianisations");
    }
    std::size_t const d = theta.size();
    IntMatrix         m(d);
    for (std::size_t j = 0; j < d; ++j) {
      auto v = abelianise(theta.images(j).front(), d);
      for (std::size_t i = 0; i < d; ++i) {
        m(i, j) = static_cast<std::int64_t>(v.counts[i]);
      }
    }
    return m;
  }

  std::optional<std::size_t>
  primitivity_exponent(RandomSubstitution const& theta) {
    std::size_t const d = theta.size();
    // support[i][j]: a_i occurs in some image of a_j
    std::vector<std::vector<bool>> support(d, std::vector<bool>(d, false));
    for (std::size_t j = 0; j < d; ++j) {
      for (auto const& w : theta.images(j)) {
        for (Letter i : w.letters()) {
          support[i][j] = true;
        }
      }
    }
    auto positive = [&](auto const& m) {
      for (auto const& row : m) {
        if (std::find(row.begin(), row.end(), false) != row.end()) {
          return false;
        }
      }
      return true;
    };
    std::size_t const bound = (d - 1) * (d - 1) + 1;
    auto              power = support;
    for (std::size_t k = 1; k <= bound; ++k) {
      if (positive(power)) {
        return k;
      }
      std::vector<std::vector<bool>> next(d, std::vector<bool>(d, false));
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t l = 0; l < d; ++l) {
          if (!power[i][l]) {
            continue;
          }
          for (std::size_t j = 0; j < d; ++j) {
            if (support[l][j]) {
              next[i][j] = true;
            }
          }
        }
      }
      power = std::move(next);
    }
    return std::nullopt;
  }

  bool is_primitive(RandomSubstitution const& theta) {
    return primitivity_exponent(theta).has_value();
  }

  std::optional<std::size_t> constant_length(RandomSubstitution const& theta) {
    if (theta.min_image_len() == theta.max_image_len()) {
      return theta.max_image_len();
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Perron-Frobenius data
  ////////////////////////////////////////////////////////////////////////

  std::vector<BigInt> characteristic_polynomial(IntMatrix const& m) {
    std::size_t const d = m.dim();
    using BigMatrix     = std::vector<std::vector<BigInt>>;
    BigMatrix a(d, std::vector<BigInt>(d));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        a[i][j] = m(i, j);
      }
    }
    std::vector<BigInt> c(d + 1);
    c[d] = 1;
    BigMatrix mk(d, std::vector<BigInt>(d));  // M_0 = 0
    for (std::size_t k = 1; k <= d; ++k) {
      // M_k = A M_{k-1} + c_{d-k+1} I
      BigMatrix next(d, std::vector<BigInt>(d));
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          BigInt s = 0;
          for (std::size_t l = 0; l < d; ++l) {
            s += a[i][l] * mk[l][j];
          }
          if (i == j) {
            s += c[d - k + 1];
          }
          next[i][j] = s;
        }
      }
      mk = std::move(next);
      // c_{d-k} = -tr(A M_k) / k
      BigInt tr = 0;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t l = 0; l < d; ++l) {
          tr += a[i][l] * mk[l][i];
        }
      }
      c[d - k] = -tr / static_cast<long long>(k);
    }
    return c;
  }

  namespace {

    BigInt evaluate(std::vector<BigInt> const& poly, std::int64_t x) {
      BigInt result = 0;
      for (std::size_t i = poly.size(); i-- > 0;) {
        result = result * x + poly[i];
      }
      return result;
    }

    // Basis of the kernel of (M - lambda I) over the rationals.
    std::vector<std::vector<BigRational>> kernel(IntMatrix const& m,
                                                 std::int64_t     lambda) {
      std::size_t const                     d = m.dim();
      std::vector<std::vector<BigRational>> a(d, std::vector<BigRational>(d));
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          a[i][j] = m(i, j) - (i == j ? lambda : 0);
        }
      }
      std::vector<std::size_t> pivot_cols;
      std::size_t              row = 0;
      for (std::size_t col = 0; col < d && row < d; ++col) {
        std::size_t p = row;
        while (p < d && a[p][col] == 0) {
          ++p;
        }
        if (p == d) {
          continue;
        }
        std::swap(a[p], a[row]);
        BigRational inv = 1 / a[row][col];
        for (auto& x : a[row]) {
          x *= inv;
        }
        for (std::size_t r = 0; r < d; ++r) {
          if (r != row && a[r][col] != 0) {
            BigRational f = a[r][col];
            for (std::size_t j = 0; j < d; ++j) {
              a[r][j] -= f * a[row][j];
            }
          }
        }
        pivot_cols.push_back(col);
        ++row;
      }
      std::vector<std::vector<BigRational>> basis;
      for (std::size_t free = 0; free < d; ++free) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), free)
            != pivot_cols.end()) {
          continue;
        }
        std::vector<BigRational> v(d, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
          v[pivot_cols[r]] = -a[r][free];
        }
        basis.push_back(std::move(v));
      }
      return basis;
    }

    // Scales a rational vector with entries of one strict sign to the
    // minimal positive integer vector; nullopt if the signs are mixed or an
    // entry is zero.
    std::optional<std::vector<std::int64_t>>
    minimal_positive(std::vector<BigRational> const& v) {
      bool pos = v.front() > 0;
      for (auto const& x : v) {
        if (x == 0 || (x > 0) != pos) {
          return std::nullopt;
        }
      }
      BigInt lcm = 1;
      for (auto const& x : v) {
        lcm = boost::multiprecision::lcm(lcm, denominator(x));
      }
      std::vector<BigInt> ints;
      BigInt              g = 0;
      for (auto const& x : v) {
        BigInt n = numerator(x) * (lcm / denominator(x));
        if (!pos) {
          n = -n;
        }
        g = boost::multiprecision::gcd(g, n);
        ints.push_back(n);
      }
      std::vector<std::int64_t> out;
      for (auto const& n : ints) {
        out.push_back(static_cast<std::int64_t>(n / g));
      }
      return out;
    }

  }  // namespace

  PerronData perron_analysis(RandomSubstitution const& theta) {
    PerronData data;
    data.matrix = substitution_matrix(theta);
    if (!is_primitive(theta)) {
      throw PreconditionError("substitution is not primitive");
    }
    std::size_t const d = theta.size();

    Eigen::MatrixXd md(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        md(i, j) = static_cast<double>(data.matrix(i, j));
      }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(md, false);
    auto const&                         ev = solver.eigenvalues();
    std::complex<double>                dominant = ev[0];
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
      if (std::abs(ev[i]) > std::abs(dominant)) {
        dominant = ev[i];
      }
    }
    data.lambda_approx = dominant.real();

    data.characteristic_polynomial = characteristic_polynomial(data.matrix);

    // The PF eigenvalue lies between the least and the greatest column sum,
    // and it is the only eigenvalue with a positive eigenvector.
    std::int64_t lo = data.matrix.column_sum(0), hi = lo;
    for (std::size_t j = 1; j < d; ++j) {
      lo = std::min(lo, data.matrix.column_sum(j));
      hi = std::max(hi, data.matrix.column_sum(j));
    }
    for (std::int64_t r = std::max<std::int64_t>(lo, 1); r <= hi; ++r) {
      if (evaluate(data.characteristic_polynomial, r) != 0) {
        continue;
      }
      auto basis = kernel(data.matrix, r);
      if (basis.size() != 1) {
        continue;
      }
      auto v = minimal_positive(basis.front());
      if (!v) {
        continue;
      }
      data.lambda_exact   = r;
      data.r_hat          = *v;
      data.virtual_period = std::accumulate(v->begin(), v->end(), std::int64_t(0));
      for (auto x : *v) {
        data.r_normalized.emplace_back(x, *data.virtual_period);
      }
      break;
    }
    return data;
  }

}  // namespace rsub
