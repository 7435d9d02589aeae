#pragma once

// Exact truncated power series over the rationals, univariate and bivariate.
//
// Coefficients are stored as ordinary power-series coefficients c_k of
// sum c_k x^k. A sequence a_k enters through its exponential generating
// function (c_k = a_k / k!) and leaves through egf_coefficient.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cover_census/exact_kernel.hpp"

namespace cover_census {

class EgfSeries {
 public:
  explicit EgfSeries(std::size_t degree) : coeffs_(degree + 1) {}

  /// Coefficients beyond `degree` are dropped, missing ones are zero.
  EgfSeries(std::size_t degree, std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    coeffs_.resize(degree + 1);
  }

  /// sum_k seq[k] x^k / k! truncated at `degree`.
  template <typename Range>
  static EgfSeries from_sequence(std::size_t degree, const Range& seq) {
    EgfSeries out(degree);
    Natural fact = 1;
    std::size_t k = 0;
    for (const auto& value : seq) {
      if (k > degree) break;
      if (k > 0) fact *= k;
      out.coeffs_[k] = ratio(Natural(value), fact);
      ++k;
    }
    return out;
  }

  static EgfSeries constant(std::size_t degree, const Rational& c) {
    EgfSeries out(degree);
    out.coeffs_[0] = c;
    return out;
  }

  /// c x^power (zero when power exceeds the truncation).
  static EgfSeries monomial(std::size_t degree, std::size_t power, const Rational& c = 1) {
    EgfSeries out(degree);
    if (power <= degree) out.coeffs_[power] = c;
    return out;
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t k) const { return coeffs_.at(k); }
  Rational& operator[](std::size_t k) { return coeffs_.at(k); }
  std::span<const Rational> coefficients() const noexcept { return coeffs_; }

  bool operator==(const EgfSeries& other) const { return coeffs_ == other.coeffs_; }

  EgfSeries& operator+=(const EgfSeries& rhs) {
    require_same_degree(rhs, "add");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    return *this;
  }

  EgfSeries& operator-=(const EgfSeries& rhs) {
    require_same_degree(rhs, "subtract");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    return *this;
  }

  EgfSeries& operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  void require_same_degree(const EgfSeries& other, const char* op) const {
    if (degree() != other.degree())
      throw std::invalid_argument(std::string("series ") + op + ": truncation degrees differ (" +
                                  std::to_string(degree()) + " vs " +
                                  std::to_string(other.degree()) + ")");
  }

 private:
  std::vector<Rational> coeffs_;
};

inline EgfSeries operator+(EgfSeries a, const EgfSeries& b) { return a += b; }
inline EgfSeries operator-(EgfSeries a, const EgfSeries& b) { return a -= b; }
inline EgfSeries operator-(EgfSeries a) { return a *= Rational(-1); }
inline EgfSeries operator*(EgfSeries a, const Rational& s) { return a *= s; }

namespace detail {

// Scales a run of rationals to integers over their common denominator.
struct ScaledIntegers {
  std::vector<Integer> numerators;
  Natural denominator = 1;
};

inline ScaledIntegers scale_to_integers(std::span<const Rational> coeffs) {
  ScaledIntegers out;
  for (const auto& c : coeffs) {
    if (sgn(c) == 0) continue;
    mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), c.get_den_mpz_t());
  }
  out.numerators.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    if (sgn(c) == 0) {
      out.numerators.emplace_back(0);
    } else {
      Integer factor;
      mpz_divexact(factor.get_mpz_t(), out.denominator.get_mpz_t(), c.get_den_mpz_t());
      out.numerators.push_back(c.get_num() * factor);
    }
  }
  return out;
}

}  // namespace detail

/// Cauchy product truncated to the common degree. Both operands are moved to
/// a common integer denominator so the inner loop is integer-only.
inline EgfSeries series_mul(const EgfSeries& a, const EgfSeries& b) {
  a.require_same_degree(b, "multiply");
  const std::size_t n = a.degree();
  const auto sa = detail::scale_to_integers(a.coefficients());
  const auto sb = detail::scale_to_integers(b.coefficients());
  std::vector<Integer> acc(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (sgn(sa.numerators[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= n; ++j) {
      if (sgn(sb.numerators[j]) == 0) continue;
      mpz_addmul(acc[i + j].get_mpz_t(), sa.numerators[i].get_mpz_t(), sb.numerators[j].get_mpz_t());
    }
  }
  const Natural den = sa.denominator * sb.denominator;
  EgfSeries out(n);
  for (std::size_t k = 0; k <= n; ++k) out[k] = ratio(acc[k], den);
  return out;
}

inline EgfSeries operator*(const EgfSeries& a, const EgfSeries& b) { return series_mul(a, b); }

/// exp(a) for a with zero constant term, from (exp f)' = f' exp f:
/// k e_k = sum_{j=1..k} j f_j e_{k-j}.
inline EgfSeries series_exp(const EgfSeries& a) {
  if (sgn(a[0]) != 0) throw std::invalid_argument("series_exp: constant term must be zero");
  const std::size_t n = a.degree();
  std::vector<std::pair<std::size_t, Rational>> terms;  // j, j*f_j
  for (std::size_t j = 1; j <= n; ++j)
    if (sgn(a[j]) != 0) terms.emplace_back(j, a[j] * j);
  EgfSeries out(n);
  out[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    Rational acc = 0;
    for (const auto& [j, jf] : terms) {
      if (j > k) break;
      acc += jf * out[k - j];
    }
    out[k] = acc / k;
  }
  return out;
}

/// outer(inner(x)) by Horner evaluation over truncated series.
inline EgfSeries series_compose(const EgfSeries& outer, const EgfSeries& inner) {
  outer.require_same_degree(inner, "compose");
  if (sgn(inner[0]) != 0) throw std::invalid_argument("series_compose: inner constant term must be zero");
  const std::size_t n = outer.degree();
  EgfSeries acc = EgfSeries::constant(n, outer[n]);
  for (std::size_t k = n; k-- > 0;) {
    acc = series_mul(acc, inner);
    acc[0] += outer[k];
  }
  return acc;
}

/// The sequence value a_n = c_n n!.
inline Rational egf_coefficient(const EgfSeries& a, std::size_t n) {
  if (n > a.degree())
    throw std::out_of_range("egf_coefficient: index " + std::to_string(n) + " beyond truncation degree " +
                            std::to_string(a.degree()));
  return a[n] * Rational(factorial(n));
}

/// e^x - 1 truncated at `degree`.
inline EgfSeries exp_minus_one(std::size_t degree) {
  EgfSeries out(degree);
  Natural fact = 1;
  for (std::size_t k = 1; k <= degree; ++k) {
    fact *= k;
    out[k] = ratio(1, fact);
  }
  return out;
}

/// Truncated series in x and y, stored x-degree-major:
/// coefficient of x^n y^m at index n*(M+1)+m.
class BivariateSeries {
 public:
  BivariateSeries(std::size_t degree_x, std::size_t degree_y)
      : degree_x_(degree_x), degree_y_(degree_y), coeffs_((degree_x + 1) * (degree_y + 1)) {}

  std::size_t degree_x() const noexcept { return degree_x_; }
  std::size_t degree_y() const noexcept { return degree_y_; }

  const Rational& at(std::size_t n, std::size_t m) const { return coeffs_.at(index(n, m)); }
  Rational& at(std::size_t n, std::size_t m) { return coeffs_.at(index(n, m)); }

  /// Row of fixed x-degree n, as y-coefficients 0..M.
  std::span<const Rational> row(std::size_t n) const {
    if (n > degree_x_) throw std::out_of_range("BivariateSeries::row");
    return std::span<const Rational>(coeffs_).subspan(n * (degree_y_ + 1), degree_y_ + 1);
  }

  bool operator==(const BivariateSeries& other) const {
    return degree_x_ == other.degree_x_ && degree_y_ == other.degree_y_ && coeffs_ == other.coeffs_;
  }

  BivariateSeries& operator+=(const BivariateSeries& rhs) {
    require_same_shape(rhs, "add");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    return *this;
  }

  void require_same_shape(const BivariateSeries& other, const char* op) const {
    if (degree_x_ != other.degree_x_ || degree_y_ != other.degree_y_)
      throw std::invalid_argument(std::string("bivariate series ") + op + ": truncation degrees differ");
  }

 private:
  std::size_t index(std::size_t n, std::size_t m) const {
    if (n > degree_x_ || m > degree_y_) throw std::out_of_range("BivariateSeries: coefficient index");
    return n * (degree_y_ + 1) + m;
  }

  std::size_t degree_x_;
  std::size_t degree_y_;
  std::vector<Rational> coeffs_;
};

inline BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }

inline BivariateSeries series_mul(const BivariateSeries& a, const BivariateSeries& b) {
  a.require_same_shape(b, "multiply");
  const std::size_t nx = a.degree_x();
  const std::size_t ny = a.degree_y();
  // A common denominator per operand keeps the inner loop integer-only.
  std::vector<Rational> flat_a, flat_b;
  flat_a.reserve((nx + 1) * (ny + 1));
  flat_b.reserve((nx + 1) * (ny + 1));
  for (std::size_t n = 0; n <= nx; ++n) {
    for (const auto& c : a.row(n)) flat_a.push_back(c);
    for (const auto& c : b.row(n)) flat_b.push_back(c);
  }
  const auto sa = detail::scale_to_integers(flat_a);
  const auto sb = detail::scale_to_integers(flat_b);
  const std::size_t stride = ny + 1;
  std::vector<Integer> acc((nx + 1) * stride);
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      const Integer& x = sa.numerators[i * stride + j];
      if (sgn(x) == 0) continue;
      for (std::size_t k = 0; i + k <= nx; ++k) {
        for (std::size_t l = 0; j + l <= ny; ++l) {
          const Integer& y = sb.numerators[k * stride + l];
          if (sgn(y) == 0) continue;
          mpz_addmul(acc[(i + k) * stride + j + l].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        }
      }
    }
  }
  const Natural den = sa.denominator * sb.denominator;
  BivariateSeries out(nx, ny);
  for (std::size_t n = 0; n <= nx; ++n)
    for (std::size_t m = 0; m <= ny; ++m) out.at(n, m) = ratio(acc[n * stride + m], den);
  return out;
}

/// exp(a) for a with zero constant term. Applying the Euler operator
/// x d/dx + y d/dy to exp f gives
///   (n+m) e_{n,m} = sum_{(i,j) != (0,0)} (i+j) f_{i,j} e_{n-i,m-j},
/// solved in order of increasing total degree.
inline BivariateSeries series_exp(const BivariateSeries& a) {
  if (sgn(a.at(0, 0)) != 0) throw std::invalid_argument("series_exp: constant term must be zero");
  const std::size_t nx = a.degree_x();
  const std::size_t ny = a.degree_y();
  struct Term {
    std::size_t i, j;
    Rational weighted;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i <= nx; ++i)
    for (std::size_t j = 0; j <= ny; ++j)
      if ((i | j) != 0 && sgn(a.at(i, j)) != 0) terms.push_back({i, j, a.at(i, j) * static_cast<unsigned long>(i + j)});
  BivariateSeries out(nx, ny);
  out.at(0, 0) = 1;
  for (std::size_t total = 1; total <= nx + ny; ++total) {
    const std::size_t n_lo = total > ny ? total - ny : 0;
    for (std::size_t n = n_lo; n <= std::min(total, nx); ++n) {
      const std::size_t m = total - n;
      Rational acc = 0;
      for (const auto& t : terms)
        if (t.i <= n && t.j <= m) acc += t.weighted * out.at(n - t.i, m - t.j);
      out.at(n, m) = acc / static_cast<unsigned long>(total);
    }
  }
  return out;
}

}  // namespace cover_census
