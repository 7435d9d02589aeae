#pragma once

// Exact counts of 2-covers of [n] and labelled line graphs:
//   s_n  all 2-covers               t_n  proper (no repeated block)
//   u_n  restricted (two blocks meet in at most one element)
//   v_n  restricted and proper      l_n  line graphs on n labelled vertices
//
// v_n comes from the bivariate generating function of restricted proper
// covers (x marks elements, y marks blocks); the rest follow by binomial and
// Stirling transforms and by a line-graph correction factor on V(x).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cover_census/exact_kernel.hpp"
#include "cover_census/series.hpp"

namespace cover_census {

/// An exact identity that must hold failed; always signals a bug.
class IdentityMismatch : public std::runtime_error {
 public:
  IdentityMismatch(std::string identity, std::size_t index, const std::string& detail = {})
      : std::runtime_error("identity '" + identity + "' fails at coefficient " + std::to_string(index) +
                           (detail.empty() ? std::string() : ": " + detail)),
        identity_(std::move(identity)),
        index_(index) {}

  const std::string& identity() const noexcept { return identity_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::string identity_;
  std::size_t index_;
};

struct SequenceRow {
  std::size_t n = 0;
  Natural s, t, u, v, l, bell2n;

  bool operator==(const SequenceRow&) const = default;
};

struct SequenceTable {
  std::size_t max_n = 0;
  std::vector<SequenceRow> rows;
};

/// Degree up to which the bivariate series is expanded literally.
inline constexpr std::size_t kBivariateRouteDegree = 16;

/// A(x,y) = exp(-y - x y^2/2) sum_m y^m/m! (1+x)^{C(m,2)} truncated at x-degree
/// `max_n` and y-degree 2*max_n.
///
/// Truncating y at 2n loses nothing: every element lies in exactly two
/// nonempty blocks, so a 2-cover of [n] has at most 2n blocks and the row of
/// x^n is a polynomial in y of degree <= 2n. Every coefficient kept is exact.
inline BivariateSeries restricted_proper_bivariate(std::size_t max_n) {
  const std::size_t ny = 2 * max_n;
  BivariateSeries exponent(max_n, ny);
  if (ny >= 1) exponent.at(0, 1) = -1;
  if (max_n >= 1 && ny >= 2) exponent.at(1, 2) = Rational(-1, 2);
  const BivariateSeries prefactor = series_exp(exponent);

  BivariateSeries graphs(max_n, ny);
  Natural m_fact = 1;
  for (std::size_t m = 0; m <= ny; ++m) {
    if (m > 0) m_fact *= m;
    const std::uint64_t pairs = m * (m - (m > 0 ? 1 : 0)) / 2;
    for (std::size_t k = 0; k <= max_n; ++k) graphs.at(k, m) = ratio(binomial(pairs, k), m_fact);
  }
  return series_mul(prefactor, graphs);
}

namespace detail {

inline Natural to_natural(const Rational& q, const char* identity, std::size_t n) {
  if (q.get_den() != 1 || sgn(q) < 0)
    throw IdentityMismatch(identity, n, "expected a nonnegative integer, got " + q.get_str());
  return q.get_num();
}

// D_r = r! sum_{a<=r} (-1)^a/a!, the derangement numbers.
inline std::vector<Natural> derangements(std::size_t max_r) {
  std::vector<Natural> d(max_r + 1);
  d[0] = 1;
  if (max_r >= 1) d[1] = 0;
  for (std::size_t r = 2; r <= max_r; ++r) d[r] = (r - 1) * (d[r - 1] + d[r - 2]);
  return d;
}

}  // namespace detail

/// V(x) = sum v_n x^n/n! = A(x,1), evaluated without building the full grid.
///
/// Write A = exp(-x y^2/2) G(x,y) with G = e^{-y} sum_l y^l/l! (1+x)^{C(l,2)}.
/// By inclusion-exclusion, m! [x^k y^m] G counts graphs on m labelled vertices
/// with k edges and no isolated vertex, so row k of G has y-degree <= 2k and
/// G(x,1) has exact coefficients
///   g_k = (2k)!^{-1} sum_{l<=2k} C(C(l,2),k) C(2k,l) D_{2k-l}.
/// Then V(x) = e^{-x/2} G(x,1).
inline EgfSeries restricted_proper_series(std::size_t max_n) {
  const auto der = detail::derangements(2 * max_n);
  EgfSeries g(max_n);
  for (std::size_t k = 0; k <= max_n; ++k) {
    Natural acc = 0;
    for (std::size_t l = 0; l <= 2 * k; ++l) {
      const std::uint64_t pairs = l * (l - (l > 0 ? 1 : 0)) / 2;
      if (pairs < k) continue;
      acc += binomial(pairs, k) * binomial(2 * k, l) * der[2 * k - l];
    }
    g[k] = ratio(acc, factorial(2 * k));
  }
  const EgfSeries half_shift = series_exp(EgfSeries::monomial(max_n, 1, Rational(-1, 2)));
  return series_mul(half_shift, g);
}

/// v_n = n! sum_m [x^n y^m] A(x,y).
inline std::vector<Natural> restricted_proper_from_bivariate(const BivariateSeries& a) {
  std::vector<Natural> v;
  for (std::size_t n = 0; n <= a.degree_x(); ++n) {
    Rational row_sum = 0;
    for (const auto& c : a.row(n)) row_sum += c;
    v.push_back(detail::to_natural(row_sum * Rational(factorial(n)), "v from A(x,y)", n));
  }
  return v;
}

/// v_0..v_max_n. The literal bivariate expansion covers degrees up to
/// kBivariateRouteDegree; the factorized evaluation of A(x,1) covers the rest
/// and must agree with it on the overlap.
inline std::vector<Natural> restricted_proper_sequence(std::size_t max_n) {
  const EgfSeries vs = restricted_proper_series(max_n);
  std::vector<Natural> v;
  v.reserve(max_n + 1);
  for (std::size_t n = 0; n <= max_n; ++n) v.push_back(detail::to_natural(egf_coefficient(vs, n), "v integrality", n));

  const auto literal = restricted_proper_from_bivariate(restricted_proper_bivariate(std::min(max_n, kBivariateRouteDegree)));
  for (std::size_t n = 0; n < literal.size(); ++n)
    if (literal[n] != v[n])
      throw IdentityMismatch("A(x,1) literal vs factorized", n, literal[n].get_str() + " != " + v[n].get_str());
  return v;
}

/// u_n = sum_k C(n,k) v_k.
inline std::vector<Natural> binomial_transform_u(const std::vector<Natural>& v) {
  std::vector<Natural> u(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) {
    Natural acc = 0;
    for (std::size_t k = 0; k <= n; ++k) acc += binomial(n, k) * v[k];
    u[n] = acc;
  }
  return u;
}

/// out_n = sum_{k=1..n} S(n,k) base_k, with out_0 = base_0.
inline std::vector<Natural> stirling_transform(const std::vector<Natural>& base) {
  std::vector<Natural> out(base.size());
  if (base.empty()) return out;
  out[0] = base[0];
  for (std::size_t n = 1; n < base.size(); ++n) {
    Natural acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += stirling2(n, k) * base[k];
    out[n] = acc;
  }
  return out;
}

namespace detail {

// Exponent c(x) with L(x) = e^{c(x)} U(x). Line graphs of disjoint unions are
// disjoint unions of line graphs, so c collects, per connected root shape,
// (edge-labelled roots) - (labelled line graphs) as an EGF term:
//   triangle vs star        -> 1 labelled K3 from 2 roots     : -x^3/3!
//   paw (K_{1,3} plus edge) -> 6 labelled diamonds from 12    : -6 x^4/4!
//   K4 minus an edge        -> 15 labelled wheels from 30     : -15 x^5/5!
//   K4                      -> 15 labelled octahedra from 30  : -15 x^6/6!
// Every other connected root has Aut(L(G)) induced by Aut(G).
inline EgfSeries line_graph_exponent(std::size_t degree, bool triangle_star_only) {
  EgfSeries c(degree);
  if (degree >= 3) c[3] = Rational(-1, 6);
  if (triangle_star_only) return c;
  if (degree >= 4) c[4] = Rational(-1, 4);
  if (degree >= 5) c[5] = Rational(-1, 8);
  if (degree >= 6) c[6] = Rational(-1, 48);
  return c;
}

inline std::vector<Natural> line_transform_impl(const EgfSeries& v_series, const EgfSeries* u_series,
                                                bool triangle_star_only) {
  const std::size_t n = v_series.degree();
  const EgfSeries c = line_graph_exponent(n, triangle_star_only);
  const EgfSeries x = EgfSeries::monomial(n, 1);
  const EgfSeries via_v = series_mul(series_exp(x + c), v_series);

  EgfSeries u_default(n);
  if (u_series == nullptr) {
    u_default = series_mul(series_exp(x), v_series);
    u_series = &u_default;
  }
  const EgfSeries via_u = series_mul(series_exp(c), *u_series);

  std::vector<Natural> l;
  l.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (via_v[k] != via_u[k])
      throw IdentityMismatch("L = e^{x+c} V = e^{c} U", k, via_v[k].get_str() + " != " + via_u[k].get_str());
    l.push_back(to_natural(egf_coefficient(via_v, k), "l integrality", k));
  }
  return l;
}

}  // namespace detail

/// l_n, the number of line graphs on n labelled vertices, from
/// L(x) = e^{x + c(x)} V(x) and checked against e^{c(x)} U(x), where
/// c(x) = -x^3/3! - x^4/4 - x^5/8 - x^6/48. `u_series` defaults to V(x) e^x.
inline std::vector<Natural> line_transform(const EgfSeries& v_series, const EgfSeries* u_series = nullptr) {
  return detail::line_transform_impl(v_series, u_series, false);
}

/// Same two routes with only the triangle/star merge, c(x) = -x^3/3!.
/// Agrees with line_transform up to n = 3 and overcounts from n = 4 on,
/// because the paw, K4 minus an edge and K4 have line graphs with more
/// symmetry than their roots.
inline std::vector<Natural> line_transform_triangle_star_only(const EgfSeries& v_series,
                                                              const EgfSeries* u_series = nullptr) {
  return detail::line_transform_impl(v_series, u_series, true);
}

namespace detail {

inline void require_equal(const EgfSeries& lhs, const EgfSeries& rhs, const char* identity) {
  for (std::size_t k = 0; k <= lhs.degree(); ++k)
    if (lhs[k] != rhs[k]) throw IdentityMismatch(identity, k, lhs[k].get_str() + " != " + rhs[k].get_str());
}

}  // namespace detail

/// All five sequences plus B_{2n}, n = 0..max_n. The EGF identities
/// U = V e^x, S = U(e^x - 1), T = V(e^x - 1) and S = T B are verified
/// coefficientwise up to max_n; the first failure throws IdentityMismatch.
inline SequenceTable full_table(std::size_t max_n) {
  const auto v = restricted_proper_sequence(max_n);
  const auto u = binomial_transform_u(v);
  const auto t = stirling_transform(v);
  const auto s = stirling_transform(u);

  const auto v_series = EgfSeries::from_sequence(max_n, v);
  const auto u_series = EgfSeries::from_sequence(max_n, u);
  const auto t_series = EgfSeries::from_sequence(max_n, t);
  const auto s_series = EgfSeries::from_sequence(max_n, s);
  const auto l = line_transform(v_series, &u_series);

  const EgfSeries x = EgfSeries::monomial(max_n, 1);
  const EgfSeries shift = exp_minus_one(max_n);
  detail::require_equal(u_series, series_mul(v_series, series_exp(x)), "U = V e^x");
  detail::require_equal(s_series, series_compose(u_series, shift), "S = U(e^x - 1)");
  detail::require_equal(t_series, series_compose(v_series, shift), "T = V(e^x - 1)");
  detail::require_equal(s_series, series_mul(t_series, series_exp(shift)), "S = T B");

  SequenceTable table;
  table.max_n = max_n;
  table.rows.reserve(max_n + 1);
  for (std::size_t n = 0; n <= max_n; ++n) table.rows.push_back({n, s[n], t[n], u[n], v[n], l[n], bell(2 * n)});
  return table;
}

}  // namespace cover_census
