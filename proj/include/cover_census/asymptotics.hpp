#pragma once

// Numeric side: Lambert W, the Moser-Wyman expansion of log B_n, the growth
// estimators for the five sequences and the exact probabilistic quantities
// behind them. Estimators are log-space reals; exact quantities are Rationals.
//
// Convergence of the estimators is of order log log n / log n, so reports
// compare trends of exact/estimate ratios rather than asserting a limit.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cover_census/cover_counts.hpp"
#include "cover_census/exact_kernel.hpp"

namespace cover_census {

struct WValue {
  double t = 0;
  double w = 0;
  double residual = 0;  ///< |w e^w - t| / t
};

inline constexpr double kLambertTolerance = 1e-12;
inline constexpr int kLambertMaxIterations = 50;

/// Principal branch of w e^w = t for t > 0 by Halley iteration.
inline WValue lambert_w(double t) {
  if (!(t > 0) || !std::isfinite(t)) throw std::domain_error("lambert_w: t must be positive and finite");
  double w = t;
  if (t >= std::exp(1.0)) {
    const double lt = std::log(t);
    w = lt - std::log(lt);
  }
  // Halley's step divided through by e^w, so large t cannot overflow.
  auto residual = [t](double x) {
    const double scaled = t * std::exp(-x);
    return std::abs(x - scaled) / scaled;
  };
  for (int iter = 0; iter < kLambertMaxIterations; ++iter) {
    const double g = w - t * std::exp(-w);
    const double step = g / ((w + 1) - g * (w + 2) / (2 * (w + 1)));
    w -= step;
    const double r = residual(w);
    if (r <= kLambertTolerance && std::abs(step) <= 1e-14 * std::max(1.0, std::abs(w))) return {t, w, r};
  }
  const double r = residual(w);
  if (r <= kLambertTolerance) return {t, w, r};
  throw std::runtime_error("lambert_w: no convergence for t = " + std::to_string(t));
}

/// log t - log log t + log log t / log t, for t > e.
inline double lambert_w_expansion(double t) {
  if (!(t > std::exp(1.0))) throw std::domain_error("lambert_w_expansion: requires t > e");
  const double lt = std::log(t);
  const double llt = std::log(lt);
  return lt - llt + llt / lt;
}

/// Moser-Wyman expansion of log B_n through the e^{-2w} term, w = W(n).
inline double log_bell_mw(std::size_t n) {
  if (n < 10) throw std::domain_error("log_bell_mw: requires n >= 10");
  const double w = lambert_w(static_cast<double>(n)).w;
  const double ew = std::exp(w);
  const double p1 = 1 + w;
  return ew * (w * w - w + 1) - 0.5 * std::log(p1) - 1 -
         w * (2 * w * w + 7 * w + 10) / (24 * std::pow(p1, 3)) / ew -
         w * (2 * std::pow(w, 4) + 12 * std::pow(w, 3) + 29 * w * w + 40 * w + 36) / (48 * std::pow(p1, 6)) / (ew * ew);
}

enum class BellSource { exact, moser_wyman };

inline const char* to_string(BellSource s) { return s == BellSource::exact ? "exact" : "moser-wyman"; }

struct LogBell {
  double value = 0;
  BellSource source = BellSource::exact;
};

/// log B_n, exact (through the Bell table) when n is within its cap.
inline LogBell log_bell(std::size_t n) {
  if (n <= default_tables().cap()) return {log_natural(bell(n)), BellSource::exact};
  return {log_bell_mw(n), BellSource::moser_wyman};
}

namespace detail {

inline void require_n_at_least(std::size_t n, std::size_t min, const char* what) {
  if (n < min) throw std::domain_error(std::string(what) + ": requires n >= " + std::to_string(min));
}

}  // namespace detail

/// log of B_{2n} 2^{-n} exp(-log(2n / log n) / 2), the growth of s_n and t_n.
inline double growth_st_estimate(std::size_t n, double log_b2n) {
  detail::require_n_at_least(n, 2, "growth_st_estimate");
  const double x = static_cast<double>(n);
  return log_b2n - x * std::log(2.0) - 0.5 * std::log(2 * x / std::log(x));
}

/// log of B_{2n} 2^{-n} n^{-1/2} exp(-[log(2n / log n) / 2]^2), the growth
/// of u_n, v_n and l_n.
inline double growth_uvl_estimate(std::size_t n, double log_b2n) {
  detail::require_n_at_least(n, 2, "growth_uvl_estimate");
  const double x = static_cast<double>(n);
  const double half = 0.5 * std::log(2 * x / std::log(x));
  return log_b2n - x * std::log(2.0) - 0.5 * std::log(x) - half * half;
}

/// Nearest integer to 2n / W(2n), halves rounded up.
inline std::size_t saddle_m0(std::size_t n) {
  detail::require_n_at_least(n, 1, "saddle_m0");
  const double x = 2.0 * static_cast<double>(n);
  return static_cast<std::size_t>(std::floor(x / lambert_w(x).w + 0.5));
}

/// log of B_{2n} 2^{-n} exp(-n/m0 - n^2/m0^2).
inline double saddle_form_uvl(std::size_t n, double log_b2n) {
  const double m0 = static_cast<double>(saddle_m0(n));
  const double x = static_cast<double>(n);
  return log_b2n - x * std::log(2.0) - x / m0 - x * x / (m0 * m0);
}

/// E (X)_r = (n)_r B_{2n-r} / B_{2n}, where X counts the j whose j and j+n
/// share a block in a uniform partition of [2n].
inline Rational moment_E_X_r(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  return ratio(falling_factorial(n, r) * bell(2 * n - r), bell(2 * n));
}

/// |E_{1,n}| = sum_r (-1)^r C(n,r) B_{2n-r}; the alternating moment series
/// is finite because X <= n.
inline Natural e1_count(std::size_t n) {
  Integer acc = 0;
  for (std::size_t r = 0; r <= n; ++r) {
    const Integer term = binomial(n, r) * bell(2 * n - r);
    if (r % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

/// P(X = 0) = |E_{1,n}| / B_{2n}.
inline Rational p_x0_exact(std::size_t n) { return ratio(e1_count(n), bell(2 * n)); }

/// P(X = 0) / sqrt(log n / (2n)).
inline double e1_asymptotic_ratio(std::size_t n) {
  detail::require_n_at_least(n, 2, "e1_asymptotic_ratio");
  const double x = static_cast<double>(n);
  return p_x0_exact(n).get_d() / std::sqrt(std::log(x) / (2 * x));
}

/// sum_{k=1..n} C(n,k) 2^k B_{2n-2k} / B_{2n}, an upper bound on the
/// probability that two blocks of a uniform partition of [2n] share a
/// psi-image.
inline Rational collision_bound(std::size_t n) {
  Natural acc = 0;
  for (std::size_t k = 1; k <= n; ++k) acc += binomial(n, k) * pow2(k) * bell(2 * n - 2 * k);
  return ratio(acc, bell(2 * n));
}

/// sum_{m<=2n} m^{2n} / m!, the Dobinski sum for e B_{2n} cut at m = 2n.
inline Rational dobinski_partial_sum(std::size_t n) {
  Rational acc = 0;
  Natural fact = 1;
  for (std::size_t m = 0; m <= 2 * n; ++m) {
    if (m > 0) fact *= m;
    Natural power;
    mpz_ui_pow_ui(power.get_mpz_t(), m, 2 * n);
    acc += ratio(power, fact);
  }
  return acc;
}

struct AsymptoticRow {
  std::size_t n = 0;
  BellSource bell_source = BellSource::exact;
  double log_bell2n = 0;
  double log_est_st = 0;
  double log_est_uvl = 0;
  double log_saddle = 0;
  std::size_t m0 = 0;
  /// Present when the exact sequences reach n.
  std::optional<double> log_s, log_t, log_u, log_v, log_l;
  std::optional<double> ratio_s, ratio_t, ratio_u, ratio_v, ratio_l, ratio_saddle_v;
  /// Present when B_{2n} is exact.
  std::optional<double> e1_ratio;
};

struct AsymptoticReport {
  std::size_t max_n = 0;
  std::vector<AsymptoticRow> rows;
};

inline constexpr const char* kAsymptoticNote =
    "estimators converge like log log n / log n; ratios are reported for their trend, not compared to 1";

/// 4, 8, 16, ... up to max_n, plus max_n itself when it is not a power of
/// two. For max_n < 4 the grid is {max_n} (empty below 2).
inline std::vector<std::size_t> report_grid(std::size_t max_n) {
  std::vector<std::size_t> grid;
  if (max_n < 2) return grid;
  if (max_n < 4) return {max_n};
  for (std::size_t n = 4; n <= max_n; n *= 2) grid.push_back(n);
  if (grid.back() != max_n) grid.push_back(max_n);
  return grid;
}

/// Report rows over report_grid(max_n); exact columns come from `table`
/// wherever it reaches.
inline AsymptoticReport build_asymptotic_report(std::size_t max_n, const SequenceTable* table) {
  AsymptoticReport report;
  report.max_n = max_n;
  const auto safe_log = [](const Natural& x) { return sgn(x) > 0 ? log_natural(x) : -INFINITY; };
  for (std::size_t n : report_grid(max_n)) {
    AsymptoticRow row;
    row.n = n;
    const LogBell lb = log_bell(2 * n);
    row.bell_source = lb.source;
    row.log_bell2n = lb.value;
    row.log_est_st = growth_st_estimate(n, lb.value);
    row.log_est_uvl = growth_uvl_estimate(n, lb.value);
    row.log_saddle = saddle_form_uvl(n, lb.value);
    row.m0 = saddle_m0(n);
    if (table != nullptr && n < table->rows.size()) {
      const auto& r = table->rows[n];
      row.log_s = safe_log(r.s);
      row.log_t = safe_log(r.t);
      row.log_u = safe_log(r.u);
      row.log_v = safe_log(r.v);
      row.log_l = safe_log(r.l);
      row.ratio_s = std::exp(*row.log_s - row.log_est_st);
      row.ratio_t = std::exp(*row.log_t - row.log_est_st);
      row.ratio_u = std::exp(*row.log_u - row.log_est_uvl);
      row.ratio_v = std::exp(*row.log_v - row.log_est_uvl);
      row.ratio_l = std::exp(*row.log_l - row.log_est_uvl);
      row.ratio_saddle_v = std::exp(*row.log_v - row.log_saddle);
    }
    if (lb.source == BellSource::exact) row.e1_ratio = e1_asymptotic_ratio(n);
    report.rows.push_back(row);
  }
  return report;
}

enum class CheckStatus { pass, warn, fail };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::warn: return "WARN";
    case CheckStatus::fail: return "FAIL";
  }
  return "?";
}

struct TrendCheck {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

/// |ratio - 1| must shrink from n = 16 to the largest n with exact values,
/// for t_n against the s/t estimator and v_n against the u/v/l estimator.
/// A regression is a warning: the limits are only approached slowly.
inline std::vector<TrendCheck> trend_checks(const AsymptoticReport& report) {
  std::vector<TrendCheck> out;
  const AsymptoticRow* first = nullptr;
  const AsymptoticRow* last = nullptr;
  for (const auto& row : report.rows) {
    if (!row.ratio_t) continue;
    if (row.n == 16) first = &row;
    if (row.n > 16) last = &row;
  }
  auto check = [&](const char* name, const std::optional<double> AsymptoticRow::*field) {
    TrendCheck c{name, CheckStatus::warn, "needs exact values at n = 16 and a larger n"};
    if (first != nullptr && last != nullptr) {
      const double a = std::abs(*(first->*field) - 1);
      const double b = std::abs(*(last->*field) - 1);
      c.status = b < a ? CheckStatus::pass : CheckStatus::warn;
      c.detail = "|ratio-1| " + std::to_string(a) + " at n=16, " + std::to_string(b) + " at n=" + std::to_string(last->n);
    }
    out.push_back(std::move(c));
  };
  check("ratio_t trend", &AsymptoticRow::ratio_t);
  check("ratio_v trend", &AsymptoticRow::ratio_v);
  return out;
}

}  // namespace cover_census
