#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cover_census {

/// Arbitrary-precision nonnegative integer. Negative values never arise from
/// the kernel; signed intermediates use Integer.
using Natural = mpz_class;
using Integer = mpz_class;

/// Exact rational; gmpxx keeps results of arithmetic in lowest terms with a
/// positive denominator.
using Rational = mpq_class;

inline constexpr std::size_t kDefaultBellCap = 1024;

/// Memoized Bell and Stirling tables. Growth happens under an exclusive lock;
/// once a table covers an index, lookups only take a shared lock, so a table
/// that has been warmed up is safe to query from many threads.
class CombinatoricsTables {
 public:
  explicit CombinatoricsTables(std::size_t cap = kDefaultBellCap) : cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

  Natural bell(std::size_t n) {
    check_cap(n, "bell");
    {
      std::shared_lock lock(mutex_);
      if (n < bell_.size()) return bell_[n];
    }
    std::unique_lock lock(mutex_);
    grow_bell(n);
    return bell_[n];
  }

  Natural stirling2(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    check_cap(n, "stirling2");
    {
      std::shared_lock lock(mutex_);
      if (n < stirling_.size()) return stirling_[n][k];
    }
    std::unique_lock lock(mutex_);
    grow_stirling(n);
    return stirling_[n][k];
  }

  /// Bell numbers B_0..B_n as one snapshot.
  std::vector<Natural> bell_prefix(std::size_t n) {
    check_cap(n, "bell");
    std::unique_lock lock(mutex_);
    grow_bell(n);
    return {bell_.begin(), bell_.begin() + static_cast<std::ptrdiff_t>(n + 1)};
  }

 private:
  void check_cap(std::size_t n, const char* what) const {
    if (n > cap_)
      throw std::out_of_range(std::string(what) + ": index " + std::to_string(n) +
                              " exceeds table cap " + std::to_string(cap_));
  }

  // Bell triangle: each row starts with the last entry of the previous row and
  // every further entry adds the entry above-left. The first entry of row n is
  // B_n. Only one row is kept alive.
  void grow_bell(std::size_t n) {
    if (bell_.empty()) {
      bell_.emplace_back(1);
      row_.assign(1, Natural(1));
    }
    while (bell_.size() <= n) {
      std::vector<Natural> next;
      next.reserve(row_.size() + 1);
      next.push_back(row_.back());
      for (const auto& above : row_) next.push_back(next.back() + above);
      row_ = std::move(next);
      bell_.push_back(row_.front());
    }
  }

  void grow_stirling(std::size_t n) {
    if (stirling_.empty()) stirling_.push_back({Natural(1)});
    while (stirling_.size() <= n) {
      const auto& prev = stirling_.back();
      const std::size_t m = stirling_.size();
      std::vector<Natural> row(m + 1);
      row[0] = 0;
      for (std::size_t k = 1; k <= m; ++k) {
        Natural carry = k < prev.size() ? Natural(prev[k] * k) : Natural(0);
        row[k] = carry + prev[k - 1];
      }
      stirling_.push_back(std::move(row));
    }
  }

  std::size_t cap_;
  std::shared_mutex mutex_;
  std::vector<Natural> bell_;
  std::vector<Natural> row_;
  std::vector<std::vector<Natural>> stirling_;
};

/// Process-wide tables used by the free functions below.
inline CombinatoricsTables& default_tables() {
  static CombinatoricsTables tables;
  return tables;
}

inline Natural bell(std::size_t n) { return default_tables().bell(n); }

inline Natural stirling2(std::size_t n, std::size_t k) { return default_tables().stirling2(n, k); }

inline Natural binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Natural out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

inline Natural binomial(const Natural& n, std::uint64_t k) {
  if (n < k) return 0;
  Natural out;
  mpz_bin_ui(out.get_mpz_t(), n.get_mpz_t(), k);
  return out;
}

inline Natural factorial(std::uint64_t n) {
  Natural out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

/// n(n-1)...(n-r+1); 1 for r = 0 and 0 once a factor reaches zero.
inline Natural falling_factorial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  Natural out = 1;
  for (std::uint64_t i = 0; i < r; ++i) out *= n - i;
  return out;
}

inline Natural pow2(std::uint64_t e) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return out;
}

/// Natural log of a positive integer from its leading 53 bits and bit length.
inline double log_natural(const Natural& x) {
  if (sgn(x) <= 0) throw std::domain_error("log_natural: argument must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

/// num/den in lowest terms (the two-argument mpq constructor does not reduce).
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double log_rational(const Rational& q) {
  return log_natural(q.get_num()) - log_natural(q.get_den());
}

inline std::string to_string(const Natural& x) { return x.get_str(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace cover_census
