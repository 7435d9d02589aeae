#pragma once

// Exactly uniform random set partitions and Monte Carlo estimates of the
// statistics of a uniform partition of [2n].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cover_census/exact_kernel.hpp"
#include "cover_census/oracle.hpp"

namespace cover_census {

using Rng = std::mt19937_64;

struct SamplerConfig {
  std::size_t ground_size = 0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of worker `w` out of `workers`: splitmix64 of the base seed for a
/// single worker, otherwise splitmix64(seed ^ splitmix64(w + 1)).
inline std::uint64_t worker_seed(std::uint64_t seed, unsigned w, unsigned workers) {
  if (workers <= 1) return splitmix64(seed);
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(w) + 1));
}

/// Uniform in [0, bound), bound > 0, by rejection of the biased low range.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform in [0, bound) for an arbitrary-precision bound.
inline Natural uniform_below(Rng& rng, const Natural& bound) {
  if (sgn(bound) <= 0) throw std::invalid_argument("uniform_below: empty range");
  if (mpz_fits_ulong_p(bound.get_mpz_t()) && sizeof(unsigned long) == sizeof(std::uint64_t))
    return Natural(static_cast<unsigned long>(uniform_below(rng, static_cast<std::uint64_t>(bound.get_ui()))));
  const Natural top = bound - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const std::size_t spare = words * 64 - bits;
  std::vector<std::uint64_t> buf(words);
  Natural out;
  while (true) {
    for (auto& w : buf) w = rng();
    buf.back() >>= spare;  // most significant word last (order = -1)
    mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (out < bound) return out;
  }
}

/// Draws partitions of [N] uniformly. The block of the smallest unplaced
/// element has size k with probability C(M-1,k-1) B_{M-k} / B_M among the M
/// unplaced elements; its other k-1 members are a uniform (k-1)-subset.
class PartitionSampler {
 public:
  explicit PartitionSampler(std::size_t ground_size) : ground_size_(ground_size) {
    if (ground_size > kMaxGroundSize) throw std::invalid_argument("PartitionSampler: ground set too large");
    const auto b = default_tables().bell_prefix(ground_size);
    cumulative_.resize(ground_size + 1);
    for (std::size_t m = 1; m <= ground_size; ++m) {
      Natural acc = 0;
      for (std::size_t k = 1; k <= m; ++k) {
        acc += binomial(m - 1, k - 1) * b[m - k];
        cumulative_[m].push_back(acc);
      }
    }
  }

  std::size_t ground_size() const noexcept { return ground_size_; }

  SetPartition operator()(Rng& rng) const {
    std::vector<std::uint8_t> rgs(ground_size_, 0);
    std::vector<std::uint8_t> remaining(ground_size_);
    for (std::size_t i = 0; i < ground_size_; ++i) remaining[i] = static_cast<std::uint8_t>(i);
    std::uint8_t label = 0;
    while (!remaining.empty()) {
      const std::size_t m = remaining.size();
      const auto& cum = cumulative_[m];
      const Natural u = uniform_below(rng, cum.back());
      std::size_t k = 1;
      while (cum[k - 1] <= u) ++k;
      rgs[remaining[0]] = label;
      // Partial Fisher-Yates over remaining[1..m-1] picks the companions.
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const std::size_t j = 1 + i + static_cast<std::size_t>(uniform_below(rng, m - 1 - i));
        std::swap(remaining[1 + i], remaining[j]);
        rgs[remaining[1 + i]] = label;
      }
      std::vector<std::uint8_t> rest(remaining.begin() + static_cast<std::ptrdiff_t>(k), remaining.end());
      std::sort(rest.begin(), rest.end());
      remaining = std::move(rest);
      ++label;
    }
    return SetPartition(std::move(rgs));
  }

 private:
  std::size_t ground_size_;
  std::vector<std::vector<Natural>> cumulative_;
};

inline SetPartition sample_partition(std::size_t ground_size, Rng& rng) { return PartitionSampler(ground_size)(rng); }

struct Estimate {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
};

namespace detail {

struct Moments {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

// Runs `statistic` over cfg.trials partitions of [N]. Worker w handles a
// contiguous share of the trials with its own stream; the per-worker integer
// sums are exact, so the result depends only on (seed, trials, workers).
template <typename Statistic>
Moments run_trials(std::size_t N, const SamplerConfig& cfg, Statistic statistic) {
  if (cfg.trials < 1) throw std::invalid_argument("sampler: trials must be at least 1");
  const unsigned workers = std::max(1U, cfg.workers);
  const PartitionSampler sampler(N);
  std::vector<Moments> partial(workers);
  auto run = [&](unsigned w) {
    Rng rng(worker_seed(cfg.seed, w, workers));
    const std::uint64_t share = cfg.trials / workers + (w < cfg.trials % workers ? 1 : 0);
    for (std::uint64_t i = 0; i < share; ++i) {
      const std::uint64_t value = statistic(sampler(rng));
      partial[w].sum += value;
      partial[w].sum_sq += value * value;
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  Moments total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  return total;
}

inline Estimate proportion(const Moments& m, std::uint64_t trials) {
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(m.sum) / t;
  return {p, std::sqrt(p * (1 - p) / t), trials};
}

inline Estimate mean(const Moments& m, std::uint64_t trials) {
  const double t = static_cast<double>(trials);
  const double mu = static_cast<double>(m.sum) / t;
  double var = 0;
  if (trials > 1) var = std::max(0.0, (static_cast<double>(m.sum_sq) - t * mu * mu) / (t - 1));
  return {mu, std::sqrt(var / t), trials};
}

inline bool has_psi_collision(const SetPartition& p, std::size_t n) {
  auto masks = p.block_masks();
  for (auto& m : masks) m = psi_mask(m, n);
  std::sort(masks.begin(), masks.end());
  return std::adjacent_find(masks.begin(), masks.end()) != masks.end();
}

}  // namespace detail

/// Fraction of sampled partitions of [2n] with no j sharing a block with j+n.
inline Estimate estimate_p_x0(std::size_t n, const SamplerConfig& cfg) {
  if (n < 1) throw std::invalid_argument("estimate_p_x0: requires n >= 1");
  const auto m = detail::run_trials(2 * n, cfg, [n](const SetPartition& p) -> std::uint64_t {
    return shared_pairs(p.rgs(), n) == 0 ? 1 : 0;
  });
  return detail::proportion(m, cfg.trials);
}

/// Sample mean of (X)_r.
inline Estimate estimate_moment(std::size_t n, std::size_t r, const SamplerConfig& cfg) {
  if (r > n) throw std::invalid_argument("estimate_moment: requires r <= n");
  const auto m = detail::run_trials(2 * n, cfg, [n, r](const SetPartition& p) -> std::uint64_t {
    return falling_factorial(shared_pairs(p.rgs(), n), r).get_ui();
  });
  return detail::mean(m, cfg.trials);
}

/// Fraction of sampled partitions of [2n] with two blocks of equal psi-image.
inline Estimate estimate_p_collision(std::size_t n, const SamplerConfig& cfg) {
  if (n < 1) throw std::invalid_argument("estimate_p_collision: requires n >= 1");
  const auto m = detail::run_trials(2 * n, cfg, [n](const SetPartition& p) -> std::uint64_t {
    return detail::has_psi_collision(p, n) ? 1 : 0;
  });
  return detail::proportion(m, cfg.trials);
}

/// Occurrence counts of every partition of [cfg.ground_size], indexed in
/// lexicographic restricted-growth-string order.
inline std::vector<std::uint64_t> sample_histogram(const SamplerConfig& cfg) {
  const auto all = enumerate_partitions(cfg.ground_size);
  std::vector<std::uint64_t> counts(all.size(), 0);
  const PartitionSampler sampler(cfg.ground_size);
  Rng rng(worker_seed(cfg.seed, 0, 1));
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const auto p = sampler(rng);
    const auto it = std::lower_bound(all.begin(), all.end(), p);
    ++counts[static_cast<std::size_t>(it - all.begin())];
  }
  return counts;
}

}  // namespace cover_census
