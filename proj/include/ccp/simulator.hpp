#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ccp/popularity.hpp"

namespace ccp {

inline constexpr std::string_view kGeneratorName = "mt19937_64";

struct SimConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  // Per-sample trial cap; 0 selects 1000 * n.
  std::int64_t k_cap = 0;
};

struct EmpiricalDistribution {
  std::map<std::int64_t, std::uint64_t> counts;  // trial count -> occurrences
  std::uint64_t samples = 0;
  std::uint64_t truncated = 0;  // samples that hit the trial cap
  std::int64_t k_cap = 0;
  std::uint64_t seed = 0;
  std::string generator{kGeneratorName};

  // Fraction of all samples (truncated included) with T <= k.
  double cdf(std::int64_t k) const;
  double frequency(std::int64_t k) const;
  // Moments over completed samples only.
  double mean() const;
  double standard_error() const;
};

// Draws item indices 1..n from a popularity by binary search over the
// cumulative distribution.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Popularity<double>& pop);

  int n() const { return static_cast<int>(cumulative_.size()); }
  int draw(std::mt19937_64& rng) const;

 private:
  std::vector<double> cumulative_;
};

// Number of draws until c distinct items have been seen, or nullopt when
// k_cap draws did not suffice.
std::optional<std::int64_t> sample_waiting_time(const CategoricalSampler& sampler, int c,
                                                std::mt19937_64& rng, std::int64_t k_cap);

std::optional<std::int64_t> sample_waiting_time(const Popularity<double>& pop, int c,
                                                std::mt19937_64& rng, std::int64_t k_cap);

// Samples are split into fixed chunks, each with its own generator seeded
// from (seed, chunk index), so the histogram does not depend on how many
// worker threads ran.
EmpiricalDistribution empirical_distribution(const Popularity<double>& pop, int c,
                                             const SimConfig& cfg);

// Deterministic 64-bit mix used to derive per-chunk seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace ccp
