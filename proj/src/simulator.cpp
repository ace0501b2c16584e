#include "ccp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace ccp {

namespace {

constexpr std::uint64_t kChunks = 64;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct ChunkResult {
  std::map<std::int64_t, std::uint64_t> counts;
  std::uint64_t truncated = 0;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over the combined state
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double EmpiricalDistribution::cdf(std::int64_t k) const {
  if (samples == 0) return 0.0;
  std::uint64_t below = 0;
  for (const auto& [t, count] : counts) {
    if (t > k) break;
    below += count;
  }
  return static_cast<double>(below) / static_cast<double>(samples);
}

double EmpiricalDistribution::frequency(std::int64_t k) const {
  if (samples == 0) return 0.0;
  auto it = counts.find(k);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
}

double EmpiricalDistribution::mean() const {
  double total = 0.0;
  std::uint64_t n = 0;
  for (const auto& [t, count] : counts) {
    total += static_cast<double>(t) * static_cast<double>(count);
    n += count;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

double EmpiricalDistribution::standard_error() const {
  const double m = mean();
  double ss = 0.0;
  std::uint64_t n = 0;
  for (const auto& [t, count] : counts) {
    const double d = static_cast<double>(t) - m;
    ss += d * d * static_cast<double>(count);
    n += count;
  }
  if (n < 2) return 0.0;
  const double variance = ss / static_cast<double>(n - 1);
  return std::sqrt(variance / static_cast<double>(n));
}

CategoricalSampler::CategoricalSampler(const Popularity<double>& pop) {
  cumulative_.reserve(pop.n());
  double acc = 0.0;
  for (double p : pop.probs()) {
    acc += p;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

int CategoricalSampler::draw(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(), n() - 1)) + 1;
}

std::optional<std::int64_t> sample_waiting_time(const CategoricalSampler& sampler, int c,
                                                std::mt19937_64& rng, std::int64_t k_cap) {
  if (c < 1 || c > sampler.n()) {
    fail(ErrorCode::RangeError, "collection size c=" + std::to_string(c) + " outside [1..n]");
  }
  std::vector<char> seen(sampler.n() + 1, 0);
  int distinct = 0;
  for (std::int64_t trial = 1; trial <= k_cap; ++trial) {
    const int item = sampler.draw(rng);
    if (!seen[item]) {
      seen[item] = 1;
      if (++distinct == c) return trial;
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> sample_waiting_time(const Popularity<double>& pop, int c,
                                                std::mt19937_64& rng, std::int64_t k_cap) {
  return sample_waiting_time(CategoricalSampler(pop), c, rng, k_cap);
}

EmpiricalDistribution empirical_distribution(const Popularity<double>& pop, int c,
                                             const SimConfig& cfg) {
  const int n = pop.n();
  if (c < 1 || c > n) {
    fail(ErrorCode::RangeError, "collection size c=" + std::to_string(c) + " outside [1..n]");
  }
  if (cfg.samples < 1) fail(ErrorCode::RangeError, "need at least one sample");
  const std::int64_t k_cap = cfg.k_cap == 0 ? std::int64_t{1000} * n : cfg.k_cap;
  if (k_cap < n) fail(ErrorCode::RangeError, "trial cap must be at least n");

  const CategoricalSampler sampler(pop);
  const std::uint64_t chunks = std::min(kChunks, cfg.samples);
  std::vector<ChunkResult> results(chunks);
  auto run_chunk = [&](std::uint64_t chunk) {
    std::mt19937_64 rng(derive_seed(cfg.seed, chunk));
    const std::uint64_t begin = cfg.samples * chunk / chunks;
    const std::uint64_t end = cfg.samples * (chunk + 1) / chunks;
    ChunkResult& out = results[chunk];
    for (std::uint64_t s = begin; s < end; ++s) {
      if (auto t = sample_waiting_time(sampler, c, rng, k_cap)) {
        ++out.counts[*t];
      } else {
        ++out.truncated;
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, std::thread::hardware_concurrency()), chunks));
  if (workers <= 1) {
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) run_chunk(chunk);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t chunk = w; chunk < chunks; chunk += workers) run_chunk(chunk);
      });
    }
  }

  EmpiricalDistribution dist;
  dist.samples = cfg.samples;
  dist.k_cap = k_cap;
  dist.seed = cfg.seed;
  for (const auto& r : results) {
    dist.truncated += r.truncated;
    for (const auto& [t, count] : r.counts) dist.counts[t] += count;
  }
  return dist;
}

}  // namespace ccp
