#include "ccp/decomposition.hpp"

#include <stdexcept>
#include <string>

namespace ccp {

namespace {

void require_decomposable(int n, int k) {
  if (k < 1 || k >= n) {
    fail(ErrorCode::RangeError, "decomposition needs 1 <= k < n, got k=" + std::to_string(k) +
                                    ", n=" + std::to_string(n));
  }
}

int sign(int e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

template <Real T>
std::shared_ptr<const std::vector<T>> SmallSumCache<T>::small_sums(int k) const {
  require_decomposable(pop_.n(), k);
  {
    std::lock_guard lock(mutex_);
    if (auto it = sums_.find(k); it != sums_.end()) return it->second;
  }
  auto sums = std::make_shared<std::vector<T>>();
  sums->reserve(k);
  for (int q = 1; q <= k; ++q) sums->push_back(power_sum_enumerated(pop_, q, k, guard_));
  std::lock_guard lock(mutex_);
  return sums_.emplace(k, std::move(sums)).first->second;
}

template <Real T>
AlphaTable<T> alpha_general(const SmallSumCache<T>& cache, int k) {
  const int n = cache.popularity().n();
  require_decomposable(n, k);
  const auto sums = cache.small_sums(k);
  AlphaTable<T> table{n, k, {}, AlphaProvenance::General, 1.0};
  table.weights.reserve(k);
  for (int v = 1; v <= k; ++v) {
    ConditionEstimate cond;
    CompensatedSum<T> acc;
    for (int q = 1; q <= v; ++q) {
      T term = from_int<T>(sign(v - q)) * binomial_as<T>(n - k - 1 + v - q, v - q) * (*sums)[q - 1];
      cond.observe(term);
      acc += term;
    }
    table.weights.push_back(acc.value());
    if constexpr (std::same_as<T, double>) {
      table.condition = std::max(table.condition, cond.finish(table.weights.back()));
    }
  }
  return table;
}

template <Real T>
AlphaTable<T> alpha_uniform(int n, int k) {
  if (n < 2) fail(ErrorCode::RangeError, "uniform popularity needs n >= 2");
  require_decomposable(n, k);
  const BigInt scale = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
  AlphaTable<T> table{n, k, {}, AlphaProvenance::Uniform, 1.0};
  table.weights.reserve(k);
  for (int u = 1; u <= k; ++u) {
    BigInt num = 0;
    for (int i = 1; i <= u; ++i) {
      num += stirling2(k, i) * factorial(i) * binomial(k - i, u - i) * binomial(n, i);
    }
    const Rational value(num, scale);
    if constexpr (std::same_as<T, Rational>) {
      table.weights.push_back(value);
    } else {
      table.weights.push_back(to_double(value));
    }
  }
  return table;
}

template <Real T>
T theorem1_eval(const AlphaTable<T>& table, int j) {
  if (j < 0 || j > table.n) fail(ErrorCode::RangeError, "subset size outside [0..n]");
  CompensatedSum<T> acc;
  for (int u = 1; u <= table.k; ++u) {
    const BigInt& c = binomial(table.n - table.k, j - u);
    if (c != 0) acc += from_bigint<T>(c) * table.weight(u);
  }
  return acc.value();
}

BigInt eta(int n, int k, int j, int q) {
  require_decomposable(n, k);
  if (q < 1 || q > k) fail(ErrorCode::RangeError, "eta needs 1 <= q <= k");
  if (j < 0 || j > n) fail(ErrorCode::RangeError, "eta needs 0 <= j <= n");
  if (q == j) return 1;
  if (q > j) return 0;
  // 1 <= q < j: (-1)^{k-q} C(n-k, j-k) C(n-q, n-k) (j-k)/(j-q)
  BigInt num = binomial(n - k, j - k) * binomial(n - q, n - k) * (j - k);
  BigInt quotient = num / (j - q);
  if (quotient * (j - q) != num) throw std::logic_error("eta closed form is not integral");
  return sign(k - q) * quotient;
}

template <Real T>
T power_sum_fast(const SmallSumCache<T>& cache, int j, int k) {
  const int n = cache.popularity().n();
  require_decomposable(n, k);
  if (j <= k || j > n) {
    fail(ErrorCode::RangeError, "fast path needs 0 < k < j <= n, got j=" + std::to_string(j) +
                                    ", k=" + std::to_string(k));
  }
  const auto sums = cache.small_sums(k);
  CompensatedSum<T> acc;
  for (int q = 1; q <= k; ++q) acc += from_bigint<T>(eta(n, k, j, q)) * (*sums)[q - 1];
  return acc.value();
}

template <Real T>
T power_sum(const SmallSumCache<T>& cache, int j, int k) {
  const auto& pop = cache.popularity();
  const int n = pop.n();
  if (j < 0 || j > n) fail(ErrorCode::RangeError, "subset size outside [0..n]");
  if (k < 0) fail(ErrorCode::RangeError, "negative exponent");
  if (k == 0) return binomial_as<T>(n, j);
  if (j <= k || k >= n) return power_sum_enumerated(pop, j, k, cache.guard());
  BigInt fast_cost = 0;
  for (int q = 1; q <= k; ++q) fast_cost += value_class_compositions(pop, q);
  if (value_class_compositions(pop, j) <= fast_cost) {
    return power_sum_enumerated(pop, j, k, cache.guard());
  }
  return power_sum_fast(cache, j, k);
}

template <Real T>
T corollary1_sum(const Popularity<T>& pop, int k, std::uint64_t guard) {
  const int n = pop.n();
  if (k < 0 || k >= n) {
    fail(ErrorCode::RangeError, "alternating identity needs 0 <= k < n, got k=" + std::to_string(k));
  }
  CompensatedSum<T> acc;
  for (int j = 0; j <= n; ++j) {
    acc += from_int<T>(sign(j)) * power_sum_bruteforce(pop, j, k, guard);
  }
  return acc.value();
}

Rational subset_count_ratio(int n, int j, int k) {
  if (k < 1 || j < 0 || j > n || k > n) fail(ErrorCode::RangeError, "invalid subset-count ratio");
  BigInt small = 0;
  for (int q = 1; q <= k; ++q) small += binomial(n, q);
  return Rational(binomial(n, j), small);
}

#define CCP_DECOMPOSITION_INSTANTIATE(T)                                \
  template class SmallSumCache<T>;                                      \
  template AlphaTable<T> alpha_general(const SmallSumCache<T>&, int);   \
  template AlphaTable<T> alpha_uniform<T>(int, int);                    \
  template T theorem1_eval(const AlphaTable<T>&, int);                  \
  template T power_sum_fast(const SmallSumCache<T>&, int, int);         \
  template T power_sum(const SmallSumCache<T>&, int, int);              \
  template T corollary1_sum(const Popularity<T>&, int, std::uint64_t);

CCP_DECOMPOSITION_INSTANTIATE(Rational)
CCP_DECOMPOSITION_INSTANTIATE(double)

}  // namespace ccp
