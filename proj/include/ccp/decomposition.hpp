#pragma once

// Decomposition of subset power sums onto a binomial basis:
//
//   sum_{|J|=j} P_J^k = sum_{u=1..k} C(n-k, j-u) * alpha_{k,u}
//
// with weights alpha_{k,u} that do not depend on j and alpha_{k,k} = 1.
// For j > k the same sum is a fixed linear combination of the k "small"
// sums sum_{|J|=q} P_J^k, q = 1..k, which is what makes the fast path fast.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ccp/popularity.hpp"
#include "ccp/power_sums.hpp"

namespace ccp {

inline constexpr double kConditionWarningThreshold = 1e12;

// Tracks max |term| / |result| for an alternating sum.
class ConditionEstimate {
 public:
  template <Real T>
  void observe(const T& term) {
    max_term_ = std::max(max_term_, std::fabs(to_double(term)));
  }

  template <Real T>
  double finish(const T& result) const {
    const double r = std::fabs(to_double(result));
    if (max_term_ == 0.0) return 1.0;
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return std::max(1.0, max_term_ / r);
  }

 private:
  double max_term_ = 0.0;
};

enum class AlphaProvenance { General, Uniform };

template <Real T>
struct AlphaTable {
  int n = 0;
  int k = 0;
  std::vector<T> weights;  // weights[u - 1] = alpha_{k,u}
  AlphaProvenance provenance = AlphaProvenance::General;
  // Largest condition estimate over the k entries; 1 for exact tables.
  double condition = 1.0;

  const T& weight(int u) const { return weights.at(u - 1); }
  bool cancellation_warning() const { return condition > kConditionWarningThreshold; }
};

// Memoizes the small sums sum_{|J|=q} P_J^k, q = 1..k, per exponent k for
// one popularity. Safe to share between threads: concurrent misses may
// compute the same entry twice, and the first finished one is kept.
template <Real T>
class SmallSumCache {
 public:
  explicit SmallSumCache(Popularity<T> pop, std::uint64_t guard = kDefaultEnumerationGuard)
      : pop_(std::move(pop)), guard_(guard) {}

  const Popularity<T>& popularity() const { return pop_; }
  std::uint64_t guard() const { return guard_; }

  // Element q - 1 holds sum_{|J|=q} P_J^k.
  std::shared_ptr<const std::vector<T>> small_sums(int k) const;

 private:
  Popularity<T> pop_;
  std::uint64_t guard_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const std::vector<T>>> sums_;
};

// alpha_{k,v} = sum_{q=1..v} (-1)^{v-q} C(n-k-1+v-q, v-q) sum_{|J|=q} P_J^k
template <Real T>
AlphaTable<T> alpha_general(const SmallSumCache<T>& cache, int k);

template <Real T>
AlphaTable<T> alpha_general(const Popularity<T>& pop, int k,
                            std::uint64_t guard = kDefaultEnumerationGuard) {
  return alpha_general(SmallSumCache<T>(pop, guard), k);
}

// Uniform popularity on n items via Stirling numbers:
// alpha_{k,u} = n^{-k} sum_i S(k,i) i! C(k-i, u-i) C(n,i).
template <Real T>
AlphaTable<T> alpha_uniform(int n, int k);

// sum_u C(n-k, j-u) alpha_{k,u}
template <Real T>
T theorem1_eval(const AlphaTable<T>& table, int j);

// eta_{k,j}(q): weight of the size-q small sum in the size-j power sum.
// Defined for 1 <= q <= k < n and 0 <= j <= n. Always an integer.
BigInt eta(int n, int k, int j, int q);

// sum_{|J|=j} P_J^k for 0 < k < j <= n from the k small sums only.
template <Real T>
T power_sum_fast(const SmallSumCache<T>& cache, int j, int k);

template <Real T>
T power_sum_fast(const Popularity<T>& pop, int j, int k,
                 std::uint64_t guard = kDefaultEnumerationGuard) {
  return power_sum_fast(SmallSumCache<T>(pop, guard), j, k);
}

// Picks the route: C(n, j) for k = 0, enumeration for j <= k, fast path for
// j > k.
template <Real T>
T power_sum(const SmallSumCache<T>& cache, int j, int k);

template <Real T>
T power_sum(const Popularity<T>& pop, int j, int k,
            std::uint64_t guard = kDefaultEnumerationGuard) {
  return power_sum(SmallSumCache<T>(pop, guard), j, k);
}

// sum over all subsets J of (-1)^{|J|} P_J^k, by enumeration; zero for
// 0 <= k < n.
template <Real T>
T corollary1_sum(const Popularity<T>& pop, int k, std::uint64_t guard = kDefaultEnumerationGuard);

// C(n, j) / sum_{q=1..k} C(n, q): how many more subsets the brute force
// visits than the fast path.
Rational subset_count_ratio(int n, int j, int k);

#define CCP_DECOMPOSITION_EXTERN(T)                                            \
  extern template class SmallSumCache<T>;                                      \
  extern template AlphaTable<T> alpha_general(const SmallSumCache<T>&, int);   \
  extern template AlphaTable<T> alpha_uniform<T>(int, int);                    \
  extern template T theorem1_eval(const AlphaTable<T>&, int);                  \
  extern template T power_sum_fast(const SmallSumCache<T>&, int, int);         \
  extern template T power_sum(const SmallSumCache<T>&, int, int);              \
  extern template T corollary1_sum(const Popularity<T>&, int, std::uint64_t);

CCP_DECOMPOSITION_EXTERN(Rational)
CCP_DECOMPOSITION_EXTERN(double)
#undef CCP_DECOMPOSITION_EXTERN

}  // namespace ccp
