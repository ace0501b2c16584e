#pragma once

// Distribution of T_c, the number of independent draws from a popularity
// needed to see c distinct items out of n:
//
//   Pr[T_c > k] = sum_{j=0..c-1} (-1)^{c-1-j} C(n-j-1, n-c) sum_{|J|=j} P_J^k
//
// and the matching pdf, CDF, expectation and uniform closed forms.

#include <cstdint>
#include <vector>

#include "ccp/decomposition.hpp"
#include "ccp/popularity.hpp"

namespace ccp {

enum class SumStrategy {
  // Cheapest exact route per inner sum (value classes, fast path, ...).
  Auto,
  // Every inner sum visits every subset.
  BruteForce,
};

struct EvalOptions {
  SumStrategy strategy = SumStrategy::Auto;
  std::uint64_t guard = kDefaultEnumerationGuard;
};

// A value with the condition estimate of the alternating sum that made it.
template <Real T>
struct Evaluation {
  T value;
  double condition = 1.0;

  bool cancellation_warning() const { return condition > kConditionWarningThreshold; }
};

template <Real T>
T pdf(const Popularity<T>& pop, int c, int k, const EvalOptions& opts = {});

template <Real T>
T cdf(const Popularity<T>& pop, int c, int k, const EvalOptions& opts = {});

template <Real T>
T ccdf(const Popularity<T>& pop, int c, int k, const EvalOptions& opts = {});

template <Real T>
Evaluation<T> ccdf_evaluation(const Popularity<T>& pop, int c, int k,
                              const EvalOptions& opts = {});

// The outer alternating-sum terms of the CCDF, j = 0..c-1, in order.
template <Real T>
std::vector<T> ccdf_terms(const Popularity<T>& pop, int c, int k, const EvalOptions& opts = {});

// n! S(k-1, c-1) / ((n-c)! n^k); zero for k = 0.
Rational pdf_uniform(int n, int c, int k);

// Pr[T_c = c] = c! sum_{|J|=c} prod_{i in J} p_i
template <Real T>
T min_time_probability(const Popularity<T>& pop, int c,
                       std::uint64_t guard = kDefaultEnumerationGuard);

// E[T_c] = sum_j (-1)^{c-1-j} C(n-j-1, n-c) sum_{|J|=j} 1 / (1 - P_J)
template <Real T>
T expectation(const Popularity<T>& pop, int c, std::uint64_t guard = kDefaultEnumerationGuard);

// sum_{i=0}^{c-1} (-1)^{c-1-i} C(n-i-1, n-c) C(n-k, i-u), for
// 0 <= u <= k < c <= n. Evaluates to 1 when u == k and 0 when u < k.
BigInt identity_appendix1(int n, int c, int k, int u);

template <Real T>
struct WaitingTimeRow {
  int k;
  T pdf;
  T cdf;
  T ccdf;
};

template <Real T>
struct WaitingTimeTable {
  int c = 0;
  std::vector<WaitingTimeRow<T>> rows;
  // Worst CCDF condition estimate over the rows.
  double condition = 1.0;
};

inline int default_k_max(int n, int c) { return std::max(3 * n, c + 20); }

// Rows k = 0..k_max. pdf is evaluated from its own formula, independently
// of the CCDF column.
template <Real T>
WaitingTimeTable<T> waiting_time_table(const Popularity<T>& pop, int c, int k_max,
                                       const EvalOptions& opts = {});

#define CCP_WAITING_TIME_EXTERN(T)                                                           \
  extern template T pdf(const Popularity<T>&, int, int, const EvalOptions&);                 \
  extern template T cdf(const Popularity<T>&, int, int, const EvalOptions&);                 \
  extern template T ccdf(const Popularity<T>&, int, int, const EvalOptions&);                \
  extern template Evaluation<T> ccdf_evaluation(const Popularity<T>&, int, int,              \
                                                const EvalOptions&);                         \
  extern template std::vector<T> ccdf_terms(const Popularity<T>&, int, int,                  \
                                            const EvalOptions&);                             \
  extern template T min_time_probability(const Popularity<T>&, int, std::uint64_t);          \
  extern template T expectation(const Popularity<T>&, int, std::uint64_t);                   \
  extern template WaitingTimeTable<T> waiting_time_table(const Popularity<T>&, int, int,     \
                                                         const EvalOptions&);

CCP_WAITING_TIME_EXTERN(Rational)
CCP_WAITING_TIME_EXTERN(double)
#undef CCP_WAITING_TIME_EXTERN

}  // namespace ccp
