#include "ccp/power_sums.hpp"

#include <string>

namespace ccp {

namespace {

void require_size(int n, int j) {
  if (j < 0 || j > n) {
    fail(ErrorCode::RangeError,
         "subset size j=" + std::to_string(j) + " outside [0.." + std::to_string(n) + "]");
  }
}

void require_exponent(int k) {
  if (k < 0) fail(ErrorCode::RangeError, "exponent k=" + std::to_string(k) + " is negative");
}

void require_element(int n, int l) {
  if (l < 1 || l > n) {
    fail(ErrorCode::IndexOutOfRange,
         "element l=" + std::to_string(l) + " outside [1.." + std::to_string(n) + "]");
  }
}

void require_three_items(int n) {
  if (n < 3) fail(ErrorCode::RangeError, "closed form needs n >= 3");
}

}  // namespace

void PowerSumQuery::validate(int n) const {
  require_size(n, j);
  require_exponent(k);
  if (element) require_element(n, *element);
}

template <Real T>
BigInt value_class_compositions(const Popularity<T>& pop, int j) {
  // ways[s] = number of partial compositions summing to s
  std::vector<BigInt> ways(j + 1, BigInt(0));
  ways[0] = 1;
  for (const auto& cls : pop.value_classes()) {
    std::vector<BigInt> next(j + 1, BigInt(0));
    for (int s = 0; s <= j; ++s) {
      if (ways[s] == 0) continue;
      for (int a = 0; a <= cls.count && s + a <= j; ++a) next[s + a] += ways[s];
    }
    ways = std::move(next);
  }
  return ways[j];
}

template <Real T>
T power_sum_bruteforce(const Popularity<T>& pop, int j, int k, std::uint64_t guard) {
  require_size(pop.n(), j);
  require_exponent(k);
  return sum_over_subsets<T>(std::span<const T>(pop.probs()), j, from_int<T>(0),
                             [k](const T& p) { return power(p, k); }, guard);
}

template <Real T>
T power_sum_enumerated(const Popularity<T>& pop, int j, int k, std::uint64_t guard) {
  require_size(pop.n(), j);
  require_exponent(k);
  return sum_over_size(pop, j, [k](const T& p) { return power(p, k); }, guard);
}

template <Real T>
T power_sum_conditioned(const Popularity<T>& pop, int l, int j, int k, Membership mode,
                        std::uint64_t guard) {
  const int n = pop.n();
  require_size(n, j);
  require_exponent(k);
  require_element(n, l);
  std::vector<T> others;
  others.reserve(n - 1);
  for (int i = 1; i <= n; ++i) {
    if (i != l) others.push_back(pop.p(i));
  }
  auto term = [k](const T& p) { return power(p, k); };
  const std::span<const T> rest(others);
  if (mode == Membership::Include) {
    if (j == 0) return from_int<T>(0);
    return sum_over_subsets<T>(rest, j - 1, pop.p(l), term, guard);
  }
  if (j > n - 1) return from_int<T>(0);
  return sum_over_subsets<T>(rest, j, from_int<T>(0), term, guard);
}

template <Real T>
T power_sum_query(const Popularity<T>& pop, const PowerSumQuery& query, std::uint64_t guard) {
  query.validate(pop.n());
  if (!query.element) return power_sum_bruteforce(pop, query.j, query.k, guard);
  return power_sum_conditioned(pop, *query.element, query.j, query.k, query.mode, guard);
}

BigInt relation1_closed(int n, int j) {
  require_size(n, j);
  return binomial(n - 1, j - 1);
}

template <Real T>
T moment(const Popularity<T>& pop, int k) {
  CompensatedSum<T> acc;
  for (const T& p : pop.probs()) acc += power(p, k);
  return acc.value();
}

template <Real T>
T relation2_closed(const Popularity<T>& pop, int l, int j) {
  const int n = pop.n();
  require_element(n, l);
  if (j < 1 || j > n - 1) {
    fail(ErrorCode::RangeError, "excluded first-power closed form needs 1 <= j <= n-1, got j=" + std::to_string(j));
  }
  return (from_int<T>(1) - pop.p(l)) * binomial_as<T>(n - 2, j - 1);
}

template <Real T>
T relation4_closed(const Popularity<T>& pop, int j) {
  const int n = pop.n();
  require_size(n, j);
  return binomial_as<T>(n - 2, j - 2) + binomial_as<T>(n - 2, j - 1) * moment(pop, 2);
}

template <Real T>
T relation6_closed(const Popularity<T>& pop, int l, int j) {
  const int n = pop.n();
  require_three_items(n);
  require_element(n, l);
  if (j < 1 || j > n) fail(ErrorCode::RangeError, "included second-power closed form needs 1 <= j <= n");
  const T& pl = pop.p(l);
  const T c1 = binomial_as<T>(n - 3, j - 1);
  const T c2 = binomial_as<T>(n - 3, j - 2);
  const T c3 = binomial_as<T>(n - 3, j - 3);
  return pl * pl * (c1 - c2) + from_int<T>(2) * pl * c2 + c3 + c2 * moment(pop, 2);
}

template <Real T>
T relation7_closed(const Popularity<T>& pop, int j) {
  const int n = pop.n();
  require_three_items(n);
  require_size(n, j);
  const T c1 = binomial_as<T>(n - 3, j - 1);
  const T c2 = binomial_as<T>(n - 3, j - 2);
  const T c3 = binomial_as<T>(n - 3, j - 3);
  return moment(pop, 3) * (c1 - c2) + from_int<T>(3) * moment(pop, 2) * c2 + c3;
}

#define CCP_POWER_SUMS_INSTANTIATE(T)                                                    \
  template BigInt value_class_compositions(const Popularity<T>&, int);                   \
  template T power_sum_bruteforce(const Popularity<T>&, int, int, std::uint64_t);        \
  template T power_sum_enumerated(const Popularity<T>&, int, int, std::uint64_t);        \
  template T power_sum_conditioned(const Popularity<T>&, int, int, int, Membership,      \
                                   std::uint64_t);                                       \
  template T power_sum_query(const Popularity<T>&, const PowerSumQuery&, std::uint64_t); \
  template T relation2_closed(const Popularity<T>&, int, int);                           \
  template T relation4_closed(const Popularity<T>&, int);                                \
  template T relation6_closed(const Popularity<T>&, int, int);                           \
  template T relation7_closed(const Popularity<T>&, int);                                \
  template T moment(const Popularity<T>&, int);

CCP_POWER_SUMS_INSTANTIATE(Rational)
CCP_POWER_SUMS_INSTANTIATE(double)

}  // namespace ccp
