#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccp/popularity.hpp"

namespace ccp {

enum class Membership { Include, Exclude };

// Describes a sum over size-j subsets of P_J^k, optionally restricted to
// subsets that contain (or omit) one element.
struct PowerSumQuery {
  int j = 0;
  int k = 0;
  std::optional<int> element;
  Membership mode = Membership::Include;

  // Throws RangeError / IndexOutOfRange when the query does not fit n items.
  void validate(int n) const;
};

// Sum of term(offset + P_K) over every size-j subset K of `items`, where
// P_K adds up the chosen item probabilities. Subsets are visited in
// lexicographic order and prefix sums are maintained incrementally.
template <Real T, class Term>
T sum_over_subsets(std::span<const T> items, int j, const T& offset, Term&& term,
                   std::uint64_t guard = kDefaultEnumerationGuard) {
  SubsetStream stream(static_cast<int>(items.size()), j, guard);
  std::vector<T> prefix(j + 1, offset);
  for (int t = 0; t < j; ++t) prefix[t + 1] = prefix[t] + items[stream.current()[t] - 1];
  CompensatedSum<T> acc;
  while (true) {
    acc += term(prefix[j]);
    stream.advance();
    if (stream.done()) break;
    const auto members = stream.current();
    for (int t = stream.changed_from(); t < j; ++t) prefix[t + 1] = prefix[t] + items[members[t] - 1];
  }
  return acc.value();
}

// Number of (a_1..a_g) with 0 <= a_i <= count_i and sum j: the work done by
// sum_over_value_classes.
template <Real T>
BigInt value_class_compositions(const Popularity<T>& pop, int j);

// Same sum as sum_over_subsets over all items of pop, but grouping subsets
// by how many members they take from each block of equal probabilities.
// Every composition (a_1..a_g) of j stands for prod C(count_i, a_i) subsets
// sharing P_J = sum a_i * value_i.
template <Real T, class Term>
T sum_over_value_classes(const Popularity<T>& pop, int j, Term&& term,
                         std::uint64_t guard = kDefaultEnumerationGuard) {
  if (j < 0 || j > pop.n()) fail(ErrorCode::RangeError, "subset size outside [0..n]");
  check_enumeration(value_class_compositions(pop, j), guard);
  const auto& classes = pop.value_classes();
  const int g = static_cast<int>(classes.size());
  // remaining[i]: items available in classes i..g-1
  std::vector<int> remaining(g + 1, 0);
  for (int i = g - 1; i >= 0; --i) remaining[i] = remaining[i + 1] + classes[i].count;

  CompensatedSum<T> acc;
  std::vector<int> take(g, 0);
  auto recurse = [&](auto&& self, int cls, int left, const T& prob, const BigInt& weight) -> void {
    if (cls == g) {
      if (left == 0) acc += from_bigint<T>(weight) * term(prob);
      return;
    }
    const int hi = std::min(left, classes[cls].count);
    const int lo = std::max(0, left - remaining[cls + 1]);
    for (int a = lo; a <= hi; ++a) {
      self(self, cls + 1, left - a, prob + from_int<T>(a) * classes[cls].value,
           weight * binomial(classes[cls].count, a));
    }
  };
  recurse(recurse, 0, j, from_int<T>(0), BigInt(1));
  return acc.value();
}

// Sum over all size-j subsets of term(P_J), by whichever exhaustive route
// (subset-by-subset or by value class) touches fewer terms.
template <Real T, class Term>
T sum_over_size(const Popularity<T>& pop, int j, Term&& term,
                std::uint64_t guard = kDefaultEnumerationGuard) {
  if (j < 0 || j > pop.n()) fail(ErrorCode::RangeError, "subset size outside [0..n]");
  if (value_class_compositions(pop, j) < binomial(pop.n(), j)) {
    return sum_over_value_classes(pop, j, term, guard);
  }
  return sum_over_subsets<T>(std::span<const T>(pop.probs()), j, from_int<T>(0), term, guard);
}

// Sum of P_J^k over all size-j subsets, visiting every subset. P_empty^0 = 1.
template <Real T>
T power_sum_bruteforce(const Popularity<T>& pop, int j, int k,
                       std::uint64_t guard = kDefaultEnumerationGuard);

// Same value as power_sum_bruteforce, evaluated by value class when that is
// cheaper. Exact for both backends; used where the popularity has repeats.
template <Real T>
T power_sum_enumerated(const Popularity<T>& pop, int j, int k,
                       std::uint64_t guard = kDefaultEnumerationGuard);

// Sum of P_J^k over size-j subsets containing (Include) or omitting
// (Exclude) element l.
template <Real T>
T power_sum_conditioned(const Popularity<T>& pop, int l, int j, int k, Membership mode,
                        std::uint64_t guard = kDefaultEnumerationGuard);

template <Real T>
T power_sum_query(const Popularity<T>& pop, const PowerSumQuery& query,
                  std::uint64_t guard = kDefaultEnumerationGuard);

// sum_{|J|=j} P_J = C(n-1, j-1) for every popularity.
BigInt relation1_closed(int n, int j);

// sum_{|J|=j, l not in J} P_J = (1 - p_l) C(n-2, j-1), 1 <= j <= n-1.
template <Real T>
T relation2_closed(const Popularity<T>& pop, int l, int j);

// sum_{|J|=j} P_J^2 = C(n-2, j-2) + C(n-2, j-1) sum p^2.
template <Real T>
T relation4_closed(const Popularity<T>& pop, int j);

// sum_{|J|=j, l in J} P_J^2. Needs n >= 3.
template <Real T>
T relation6_closed(const Popularity<T>& pop, int l, int j);

// sum_{|J|=j} P_J^3. Needs n >= 3.
template <Real T>
T relation7_closed(const Popularity<T>& pop, int j);

// sum_l p_l^k
template <Real T>
T moment(const Popularity<T>& pop, int k);

#define CCP_POWER_SUMS_EXTERN(T)                                                            \
  extern template BigInt value_class_compositions(const Popularity<T>&, int);               \
  extern template T power_sum_bruteforce(const Popularity<T>&, int, int, std::uint64_t);    \
  extern template T power_sum_enumerated(const Popularity<T>&, int, int, std::uint64_t);    \
  extern template T power_sum_conditioned(const Popularity<T>&, int, int, int, Membership,  \
                                          std::uint64_t);                                   \
  extern template T power_sum_query(const Popularity<T>&, const PowerSumQuery&,             \
                                    std::uint64_t);                                         \
  extern template T relation2_closed(const Popularity<T>&, int, int);                       \
  extern template T relation4_closed(const Popularity<T>&, int);                            \
  extern template T relation6_closed(const Popularity<T>&, int, int);                       \
  extern template T relation7_closed(const Popularity<T>&, int);                            \
  extern template T moment(const Popularity<T>&, int);

CCP_POWER_SUMS_EXTERN(Rational)
CCP_POWER_SUMS_EXTERN(double)
#undef CCP_POWER_SUMS_EXTERN

}  // namespace ccp
