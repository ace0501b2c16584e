#include "ccp/popularity.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace ccp {

void check_enumeration(const BigInt& count, std::uint64_t guard) {
  if (guard != kNoGuard && count > BigInt(guard)) {
    fail(ErrorCode::EnumerationTooLarge,
         "enumeration of " + count.str() + " subsets exceeds the guard of " +
             std::to_string(guard));
  }
}

IndexSet IndexSet::of(std::vector<int> members, int n) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 1 || members[i] > n) {
      fail(ErrorCode::IndexOutOfRange,
           "index " + std::to_string(members[i]) + " outside [1.." + std::to_string(n) + "]");
    }
    if (i > 0 && members[i] <= members[i - 1]) {
      fail(ErrorCode::IndexOutOfRange, "index set members must be strictly increasing");
    }
  }
  return IndexSet(std::move(members));
}

bool IndexSet::contains(int element) const {
  return std::binary_search(members_.begin(), members_.end(), element);
}

SubsetStream::SubsetStream(int n, int j, std::uint64_t guard) : n_(n), j_(j) {
  if (n < 0 || j < 0 || j > n) {
    fail(ErrorCode::RangeError,
         "subset size " + std::to_string(j) + " outside [0.." + std::to_string(n) + "]");
  }
  check_enumeration(binomial(n, j), guard);
  members_.resize(j);
  for (int i = 0; i < j; ++i) members_[i] = i + 1;
}

IndexSet SubsetStream::current_set() const { return IndexSet::of(members_, n_); }

void SubsetStream::advance() {
  if (done_) return;
  int i = j_ - 1;
  while (i >= 0 && members_[i] == n_ - j_ + i + 1) --i;
  if (i < 0) {
    done_ = true;
    return;
  }
  ++members_[i];
  for (int t = i + 1; t < j_; ++t) members_[t] = members_[t - 1] + 1;
  changed_from_ = i;
}

template <Real T>
Popularity<T>::Popularity(std::vector<T> probs) : probs_(std::move(probs)) {
  std::map<T, int> counts;
  for (const T& p : probs_) ++counts[p];
  classes_.reserve(counts.size());
  for (const auto& [value, count] : counts) classes_.push_back({value, count});
}

template <Real T>
Popularity<T> Popularity<T>::from_values(std::vector<T> values, bool renormalize) {
  const T zero = from_int<T>(0);
  const T one = from_int<T>(1);
  if (values.size() < 2) {
    fail(ErrorCode::SizeTooSmall,
         "a popularity needs at least 2 items, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > zero) || (!renormalize && !(values[i] < one))) {
      fail(ErrorCode::OutOfRange, "p_" + std::to_string(i + 1) + " = " +
                                      format_decimal(to_double(values[i])) +
                                      " is not strictly between 0 and 1");
    }
  }
  CompensatedSum<T> acc;
  for (const T& v : values) acc += v;
  const T sum = acc.value();
  if (renormalize) {
    for (T& v : values) v /= sum;
  } else {
    bool normalized;
    if constexpr (std::same_as<T, Rational>) {
      normalized = sum == one;
    } else {
      normalized = std::fabs(sum - 1.0) <= kFloatTolerance;
    }
    if (!normalized) {
      fail(ErrorCode::NotNormalized,
           "probabilities sum to " + format_decimal(to_double(sum)) + ", not 1");
    }
  }
  return Popularity(std::move(values));
}

template <Real T>
Popularity<T> Popularity<T>::uniform(int n) {
  if (n < 2) {
    fail(ErrorCode::SizeTooSmall, "a popularity needs at least 2 items, got " + std::to_string(n));
  }
  T p;
  if constexpr (std::same_as<T, Rational>) {
    p = Rational(1, n);
  } else {
    p = 1.0 / n;
  }
  return Popularity(std::vector<T>(n, p));
}

template <Real T>
T subset_probability(const Popularity<T>& pop, const IndexSet& subset) {
  if (subset.max_element() > pop.n()) {
    fail(ErrorCode::IndexOutOfRange, "index set does not fit a popularity of size " +
                                         std::to_string(pop.n()));
  }
  CompensatedSum<T> acc;
  for (int i : subset.members()) acc += pop.p(i);
  return acc.value();
}

Popularity<Rational> random_rational_popularity(int n, std::mt19937_64& rng, int max_weight) {
  std::vector<BigInt> weights(n);
  BigInt total = 0;
  for (int i = 0; i < n; ++i) {
    weights[i] = static_cast<long>(rng() % static_cast<std::uint64_t>(max_weight)) + 1;
    total += weights[i];
  }
  std::vector<Rational> probs;
  probs.reserve(n);
  for (const BigInt& w : weights) probs.emplace_back(w, total);
  return Popularity<Rational>::from_values(std::move(probs));
}

template class Popularity<Rational>;
template class Popularity<double>;
template Rational subset_probability(const Popularity<Rational>&, const IndexSet&);
template double subset_probability(const Popularity<double>&, const IndexSet&);

}  // namespace ccp
