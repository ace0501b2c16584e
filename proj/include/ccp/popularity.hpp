#pragma once

#include <cstdint>
#include <iterator>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "ccp/numerics.hpp"

namespace ccp {

// Default ceiling on the number of subsets a single exhaustive call may
// visit.
inline constexpr std::uint64_t kDefaultEnumerationGuard = std::uint64_t{1} << 28;
inline constexpr std::uint64_t kNoGuard = std::numeric_limits<std::uint64_t>::max();

// Throws EnumerationTooLarge when `count` exceeds `guard`.
void check_enumeration(const BigInt& count, std::uint64_t guard);

// A subset of {1..n}, members strictly increasing.
class IndexSet {
 public:
  IndexSet() = default;

  // Validates ordering, duplicates and range against n.
  static IndexSet of(std::vector<int> members, int n);

  std::span<const int> members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int element) const;
  int max_element() const { return members_.empty() ? 0 : members_.back(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  explicit IndexSet(std::vector<int> members) : members_(std::move(members)) {}
  std::vector<int> members_;
};

// Lazy lexicographic enumeration of the size-j subsets of {1..n}.
//
//   for (SubsetStream s(n, j); !s.done(); s.advance()) use(s.current());
//
// changed_from() is the first position of current() that differs from the
// previous subset, which lets callers maintain prefix sums incrementally.
class SubsetStream {
 public:
  SubsetStream(int n, int j, std::uint64_t guard = kDefaultEnumerationGuard);

  bool done() const { return done_; }
  std::span<const int> current() const { return members_; }
  IndexSet current_set() const;
  int changed_from() const { return changed_from_; }
  void advance();

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = IndexSet;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(SubsetStream* s) : stream_(s) {}
    IndexSet operator*() const { return stream_->current_set(); }
    iterator& operator++() {
      stream_->advance();
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return stream_->done(); }

   private:
    SubsetStream* stream_ = nullptr;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() { return {}; }

 private:
  int n_;
  int j_;
  std::vector<int> members_;
  int changed_from_ = 0;
  bool done_ = false;
};

inline SubsetStream subsets_of_size(int n, int j, std::uint64_t guard = kDefaultEnumerationGuard) {
  return SubsetStream(n, j, guard);
}

// A block of items sharing the same probability.
template <Real T>
struct ValueClass {
  T value;
  int count;
};

// Validated probability vector over items 1..n.
template <Real T>
class Popularity {
 public:
  static constexpr double kFloatTolerance = 1e-12;

  static Popularity from_values(std::vector<T> values, bool renormalize = false);
  static Popularity uniform(int n);

  int n() const { return static_cast<int>(probs_.size()); }
  const std::vector<T>& probs() const { return probs_; }
  // 1-based access.
  const T& p(int i) const { return probs_[i - 1]; }

  // Distinct probabilities with multiplicities, ascending by value.
  const std::vector<ValueClass<T>>& value_classes() const { return classes_; }
  bool is_uniform() const { return classes_.size() == 1; }

 private:
  explicit Popularity(std::vector<T> probs);
  std::vector<T> probs_;
  std::vector<ValueClass<T>> classes_;
};

template <Real To, Real From>
Popularity<To> convert(const Popularity<From>& pop) {
  std::vector<To> values;
  values.reserve(pop.n());
  for (const From& p : pop.probs()) {
    if constexpr (std::same_as<To, From>) {
      values.push_back(p);
    } else if constexpr (std::same_as<To, double>) {
      values.push_back(to_double(p));
    } else {
      values.push_back(Rational(p));
    }
  }
  // Rounding to double can leave the sum a few ulps off; renormalize.
  return Popularity<To>::from_values(std::move(values), !std::same_as<To, From>);
}

// P_J = sum of p_i over i in J.
template <Real T>
T subset_probability(const Popularity<T>& pop, const IndexSet& subset);

// Random rational popularity with integer weights drawn from [1, max_weight].
Popularity<Rational> random_rational_popularity(int n, std::mt19937_64& rng, int max_weight = 100);

extern template class Popularity<Rational>;
extern template class Popularity<double>;
extern template Rational subset_probability(const Popularity<Rational>&, const IndexSet&);
extern template double subset_probability(const Popularity<double>&, const IndexSet&);

}  // namespace ccp
