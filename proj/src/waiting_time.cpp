#include "ccp/waiting_time.hpp"

#include <string>

namespace ccp {

namespace {

int sign(int e) { return e % 2 == 0 ? 1 : -1; }

void require_collection(int n, int c) {
  if (c < 1 || c > n) {
    fail(ErrorCode::RangeError,
         "collection size c=" + std::to_string(c) + " outside [1.." + std::to_string(n) + "]");
  }
}

void require_trials(int k) {
  if (k < 0) fail(ErrorCode::RangeError, "trial count k=" + std::to_string(k) + " is negative");
}

// Whether the Auto strategy should route size-j sums at exponent k through
// the small-sum decomposition rather than enumerating.
template <Real T>
bool prefer_fast_path(const Popularity<T>& pop, int j, int k) {
  if (k < 1 || j <= k || k >= pop.n()) return false;
  BigInt fast_cost = 0;
  for (int q = 1; q <= k; ++q) fast_cost += value_class_compositions(pop, q);
  return value_class_compositions(pop, j) > fast_cost;
}

}  // namespace

template <Real T>
std::vector<T> ccdf_terms(const Popularity<T>& pop, int c, int k, const EvalOptions& opts) {
  const int n = pop.n();
  require_collection(n, c);
  require_trials(k);
  SmallSumCache<T> cache(pop, opts.guard);
  std::vector<T> terms;
  terms.reserve(c);
  for (int j = 0; j < c; ++j) {
    const T inner = opts.strategy == SumStrategy::BruteForce
                        ? power_sum_bruteforce(pop, j, k, opts.guard)
                        : power_sum(cache, j, k);
    terms.push_back(from_int<T>(sign(c - 1 - j)) * binomial_as<T>(n - j - 1, n - c) * inner);
  }
  return terms;
}

template <Real T>
Evaluation<T> ccdf_evaluation(const Popularity<T>& pop, int c, int k, const EvalOptions& opts) {
  const auto terms = ccdf_terms(pop, c, k, opts);
  CompensatedSum<T> acc;
  ConditionEstimate cond;
  for (const T& t : terms) {
    acc += t;
    cond.observe(t);
  }
  Evaluation<T> result{acc.value(), 1.0};
  if constexpr (std::same_as<T, double>) result.condition = cond.finish(result.value);
  return result;
}

template <Real T>
T ccdf(const Popularity<T>& pop, int c, int k, const EvalOptions& opts) {
  return ccdf_evaluation(pop, c, k, opts).value;
}

template <Real T>
T cdf(const Popularity<T>& pop, int c, int k, const EvalOptions& opts) {
  return from_int<T>(1) - ccdf(pop, c, k, opts);
}

template <Real T>
T pdf(const Popularity<T>& pop, int c, int k, const EvalOptions& opts) {
  const int n = pop.n();
  require_collection(n, c);
  require_trials(k);
  if (k == 0) return from_int<T>(0);
  const T one = from_int<T>(1);
  auto term = [k, &one](const T& p) -> T { return power(p, k - 1) * (one - p); };

  SmallSumCache<T> cache(pop, opts.guard);
  CompensatedSum<T> acc;
  for (int j = 0; j < c; ++j) {
    T inner;
    if (opts.strategy == SumStrategy::BruteForce) {
      inner = sum_over_subsets<T>(std::span<const T>(pop.probs()), j, from_int<T>(0), term,
                                  opts.guard);
    } else if (k >= 2 && prefer_fast_path(pop, j, k)) {
      inner = power_sum_fast(cache, j, k - 1) - power_sum_fast(cache, j, k);
    } else {
      inner = sum_over_size(pop, j, term, opts.guard);
    }
    acc += from_int<T>(sign(c - 1 - j)) * binomial_as<T>(n - j - 1, n - c) * inner;
  }
  return acc.value();
}

Rational pdf_uniform(int n, int c, int k) {
  if (n < 2) fail(ErrorCode::RangeError, "uniform popularity needs n >= 2");
  require_collection(n, c);
  require_trials(k);
  if (k == 0) return Rational(0);
  const BigInt num = factorial(n) * stirling2(k - 1, c - 1);
  const BigInt den =
      factorial(n - c) * boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
  return Rational(num, den);
}

template <Real T>
T min_time_probability(const Popularity<T>& pop, int c, std::uint64_t guard) {
  const int n = pop.n();
  require_collection(n, c);
  SubsetStream stream(n, c, guard);
  std::vector<T> prefix(c + 1, from_int<T>(1));
  for (int t = 0; t < c; ++t) prefix[t + 1] = prefix[t] * pop.p(stream.current()[t]);
  CompensatedSum<T> acc;
  while (true) {
    acc += prefix[c];
    stream.advance();
    if (stream.done()) break;
    const auto members = stream.current();
    for (int t = stream.changed_from(); t < c; ++t) prefix[t + 1] = prefix[t] * pop.p(members[t]);
  }
  return from_bigint<T>(factorial(c)) * acc.value();
}

template <Real T>
T expectation(const Popularity<T>& pop, int c, std::uint64_t guard) {
  const int n = pop.n();
  require_collection(n, c);
  const T one = from_int<T>(1);
  CompensatedSum<T> acc;
  for (int j = 0; j < c; ++j) {
    const T inner = sum_over_size(pop, j, [&one](const T& p) { return T(one / (one - p)); }, guard);
    acc += from_int<T>(sign(c - 1 - j)) * binomial_as<T>(n - j - 1, n - c) * inner;
  }
  return acc.value();
}

BigInt identity_appendix1(int n, int c, int k, int u) {
  if (!(0 <= u && u <= k && k < c && c <= n)) {
    fail(ErrorCode::RangeError, "identity needs 0 <= u <= k < c <= n");
  }
  BigInt acc = 0;
  for (int i = 0; i < c; ++i) {
    acc += sign(c - 1 - i) * binomial(n - i - 1, n - c) * binomial(n - k, i - u);
  }
  return acc;
}

template <Real T>
WaitingTimeTable<T> waiting_time_table(const Popularity<T>& pop, int c, int k_max,
                                       const EvalOptions& opts) {
  require_collection(pop.n(), c);
  require_trials(k_max);
  WaitingTimeTable<T> table;
  table.c = c;
  table.rows.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    const auto tail = ccdf_evaluation(pop, c, k, opts);
    table.condition = std::max(table.condition, tail.condition);
    table.rows.push_back({k, pdf(pop, c, k, opts), from_int<T>(1) - tail.value, tail.value});
  }
  return table;
}

#define CCP_WAITING_TIME_INSTANTIATE(T)                                                        \
  template T pdf(const Popularity<T>&, int, int, const EvalOptions&);                          \
  template T cdf(const Popularity<T>&, int, int, const EvalOptions&);                          \
  template T ccdf(const Popularity<T>&, int, int, const EvalOptions&);                         \
  template Evaluation<T> ccdf_evaluation(const Popularity<T>&, int, int, const EvalOptions&);  \
  template std::vector<T> ccdf_terms(const Popularity<T>&, int, int, const EvalOptions&);      \
  template T min_time_probability(const Popularity<T>&, int, std::uint64_t);                  \
  template T expectation(const Popularity<T>&, int, std::uint64_t);                            \
  template WaitingTimeTable<T> waiting_time_table(const Popularity<T>&, int, int,              \
                                                  const EvalOptions&);

CCP_WAITING_TIME_INSTANTIATE(Rational)
CCP_WAITING_TIME_INSTANTIATE(double)

}  // namespace ccp
