#include <random>
#include <thread>
#include <vector>

#include "doctest.h"

#include "ccp/decomposition.hpp"
#include "oracles.hpp"

using namespace ccp;

namespace {

Popularity<Rational> pop1234() {
  return Popularity<Rational>::from_values(
      {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)});
}

std::vector<Popularity<Rational>> random_pops(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 1000 + static_cast<std::uint64_t>(n));
  std::vector<Popularity<Rational>> pops;
  for (int i = 0; i < count; ++i) pops.push_back(random_rational_popularity(n, rng));
  return pops;
}

}  // namespace

TEST_CASE("alpha_general closed-form entries") {
  for (int n = 2; n <= 7; ++n) {
    for (const auto& p : random_pops(n, 3, 1)) {
      CHECK(alpha_general(p, 1).weight(1) == 1);
      for (int k = 2; k < n; ++k) {
        const auto table = alpha_general(p, k);
        REQUIRE(table.weights.size() == static_cast<std::size_t>(k));
        CHECK(table.weight(1) == moment(p, k));
        CHECK(table.weight(k) == 1);
        Rational tail = k - n;
        for (const auto& x : p.probs()) tail += power(Rational(1 - x), k);
        CHECK(table.weight(k - 1) == tail);
      }
    }
  }
  CHECK_THROWS_AS(alpha_general(pop1234(), 4), Error);
  CHECK_THROWS_AS(alpha_general(pop1234(), 0), Error);
}

TEST_CASE("alpha_uniform spot values") {
  CHECK(alpha_uniform<Rational>(4, 3).weight(2) == Rational(11, 16));
  for (int n = 5; n <= 12; ++n) {
    const auto t3 = alpha_uniform<Rational>(n, 3);
    CHECK(t3.weight(2) == Rational(3 * n - 1, n * n));
    const auto t4 = alpha_uniform<Rational>(n, 4);
    CHECK(t4.weight(2) == Rational(7 * n - 4, n * n * n));
    CHECK(t4.weight(3) == Rational(6 * n * n - 4 * n + 1, n * n * n));
    for (int k = 1; k < n; ++k) {
      const auto t = alpha_uniform<Rational>(n, k);
      CHECK(t.weight(1) ==
            Rational(1, boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k - 1))));
      CHECK(t.weight(k) == 1);
    }
  }
  CHECK_THROWS_AS(alpha_uniform<Rational>(4, 4), Error);
}

TEST_CASE("alpha decomposition evaluation") {
  const auto pop = pop1234();
  const auto t2 = alpha_general(pop, 2);
  CHECK(theorem1_eval(t2, 2) == Rational(160, 100));
  CHECK(theorem1_eval(t2, 4) == 1);
  CHECK(theorem1_eval(t2, 0) == 0);
  CHECK_THROWS_AS(theorem1_eval(t2, 5), Error);
  for (int n = 2; n <= 7; ++n) {
    for (const auto& p : random_pops(n, 3, 2)) {
      for (int k = 1; k < n; ++k) {
        const auto table = alpha_general(p, k);
        for (int j = 0; j <= n; ++j) {
          REQUIRE(theorem1_eval(table, j) == oracle::power_sum_bitmask(p.probs(), j, k));
        }
      }
    }
  }
}

TEST_CASE("general and uniform alpha agree on uniform popularities") {
  for (int n = 2; n <= 9; ++n) {
    const auto u = Popularity<Rational>::uniform(n);
    for (int k = 1; k < n; ++k) {
      REQUIRE(alpha_general(u, k).weights == alpha_uniform<Rational>(n, k).weights);
    }
  }
}

TEST_CASE("eta special cases and closed form") {
  for (int n = 2; n <= 14; ++n) {
    for (int k = 1; k < n; ++k) {
      for (int q = 1; q <= k; ++q) {
        CHECK(eta(n, k, k, q) == (q == k ? 1 : 0));
        for (int j = 0; j <= n; ++j) {
          REQUIRE(eta(n, k, j, q) == oracle::eta_by_sum(n, k, j, q));
          if (j == q) REQUIRE(eta(n, k, j, q) == 1);
          if (j < q) REQUIRE(eta(n, k, j, q) == 0);
        }
      }
    }
  }
  CHECK_THROWS_AS(eta(5, 5, 5, 1), Error);
  CHECK_THROWS_AS(eta(5, 3, 4, 4), Error);
}

TEST_CASE("eta partition property") {
  for (int n = 3; n <= 8; ++n) {
    for (const auto& p : random_pops(n, 2, 3)) {
      for (int k = 1; k < n; ++k) {
        for (int j = 0; j <= n; ++j) {
          Rational combo = 0;
          for (int q = 1; q <= k; ++q) combo += Rational(eta(n, k, j, q)) * power_sum_bruteforce(p, q, k);
          REQUIRE(combo == power_sum_bruteforce(p, j, k));
        }
      }
    }
  }
}

TEST_CASE("fast path") {
  const auto five = Popularity<Rational>::from_values(
      {Rational(10, 100), Rational(15, 100), Rational(20, 100), Rational(25, 100), Rational(30, 100)});
  // complements of singletons: 0.81 + 0.7225 + 0.64 + 0.5625 + 0.49
  CHECK(oracle::power_sum_bitmask(five.probs(), 4, 2) == Rational(3225, 1000));
  CHECK(power_sum_fast(five, 4, 2) == Rational(3225, 1000));
  CHECK_THROWS_AS(power_sum_fast(five, 2, 2), Error);
  CHECK_THROWS_AS(power_sum_fast(five, 1, 2), Error);

  for (int n = 3; n <= 10; ++n) {
    const auto u = Popularity<Rational>::uniform(n);
    for (int k = 1; k < n; ++k) {
      for (int j = k + 1; j <= n; ++j) {
        const Rational expected =
            Rational(binomial(n, j)) *
            Rational(boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(k)),
                     boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k)));
        REQUIRE(power_sum_fast(u, j, k) == expected);
      }
    }
  }
  for (int n = 3; n <= 8; ++n) {
    for (const auto& p : random_pops(n, 3, 4)) {
      SmallSumCache<Rational> cache(p);
      for (int k = 1; k < n; ++k) {
        for (int j = k + 1; j <= n; ++j) {
          REQUIRE(power_sum_fast(cache, j, k) == power_sum_bruteforce(p, j, k));
        }
      }
    }
  }
}

TEST_CASE("power_sum auto-selection agrees with brute force") {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& p : random_pops(n, 2, 5)) {
      SmallSumCache<Rational> cache(p);
      for (int k = 0; k <= n + 1; ++k) {
        for (int j = 0; j <= n; ++j) REQUIRE(power_sum(cache, j, k) == power_sum_bruteforce(p, j, k));
      }
    }
  }
}

TEST_CASE("float fast path at n = 20") {
  std::mt19937_64 rng(17);
  std::vector<double> w(20);
  double total = 0;
  for (auto& x : w) total += (x = 1.0 + static_cast<double>(rng() % 1000));
  for (auto& x : w) x /= total;
  const auto pop = Popularity<double>::from_values(w);
  SmallSumCache<double> cache(pop);
  for (int k : {2, 3}) {
    for (int j : {10, 15, 19}) {
      const double brute = power_sum_bruteforce(pop, j, k);
      CHECK(power_sum_fast(cache, j, k) == doctest::Approx(brute).epsilon(1e-10));
    }
  }
}

TEST_CASE("subset count ratio") {
  const Rational r = subset_count_ratio(100, 50, 5);
  CHECK(r == Rational(binomial(100, 50), BigInt(79375495)));
  CHECK(to_double(r) == doctest::Approx(1.27106e21).epsilon(5e-6));
}

TEST_CASE("alternating power sums vanish below n") {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& p : random_pops(n, 5, 6)) {
      for (int k = 0; k < n; ++k) REQUIRE(corollary1_sum(p, k) == 0);
    }
  }
  const auto p = Popularity<Rational>::from_values({Rational(2, 10), Rational(3, 10), Rational(5, 10)});
  CHECK(corollary1_sum(p, 2) == 0);
  CHECK(corollary1_sum(p, 0) == 0);
  CHECK(corollary1_sum(Popularity<Rational>::uniform(5), 4) == 0);
  BigInt classic = 0;
  for (int j = 0; j <= 5; ++j) classic += (j % 2 ? -1 : 1) * binomial(5, j) * BigInt(j * j * j * j);
  CHECK(classic == 0);
  CHECK_THROWS_AS(corollary1_sum(p, 3), Error);
  // the identity really fails at k = n
  CHECK(power_sum_bruteforce(p, 3, 3) - power_sum_bruteforce(p, 2, 3) + power_sum_bruteforce(p, 1, 3) != 0);
}

TEST_CASE("float alpha tables carry a condition estimate") {
  const auto u = Popularity<double>::uniform(40);
  const auto table = alpha_general(u, 25);
  CHECK(table.condition > 1.0);
  CHECK(table.weight(25) == doctest::Approx(1.0).epsilon(1e-3 + table.condition * 1e-16 * 64));
  const auto exact = alpha_general(Popularity<Rational>::uniform(6), 3);
  CHECK(exact.condition == 1.0);
  CHECK_FALSE(exact.cancellation_warning());
}

TEST_CASE("small-sum cache shared between threads") {
  const auto p = random_pops(8, 1, 7).front();
  SmallSumCache<Rational> cache(p);
  std::vector<std::thread> threads;
  std::vector<int> ok(6, 1);
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&, t] {
      for (int k = 1; k < 8; ++k) {
        if (theorem1_eval(alpha_general(cache, k), 8) != 1) ok[t] = 0;
      }
    });
  }
  for (auto& th : threads) th.join();
  for (int v : ok) CHECK(v == 1);
  CHECK(cache.small_sums(3).get() == cache.small_sums(3).get());
}
