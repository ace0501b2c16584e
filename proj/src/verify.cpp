#include "ccp/verify.hpp"

#include <functional>
#include <random>

#include "ccp/decomposition.hpp"
#include "ccp/power_sums.hpp"
#include "ccp/simulator.hpp"
#include "ccp/waiting_time.hpp"

namespace ccp {

namespace {

using Pop = Popularity<Rational>;

std::string show(const Rational& v) { return format_exact(v); }
std::string show(const BigInt& v) { return v.str(); }

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  template <class A, class B>
  void expect_equal(const std::string& identity, const std::function<std::string()>& inputs,
                    const A& lhs, const B& rhs) {
    ++result_.checks;
    if (lhs == rhs) return;
    ++result_.failed;
    if (result_.failures.size() < kMaxRecordedFailures) {
      result_.failures.push_back({identity, inputs(), show(lhs), show(rhs)});
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

std::string describe(const Pop& pop) {
  std::string out = "p=(";
  for (int i = 1; i <= pop.n(); ++i) {
    if (i > 1) out += ",";
    out += format_exact(pop.p(i));
  }
  return out + ")";
}

std::string args(std::initializer_list<std::pair<const char*, long long>> named) {
  std::string out;
  for (const auto& [name, value] : named) {
    if (!out.empty()) out += " ";
    out += std::string(name) + "=" + std::to_string(value);
  }
  return out;
}

std::function<std::string()> inputs(const Pop& pop,
                                    std::initializer_list<std::pair<const char*, long long>> named) {
  std::string a = args(named);
  return [&pop, a] { return a + " " + describe(pop); };
}

std::function<std::string()> inputs(std::initializer_list<std::pair<const char*, long long>> named) {
  std::string a = args(named);
  return [a] { return a; };
}

// The random test popularities, shared by every suite.
class Grid {
 public:
  explicit Grid(const VerifyOptions& opts) : opts_(opts) {
    for (int n = 2; n <= opts.n_max; ++n) {
      std::mt19937_64 rng(derive_seed(opts.seed, static_cast<std::uint64_t>(n)));
      auto& list = pops_.emplace_back();
      for (int t = 0; t < opts.trials; ++t) list.push_back(random_rational_popularity(n, rng));
    }
  }

  template <class F>
  void each(int n_min, F&& f) const {
    for (int n = std::max(2, n_min); n <= opts_.n_max; ++n) {
      for (const auto& pop : pops_[n - 2]) f(pop);
    }
  }

 private:
  VerifyOptions opts_;
  std::vector<std::vector<Pop>> pops_;
};

// power_sum_bruteforce(pop, j, k) for every j and k <= k_max.
std::vector<std::vector<Rational>> brute_table(const Pop& pop, int k_max) {
  std::vector<std::vector<Rational>> s(pop.n() + 1);
  for (int j = 0; j <= pop.n(); ++j) {
    for (int k = 0; k <= k_max; ++k) s[j].push_back(power_sum_bruteforce(pop, j, k));
  }
  return s;
}

SuiteResult alternating_binomial(const VerifyOptions& opts) {
  Suite suite("alternating-binomial");
  for (int n = 1; n <= opts.grid_n_max; ++n) {
    for (int c = 1; c <= n; ++c) {
      for (int k = 0; k < c; ++k) {
        for (int u = 0; u <= k; ++u) {
          suite.expect_equal("alternating binomial sum is 1 at u=k, else 0",
                             inputs({{"n", n}, {"c", c}, {"k", k}, {"u", u}}),
                             identity_appendix1(n, c, k, u), BigInt(u == k ? 1 : 0));
        }
      }
    }
  }
  return suite.take();
}

SuiteResult first_power(const Grid& grid) {
  Suite suite("first-power-sum");
  grid.each(2, [&](const Pop& pop) {
    const int n = pop.n();
    for (int j = 0; j <= n; ++j) {
      const Rational s = power_sum_bruteforce(pop, j, 1);
      suite.expect_equal("sum P_J over |J|=j equals C(n-1,j-1)", inputs(pop, {{"j", j}}), s,
                         Rational(relation1_closed(n, j)));
    }
  });
  return suite.take();
}

SuiteResult excluded_first_power(const Grid& grid) {
  Suite suite("excluded-first-power-sum");
  grid.each(2, [&](const Pop& pop) {
    for (int l = 1; l <= pop.n(); ++l) {
      for (int j = 1; j <= pop.n() - 1; ++j) {
        suite.expect_equal("closed form of sum P_J over |J|=j, l not in J",
                           inputs(pop, {{"l", l}, {"j", j}}), relation2_closed(pop, l, j),
                           power_sum_conditioned(pop, l, j, 1, Membership::Exclude));
      }
    }
  });
  return suite.take();
}

// sum_l p_l * (sum over |J|=j, l not in J of P_J^k) = S(j,k) - S(j,k+1), and
// sum_l p_l * (sum over |J|=j, l in J of P_J^k) = S(j,k+1).
SuiteResult recursions(const Grid& grid, bool included) {
  Suite suite(included ? "included-power-recursion" : "excluded-power-recursion");
  constexpr int kMax = 3;
  grid.each(2, [&](const Pop& pop) {
    const auto s = brute_table(pop, kMax + 1);
    const Membership mode = included ? Membership::Include : Membership::Exclude;
    for (int j = included ? 1 : 0; j <= pop.n(); ++j) {
      for (int k = 0; k <= kMax; ++k) {
        Rational acc = 0;
        for (int l = 1; l <= pop.n(); ++l) acc += pop.p(l) * power_sum_conditioned(pop, l, j, k, mode);
        const Rational expected = included ? s[j][k + 1] : Rational(s[j][k] - s[j][k + 1]);
        suite.expect_equal(included ? "sum_l p_l S_l+(j,k) = S(j,k+1)"
                                    : "sum_l p_l S_l-(j,k) = S(j,k) - S(j,k+1)",
                           inputs(pop, {{"j", j}, {"k", k}}), acc, expected);
      }
    }
  });
  return suite.take();
}

SuiteResult second_power(const Grid& grid, const VerifyOptions& opts) {
  Suite suite("second-power-sum");
  grid.each(2, [&](const Pop& pop) {
    for (int j = 0; j <= pop.n(); ++j) {
      suite.expect_equal("closed form of sum P_J^2", inputs(pop, {{"j", j}}),
                         relation4_closed(pop, j), power_sum_bruteforce(pop, j, 2));
    }
  });
  for (int n = 2; n <= opts.grid_n_max; ++n) {
    const auto u = Pop::uniform(n);
    for (int j = 0; j <= n; ++j) {
      const Rational r(j, n);
      suite.expect_equal("uniform: sum P_J^2 = C(n,j)(j/n)^2", inputs({{"n", n}, {"j", j}}),
                         relation4_closed(u, j), Rational(binomial(n, j) * r * r));
    }
  }
  return suite.take();
}

SuiteResult first_minus_second(const Grid& grid) {
  Suite suite("first-minus-second-power");
  grid.each(2, [&](const Pop& pop) {
    const int n = pop.n();
    const Rational s2 = moment(pop, 2);
    for (int j = 0; j <= n; ++j) {
      suite.expect_equal("S(j,1) - S(j,2) = C(n-2,j-1)(1 - sum p^2)", inputs(pop, {{"j", j}}),
                         Rational(power_sum_bruteforce(pop, j, 1) - power_sum_bruteforce(pop, j, 2)),
                         Rational(Rational(binomial(n - 2, j - 1)) * (1 - s2)));
    }
  });
  return suite.take();
}

SuiteResult included_second_power(const Grid& grid) {
  Suite suite("included-second-power-sum");
  grid.each(3, [&](const Pop& pop) {
    for (int l = 1; l <= pop.n(); ++l) {
      for (int j = 1; j <= pop.n(); ++j) {
        suite.expect_equal("closed form of sum P_J^2 over |J|=j, l in J",
                           inputs(pop, {{"l", l}, {"j", j}}), relation6_closed(pop, l, j),
                           power_sum_conditioned(pop, l, j, 2, Membership::Include));
      }
    }
  });
  return suite.take();
}

SuiteResult third_power(const Grid& grid, const VerifyOptions& opts) {
  Suite suite("third-power-sum");
  grid.each(3, [&](const Pop& pop) {
    for (int j = 0; j <= pop.n(); ++j) {
      suite.expect_equal("closed form of sum P_J^3", inputs(pop, {{"j", j}}),
                         relation7_closed(pop, j), power_sum_bruteforce(pop, j, 3));
    }
  });
  for (int n = 3; n <= opts.grid_n_max; ++n) {
    const auto u = Pop::uniform(n);
    for (int j = 0; j <= n; ++j) {
      const Rational r(j, n);
      suite.expect_equal("uniform: sum P_J^3 = C(n,j)(j/n)^3", inputs({{"n", n}, {"j", j}}),
                         relation7_closed(u, j), Rational(binomial(n, j) * r * r * r));
    }
  }
  return suite.take();
}

SuiteResult alpha_decomposition(const Grid& grid) {
  Suite suite("alpha-decomposition");
  grid.each(2, [&](const Pop& pop) {
    const SmallSumCache<Rational> cache(pop);
    for (int k = 1; k < pop.n(); ++k) {
      const auto table = alpha_general(cache, k);
      suite.expect_equal("alpha_{k,k} = 1", inputs(pop, {{"k", k}}), table.weight(k), Rational(1));
      for (int j = 0; j <= pop.n(); ++j) {
        suite.expect_equal("sum_u C(n-k,j-u) alpha_{k,u} = S(j,k)",
                           inputs(pop, {{"j", j}, {"k", k}}), theorem1_eval(table, j),
                           power_sum_bruteforce(pop, j, k));
      }
    }
  });
  return suite.take();
}

SuiteResult alternating_power(const Grid& grid) {
  Suite suite("alternating-power-sum");
  grid.each(2, [&](const Pop& pop) {
    for (int k = 0; k < pop.n(); ++k) {
      suite.expect_equal("sum_j (-1)^j S(j,k) = 0 for k < n", inputs(pop, {{"k", k}}),
                         corollary1_sum(pop, k), Rational(0));
    }
  });
  return suite.take();
}

SuiteResult ccdf_below_c(const Grid& grid) {
  Suite suite("ccdf-below-c");
  const EvalOptions brute{SumStrategy::BruteForce};
  grid.each(2, [&](const Pop& pop) {
    for (int c = 1; c <= pop.n(); ++c) {
      for (int k = 0; k < c; ++k) {
        suite.expect_equal("Pr[T_c > k] = 1 for k < c", inputs(pop, {{"c", c}, {"k", k}}),
                           ccdf(pop, c, k, brute), Rational(1));
        suite.expect_equal("Pr[T_c = k] = 0 for k < c", inputs(pop, {{"c", c}, {"k", k}}),
                           pdf(pop, c, k, brute), Rational(0));
      }
    }
  });
  return suite.take();
}

SuiteResult alpha_uniform_general(const VerifyOptions& opts) {
  Suite suite("alpha-uniform-vs-general");
  const int n_top = std::max(opts.n_max, 12);
  for (int n = 2; n <= n_top; ++n) {
    const SmallSumCache<Rational> cache(Pop::uniform(n));
    for (int k = 1; k < n; ++k) {
      const auto general = alpha_general(cache, k);
      const auto uniform = alpha_uniform<Rational>(n, k);
      for (int u = 1; u <= k; ++u) {
        suite.expect_equal("uniform alpha equals general alpha of uniform(n)",
                           inputs({{"n", n}, {"k", k}, {"u", u}}), uniform.weight(u),
                           general.weight(u));
      }
    }
  }
  for (int n = 4; n <= n_top; ++n) {
    const Rational nn(n);
    const auto a3 = alpha_uniform<Rational>(n, 3);
    suite.expect_equal("uniform alpha_{3,2} = (3n-1)/n^2", inputs({{"n", n}}), a3.weight(2),
                       Rational((3 * nn - 1) / (nn * nn)));
    if (n > 4) {
      const auto a4 = alpha_uniform<Rational>(n, 4);
      suite.expect_equal("uniform alpha_{4,2} = (7n-4)/n^3", inputs({{"n", n}}), a4.weight(2),
                         Rational((7 * nn - 4) / (nn * nn * nn)));
      suite.expect_equal("uniform alpha_{4,3} = (6n^2-4n+1)/n^3", inputs({{"n", n}}), a4.weight(3),
                         Rational((6 * nn * nn - 4 * nn + 1) / (nn * nn * nn)));
    }
  }
  return suite.take();
}

SuiteResult eta_partition(const Grid& grid) {
  Suite suite("eta-partition");
  grid.each(3, [&](const Pop& pop) {
    const int n = pop.n();
    const SmallSumCache<Rational> cache(pop);
    for (int k = 1; k < n; ++k) {
      const auto small = cache.small_sums(k);
      for (int j = 0; j <= n; ++j) {
        Rational combo = 0;
        for (int q = 1; q <= k; ++q) combo += Rational(eta(n, k, j, q)) * (*small)[q - 1];
        suite.expect_equal("sum_q eta_{k,j}(q) S(q,k) = S(j,k)", inputs(pop, {{"j", j}, {"k", k}}),
                           combo, power_sum_bruteforce(pop, j, k));
      }
    }
  });
  return suite.take();
}

SuiteResult fast_vs_brute(const Grid& grid) {
  Suite suite("fast-vs-brute");
  grid.each(3, [&](const Pop& pop) {
    const SmallSumCache<Rational> cache(pop);
    for (int k = 1; k < pop.n(); ++k) {
      for (int j = k + 1; j <= pop.n(); ++j) {
        suite.expect_equal("fast path equals enumeration", inputs(pop, {{"j", j}, {"k", k}}),
                           power_sum_fast(cache, j, k), power_sum_bruteforce(pop, j, k));
      }
    }
  });
  return suite.take();
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& s : suites) {
    if (!s.passed()) return false;
  }
  return true;
}

std::vector<std::string> verify_suite_names() {
  return {"alternating-binomial",      "first-power-sum",          "excluded-first-power-sum",
          "excluded-power-recursion",  "included-power-recursion", "second-power-sum",
          "first-minus-second-power",  "included-second-power-sum", "third-power-sum",
          "alpha-decomposition",       "alternating-power-sum",    "ccdf-below-c",
          "alpha-uniform-vs-general",  "eta-partition",            "fast-vs-brute"};
}

VerifyReport verify_identities(const VerifyOptions& opts) {
  if (opts.n_max < 2) fail(ErrorCode::RangeError, "verify needs n-max >= 2");
  if (opts.trials < 1) fail(ErrorCode::RangeError, "verify needs at least one trial");
  if (opts.grid_n_max < 1) fail(ErrorCode::RangeError, "verify needs a grid bound >= 1");
  const Grid grid(opts);
  VerifyReport report;
  report.options = opts;
  report.suites.push_back(alternating_binomial(opts));
  report.suites.push_back(first_power(grid));
  report.suites.push_back(excluded_first_power(grid));
  report.suites.push_back(recursions(grid, false));
  report.suites.push_back(recursions(grid, true));
  report.suites.push_back(second_power(grid, opts));
  report.suites.push_back(first_minus_second(grid));
  report.suites.push_back(included_second_power(grid));
  report.suites.push_back(third_power(grid, opts));
  report.suites.push_back(alpha_decomposition(grid));
  report.suites.push_back(alternating_power(grid));
  report.suites.push_back(ccdf_below_c(grid));
  report.suites.push_back(alpha_uniform_general(opts));
  report.suites.push_back(eta_partition(grid));
  report.suites.push_back(fast_vs_brute(grid));
  return report;
}

}  // namespace ccp
