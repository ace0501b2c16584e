#include <thread>
#include <vector>

#include "doctest.h"

#include "ccp/numerics.hpp"
#include "oracles.hpp"

using namespace ccp;

TEST_CASE("binomial conventions") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 3) == 1);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(4, -1) == 0);
  CHECK(binomial(2, 5) == 0);
  CHECK(binomial(-1, -1) == 0);  // negativity wins over a == b
  CHECK(binomial(-3, 1) == 0);
  CHECK(binomial(100, 50) == BigInt("100891344545564193334812497256"));
}

TEST_CASE("binomial table: Pascal and symmetry") {
  for (int a = 1; a <= 60; ++a) {
    CHECK(binomial(a, 0) == 1);
    CHECK(binomial(a, a) == 1);
    for (int b = 1; b < a; ++b) {
      REQUIRE(binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b));
    }
    for (int b = 0; b <= a; ++b) REQUIRE(binomial(a, b) == binomial(a, a - b));
  }
}

TEST_CASE("binomial cache under concurrent readers") {
  std::vector<std::thread> threads;
  std::vector<int> ok(8, 1);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([t, &ok] {
      for (int a = 200 + t * 10; a >= 0; --a) {
        if (binomial(a, a / 2) != binomial(a, a - a / 2)) ok[t] = 0;
      }
    });
  }
  for (auto& th : threads) th.join();
  for (int v : ok) CHECK(v == 1);
}

TEST_CASE("stirling2 against set-partition enumeration") {
  CHECK(stirling2(4, 2) == 7);
  CHECK(oracle::count_set_partitions(4, 2) == 7);
  CHECK(stirling2(3, 5) == 0);
  for (int k = 0; k <= 20; ++k) CHECK(stirling2(k, k) == 1);
  CHECK(stirling2(5, 0) == 0);
  for (int k = 0; k <= 9; ++k) {
    for (int i = 0; i <= k; ++i) {
      REQUIRE(stirling2(k, i) == oracle::count_set_partitions(k, i));
    }
  }
}

TEST_CASE("stirling/binomial bridge: sum_i S(k,i) C(j,i) i! = j^k") {
  for (int j = 0; j <= 16; ++j) {
    for (int k = 0; k <= j; ++k) {
      BigInt lhs = 0;
      for (int i = 0; i <= j; ++i) lhs += stirling2(k, i) * binomial(j, i) * factorial(i);
      REQUIRE(lhs == boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(k)));
    }
  }
}

TEST_CASE("stirling2 asymptotics: S(k,d) d! / d^k increases towards 1") {
  const int d = 3;
  double previous = 0.0;
  for (int k = 10; k <= 30; ++k) {
    const Rational r(stirling2(k, d) * factorial(d),
                     boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(k)));
    const double v = to_double(r);
    CHECK(v < 1.0);
    CHECK(v > previous);
    previous = v;
  }
  CHECK(previous > 0.99);
}

TEST_CASE("factorial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  BigInt product = 1;
  for (int i = 2; i <= 20; ++i) product *= i;
  CHECK(factorial(20) == product);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK_THROWS_AS(factorial(-1), Error);
}

TEST_CASE("parsing rationals and decimals") {
  CHECK(parse_rational("1/10") == Rational(1, 10));
  CHECK(parse_rational(" 2/10 ") == Rational(1, 5));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("010/0020") == Rational(1, 2));
  CHECK(parse_rational("000") == 0);
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("1/2/3"), Error);
  CHECK(parse_double("0.25") == 0.25);
  CHECK(parse_double("1/4") == 0.25);
  CHECK_THROWS_AS(parse_double("0.2x"), Error);
}

TEST_CASE("formatting") {
  CHECK(format_exact(Rational(2, 9)) == "2/9");
  CHECK(format_exact(Rational(4, 2)) == "2");
  CHECK(format_decimal(0.1) == "0.10000000000000001");
  CHECK(format_decimal(2.0 / 9.0) == "0.22222222222222221");
}

TEST_CASE("Scalar keeps backends apart") {
  const Scalar a(Rational(1, 3));
  const Scalar b(Rational(1, 6));
  CHECK((a + b).to_string() == "1/2");
  CHECK((a * b).exact() == Rational(1, 18));
  CHECK((a - b) == Scalar(Rational(1, 6)));
  CHECK((a / b).to_string() == "2");
  const Scalar f(0.5);
  CHECK_FALSE(f.is_exact());
  CHECK((f + Scalar(0.25)).to_double() == 0.75);
  try {
    (void)(a + f);
    FAIL("mixing backends must throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackendMismatch);
  }
  CHECK_THROWS_AS((void)f.exact(), Error);
}

TEST_CASE("rational values stay in lowest terms") {
  const Rational r = parse_rational("6/8");
  CHECK(boost::multiprecision::numerator(r) == 3);
  CHECK(boost::multiprecision::denominator(r) == 4);
  const Rational neg = parse_rational("3/-6");
  CHECK(boost::multiprecision::denominator(neg) > 0);
  CHECK(neg == Rational(-1, 2));
}

TEST_CASE("compensated summation beats naive accumulation") {
  CompensatedSum<double> acc;
  double naive = 0.0;
  acc += 1.0;
  naive += 1.0;
  for (int i = 0; i < 1000000; ++i) {
    acc += 1e-16;
    naive += 1e-16;
  }
  CHECK(naive == 1.0);
  CHECK(acc.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-12));
}
