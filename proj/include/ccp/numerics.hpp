#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/gmp.hpp>

#include "ccp/errors.hpp"

namespace ccp {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

enum class Backend { Exact, Float };

constexpr std::string_view to_string(Backend b) {
  return b == Backend::Exact ? "exact" : "float";
}

// The two arithmetic backends every computation is instantiated for.
template <class T>
concept Real = std::same_as<T, Rational> || std::same_as<T, double>;

template <Real T>
constexpr Backend backend_of() {
  return std::same_as<T, Rational> ? Backend::Exact : Backend::Float;
}

// ---------------------------------------------------------------------------
// Combinatorial primitives. All three are backed by process-wide caches that
// grow on demand and may be read from several threads at once. Returned
// references stay valid for the lifetime of the process.

// C(a, b) with the conventions: 0 when either argument is negative or b > a,
// 1 when a == b >= 0.
const BigInt& binomial(std::int64_t a, std::int64_t b);

// Stirling number of the second kind S(k, i).
const BigInt& stirling2(std::int64_t k, std::int64_t i);

const BigInt& factorial(std::int64_t m);

// ---------------------------------------------------------------------------
// Backend conversions.

template <Real T>
T from_bigint(const BigInt& v) {
  if constexpr (std::same_as<T, Rational>) {
    return Rational(v);
  } else {
    return v.template convert_to<double>();
  }
}

template <Real T>
T from_int(std::int64_t v) {
  if constexpr (std::same_as<T, Rational>) {
    return Rational(v);
  } else {
    return static_cast<double>(v);
  }
}

template <Real T>
T binomial_as(std::int64_t a, std::int64_t b) {
  return from_bigint<T>(binomial(a, b));
}

inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(double v) { return v; }

inline Rational abs_value(const Rational& v) { return boost::multiprecision::abs(v); }
inline double abs_value(double v) { return std::fabs(v); }

// x^e by repeated multiplication; 0^0 == 1.
template <Real T>
T power(const T& x, int e) {
  T r = from_int<T>(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Neumaier summation for doubles, plain accumulation for rationals.
template <Real T>
class CompensatedSum {
 public:
  void add(const T& x) {
    if constexpr (std::same_as<T, double>) {
      const double t = sum_ + x;
      if (std::fabs(sum_) >= std::fabs(x)) {
        comp_ += (sum_ - t) + x;
      } else {
        comp_ += (x - t) + sum_;
      }
      sum_ = t;
    } else {
      sum_ += x;
    }
  }

  CompensatedSum& operator+=(const T& x) {
    add(x);
    return *this;
  }

  T value() const {
    if constexpr (std::same_as<T, double>) {
      return sum_ + comp_;
    } else {
      return sum_;
    }
  }

 private:
  T sum_ = from_int<T>(0);
  T comp_ = from_int<T>(0);
};

// ---------------------------------------------------------------------------
// Text conversions.

// Accepts "num/den", integers and decimal literals (optionally with an
// exponent); decimals become exact fractions over powers of ten.
Rational parse_rational(std::string_view text);
double parse_double(std::string_view text);

// Shortest round-trip is not what we want here: always 17 significant digits.
std::string format_decimal(double v);

// "num/den" (or "num" for integers).
std::string format_exact(const Rational& v);

// ---------------------------------------------------------------------------
// Scalar: a backend-tagged number for API boundaries such as the CLI, where
// the backend is chosen at run time. Arithmetic between different backends
// throws BackendMismatch.
class Scalar {
 public:
  Scalar() : value_(0.0) {}
  Scalar(Rational v) : value_(std::move(v)) {}
  Scalar(double v) : value_(v) {}

  Backend backend() const {
    return std::holds_alternative<Rational>(value_) ? Backend::Exact : Backend::Float;
  }
  bool is_exact() const { return backend() == Backend::Exact; }

  const Rational& exact() const;
  double to_double() const;

  template <Real T>
  T as() const {
    if constexpr (std::same_as<T, Rational>) {
      return exact();
    } else {
      if (is_exact()) fail(ErrorCode::BackendMismatch, "expected a float scalar");
      return std::get<double>(value_);
    }
  }

  // Exact string for rationals, 17 significant digits for floats.
  std::string to_string() const;
  std::string to_decimal() const { return format_decimal(to_double()); }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, double> value_;
};

}  // namespace ccp
