#include "ccp/numerics.hpp"

#include <cctype>
#include <charconv>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace ccp {

namespace {

const BigInt kZero{0};

// Lazily grown triangular table, rows[r] holding entries 0..r. Rows live in
// a deque so references handed out remain stable while the table grows.
class TriangularCache {
 public:
  using RowBuilder = void (*)(const std::deque<std::vector<BigInt>>&, std::vector<BigInt>&,
                              std::int64_t);

  explicit TriangularCache(RowBuilder build) : build_(build) {}

  const BigInt& get(std::int64_t row, std::int64_t col) {
    {
      std::shared_lock lock(mutex_);
      if (row < static_cast<std::int64_t>(rows_.size())) return rows_[row][col];
    }
    std::unique_lock lock(mutex_);
    while (static_cast<std::int64_t>(rows_.size()) <= row) {
      const auto r = static_cast<std::int64_t>(rows_.size());
      std::vector<BigInt> next(r + 1);
      build_(rows_, next, r);
      rows_.push_back(std::move(next));
    }
    return rows_[row][col];
  }

 private:
  RowBuilder build_;
  std::shared_mutex mutex_;
  std::deque<std::vector<BigInt>> rows_;
};

void pascal_row(const std::deque<std::vector<BigInt>>& rows, std::vector<BigInt>& next,
                std::int64_t r) {
  next[0] = 1;
  next[r] = 1;
  for (std::int64_t b = 1; b < r; ++b) next[b] = rows[r - 1][b - 1] + rows[r - 1][b];
}

void stirling_row(const std::deque<std::vector<BigInt>>& rows, std::vector<BigInt>& next,
                  std::int64_t k) {
  if (k == 0) {
    next[0] = 1;
    return;
  }
  next[0] = 0;
  next[k] = 1;
  for (std::int64_t i = 1; i < k; ++i) next[i] = i * rows[k - 1][i] + rows[k - 1][i - 1];
}

TriangularCache& pascal_cache() {
  static TriangularCache cache(pascal_row);
  return cache;
}

TriangularCache& stirling_cache() {
  static TriangularCache cache(stirling_row);
  return cache;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_failure(std::string_view text) {
  fail(ErrorCode::ParseError, "cannot parse number '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  std::int64_t scale = 0;
  bool seen_point = false;
  std::size_t pos = 0;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) parse_failure(text);
  // mpz string parsing treats a leading 0 as an octal prefix
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') parse_failure(text);
    std::string_view exp = s.substr(pos + 1);
    if (!exp.empty() && exp.front() == '+') exp.remove_prefix(1);
    int e = 0;
    auto [end, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), e);
    if (ec != std::errc() || end != exp.data() + exp.size()) parse_failure(text);
    scale -= e;
  }
  BigInt num(digits);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(scale)));
  Rational r = scale >= 0 ? Rational(num, ten_pow) : Rational(num * ten_pow);
  return negative ? Rational(-r) : r;
}

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::string_view s = trim(text);
  std::string_view body = s;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
  if (body.empty()) parse_failure(whole);
  for (char ch : body) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) parse_failure(whole);
  }
  const bool negative = s.front() == '-';
  body.remove_prefix(std::min(body.find_first_not_of('0'), body.size() - 1));
  BigInt v(std::string{body});
  return negative ? BigInt(-v) : v;
}

}  // namespace

const BigInt& binomial(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0 || b > a) return kZero;
  return pascal_cache().get(a, b);
}

const BigInt& stirling2(std::int64_t k, std::int64_t i) {
  if (k < 0 || i < 0 || i > k) return kZero;
  return stirling_cache().get(k, i);
}

const BigInt& factorial(std::int64_t m) {
  static std::shared_mutex mutex;
  static std::deque<BigInt> table{BigInt(1)};
  if (m < 0) fail(ErrorCode::RangeError, "factorial of a negative number");
  {
    std::shared_lock lock(mutex);
    if (m < static_cast<std::int64_t>(table.size())) return table[m];
  }
  std::unique_lock lock(mutex);
  while (static_cast<std::int64_t>(table.size()) <= m) {
    const auto next = static_cast<std::int64_t>(table.size());
    table.push_back(table.back() * next);
  }
  return table[m];
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) parse_failure(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash), text);
    BigInt den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  return parse_decimal(s);
}

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos) return to_double(parse_rational(s));
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) parse_failure(text);
  return v;
}

std::string format_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

std::string format_exact(const Rational& v) {
  const BigInt num = boost::multiprecision::numerator(v);
  const BigInt den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

const Rational& Scalar::exact() const {
  if (!is_exact()) fail(ErrorCode::BackendMismatch, "expected an exact scalar");
  return std::get<Rational>(value_);
}

double Scalar::to_double() const {
  if (is_exact()) return ccp::to_double(std::get<Rational>(value_));
  return std::get<double>(value_);
}

std::string Scalar::to_string() const {
  if (is_exact()) return format_exact(std::get<Rational>(value_));
  return format_decimal(std::get<double>(value_));
}

namespace {

template <class Op>
Scalar combine(const Scalar& a, const Scalar& b, Op op) {
  if (a.backend() != b.backend()) {
    fail(ErrorCode::BackendMismatch, "arithmetic between exact and float scalars");
  }
  if (a.is_exact()) return Scalar(Rational(op(a.exact(), b.exact())));
  return Scalar(op(a.as<double>(), b.as<double>()));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend()) {
    fail(ErrorCode::BackendMismatch, "comparison between exact and float scalars");
  }
  if (a.is_exact()) return a.exact() == b.exact();
  return a.as<double>() == b.as<double>();
}

}  // namespace ccp
