#pragma once

// Scalar layer: exact rationals (boost.multiprecision), the floating
// alternative, compensated accumulation, and shared error/budget types.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace epsclt {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ====== errors ======

// Malformed or out-of-contract input (JSON schemas, CLI payloads).
class SchemaError : public std::runtime_error {
public:
  SchemaError(std::string path, std::string field, const std::string& what)
      : std::runtime_error("schema error at " + path + ", field '" + field + "': " + what),
        path_(std::move(path)), field_(std::move(field)) {}
  const std::string& path() const { return path_; }
  const std::string& field() const { return field_; }

private:
  std::string path_, field_;
};

// The requested value exists but is irrational, so exact mode cannot
// represent it; float mode can.
class InexactResultError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Enumeration would exceed the configured elementary-term budget.
class BudgetError : public std::runtime_error {
public:
  BudgetError(std::uint64_t needed, std::uint64_t limit)
      : std::runtime_error("term budget exceeded: needs " + std::to_string(needed) +
                           " elementary terms, budget is " + std::to_string(limit)),
        needed_(needed), limit_(limit) {}
  std::uint64_t needed() const { return needed_; }
  std::uint64_t limit() const { return limit_; }

private:
  std::uint64_t needed_, limit_;
};

// ====== term budget ======

inline constexpr std::uint64_t kDefaultTermBudget = 100'000'000;  // 1e8
inline constexpr const char* kBudgetEnvVar = "EPSCLT_TERM_BUDGET";

inline std::uint64_t default_term_budget() {
  if (const char* s = std::getenv(kBudgetEnvVar)) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
  }
  return kDefaultTermBudget;
}

// Counts elementary terms across nested enumerations; throws once exceeded.
class Budget {
public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}
  Budget() : Budget(default_term_budget()) {}

  void charge(std::uint64_t terms = 1) const {
    used_ += terms;
    if (used_ > limit_) throw BudgetError(used_, limit_);
  }
  // Fail fast when a loop's size is known up front (does not consume).
  void require(std::uint64_t terms) const {
    if (used_ >= limit_ || terms > limit_ - used_) {
      std::uint64_t needed = used_ + terms;
      if (needed < terms) needed = UINT64_MAX;  // saturate on overflow
      throw BudgetError(needed, limit_);
    }
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

private:
  std::uint64_t limit_;
  mutable std::uint64_t used_ = 0;
};

// ====== rational helpers ======

inline double to_double(const Rational& r) { return static_cast<double>(r); }

inline std::string to_string(const Rational& r) { return r.str(); }

// Accepts "p/q", "p", optional leading '-'. Throws std::invalid_argument.
inline Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("bad rational literal '" + s + "': " + e.what());
  }
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer out = 1;
  for (unsigned t = 0; t < k; ++t) {
    out *= n - t;
    out /= t + 1;
  }
  return out;
}

inline Integer falling_factorial(const Integer& n, unsigned k) {
  Integer out = 1;
  for (unsigned t = 0; t < k; ++t) out *= n - t;
  return out;
}

// (k-1)!! for even k: number of pair partitions of [k].
inline Integer pair_partition_count(unsigned k) {
  if (k % 2 != 0) return 0;
  Integer out = 1;
  for (unsigned t = k; t > 1; t -= 2) out *= t - 1;
  return out;
}

inline Integer catalan_number(unsigned n) {
  return binomial(2 * n, n) / Integer(n + 1);
}

// ====== scalar abstraction ======

// The numeric kernels are templated on a scalar S that is either Rational
// (exact mode) or double (float mode). scalar_ops bridges construction.
template <class S>
struct scalar_ops;

template <>
struct scalar_ops<Rational> {
  static Rational from_rational(const Rational& r) { return r; }
  static Rational from_integer(const Integer& n) { return Rational(n); }
  static Rational from_int(long v) { return Rational(v); }
  static double to_double_value(const Rational& r) { return epsclt::to_double(r); }
  static std::string str(const Rational& r) { return r.str(); }
};

template <>
struct scalar_ops<double> {
  static double from_rational(const Rational& r) { return epsclt::to_double(r); }
  static double from_integer(const Integer& n) { return static_cast<double>(n); }
  static double from_int(long v) { return static_cast<double>(v); }
  static double to_double_value(double v) { return v; }
  static std::string str(double v) { return std::to_string(v); }
};

template <class S>
concept ScalarType = std::is_same_v<S, Rational> || std::is_same_v<S, double>;

template <ScalarType S>
S pow_nonneg(const S& base, unsigned e) {
  S out = scalar_ops<S>::from_int(1);  // 0^0 == 1 by convention
  S b = base;
  unsigned k = e;
  while (k > 0) {
    if (k & 1u) out *= b;
    b *= b;
    k >>= 1;
  }
  return out;
}

// Exact square root of a rational; throws std::domain_error when the value
// is not a perfect square (the caller decides how to degrade).
inline Rational rational_sqrt(const Rational& r) {
  if (r < 0) throw std::domain_error("sqrt of a negative rational");
  Integer num = numerator(r), den = denominator(r);
  Integer sn = boost::multiprecision::sqrt(num), sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den)
    throw std::domain_error("rational " + r.str() + " is not a perfect square; exact sqrt unavailable");
  return Rational(sn, sd);
}

template <ScalarType S>
S scalar_abs(const S& x) {
  return x < scalar_ops<S>::from_int(0) ? S(-x) : x;
}

template <class S>
S scalar_sqrt(const S& x);

template <>
inline Rational scalar_sqrt<Rational>(const Rational& x) { return rational_sqrt(x); }

template <>
inline double scalar_sqrt<double>(const double& x) {
  if (x < 0) throw std::domain_error("sqrt of a negative value");
  return std::sqrt(x);
}

// Plain accumulation for exact scalars; Kahan compensation for doubles so
// float mode is deterministic under a fixed summation order.
template <class S>
class Accumulator {
public:
  void add(const S& x) { sum_ += x; }
  const S& total() const { return sum_; }

private:
  S sum_{};
};

template <>
class Accumulator<double> {
public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  const double& total() const { return sum_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace epsclt
