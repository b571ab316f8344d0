#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mg {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Thrown when an operation would exceed its configured work budget.
// `required` carries the budget the caller would need to grant.
class capacity_error : public std::runtime_error {
 public:
  capacity_error(std::string what, double required)
      : std::runtime_error(std::move(what)), required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class not_a_unit_error : public domain_error {
 public:
  using domain_error::domain_error;
};

class modulus_error : public domain_error {
 public:
  using domain_error::domain_error;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(std::string what, std::size_t pos)
      : std::runtime_error(std::move(what)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Global work caps.  Mutable process-wide defaults; every capped operation
// reads these unless handed an explicit override.
struct WorkCaps {
  double term_budget = 1e9;   // residue-tuple evaluations per summation
  i64 tally_order_cap = 10'000'000;
  i64 sieve_cap = 100'000'000;
};

inline WorkCaps& caps() {
  static WorkCaps c;
  return c;
}

inline i64 gcd_i64(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 lcm_checked(i64 a, i64 b, i64 cap) {
  i64 g = std::gcd(a, b);
  i64 l = a / g;
  if (b != 0 && l > cap / b + 1) {
    throw capacity_error("lcm exceeds tally order cap", double(l) * double(b));
  }
  l *= b;
  if (l > cap)
    throw capacity_error("lcm exceeds tally order cap", double(l));
  return l;
}

// Nonnegative representative of a mod m, m >= 1.
inline i64 mod_reduce(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) {
  return i64((__int128)a * b % m);
}

inline i64 pow_mod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 r = 1;
  base = mod_reduce(base, m);
  while (exp > 0) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Inverse of a mod m, gcd(a,m) = 1.
inline i64 inv_mod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, a1 = mod_reduce(a, m);
  while (a1 != 0) {
    i64 q = g / a1;
    g -= q * a1;
    std::swap(g, a1);
    x -= q * x1;
    std::swap(x, x1);
  }
  if (g != 1) throw not_a_unit_error("inv_mod: argument is not a unit");
  return mod_reduce(x, m);
}

// Neumaier compensated accumulator.  Sums of up to q^s unit-magnitude
// terms must not lose the cancellation signal.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace mg
