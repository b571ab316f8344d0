#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "multigauss/common.hpp"

namespace mg {

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct Factorization {
  i64 n = 1;
  std::vector<std::pair<i64, int>> factors;  // (p, e), sorted by p

  i64 phi() const {
    i64 r = 1;
    for (auto [p, e] : factors) {
      r *= p - 1;
      for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
  }
};

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // deterministic Miller-Rabin base set for 64-bit inputs
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = u64(pow_mod(i64(a % n), i64(d), i64(n)));
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = u64(mul_mod(i64(x), i64(x), i64(n)));
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace detail {

inline i64 pollard_rho(i64 n) {
  if (n % 2 == 0) return 2;
  for (i64 c = 1;; ++c) {
    i64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = mod_reduce(mul_mod(x, x, n) + c, n);
      y = mod_reduce(mul_mod(y, y, n) + c, n);
      y = mod_reduce(mul_mod(y, y, n) + c, n);
      d = std::gcd(std::abs(x - y), n);
    }
    if (d != n) return d;
  }
}

inline void factor_into(i64 n, std::map<i64, int>& out) {
  if (n == 1) return;
  if (is_prime_u64(u64(n))) {
    out[n]++;
    return;
  }
  for (i64 p = 2; p * p <= n && p < 100000; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
    if (n == 1) return;
    if (is_prime_u64(u64(n))) {
      out[n]++;
      return;
    }
  }
  i64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

inline Factorization factorize(i64 n) {
  if (n <= 0) throw domain_error("factorize: n must be positive");
  Factorization f;
  f.n = n;
  std::map<i64, int> m;
  detail::factor_into(n, m);
  f.factors.assign(m.begin(), m.end());
  return f;
}

inline i64 euler_phi(i64 n) { return factorize(n).phi(); }

// ---------------------------------------------------------------------------
// UnitGroup: canonical generator/order decomposition of (Z/qZ)^x
// ---------------------------------------------------------------------------

namespace detail {

inline i64 multiplicative_order(i64 g, i64 m, i64 phi, const Factorization& phi_fact) {
  i64 ord = phi;
  for (auto [p, e] : phi_fact.factors) {
    for (int i = 0; i < e; ++i) {
      if (pow_mod(g, ord / p, m) == 1)
        ord /= p;
      else
        break;
    }
  }
  return ord;
}

// Least primitive root mod p^e, odd p.
inline i64 least_primitive_root(i64 pe, i64 phi) {
  Factorization pf = factorize(phi);
  for (i64 g = 2; g < pe; ++g) {
    if (std::gcd(g, pe) != 1) continue;
    if (multiplicative_order(g, pe, phi, pf) == phi) return g;
  }
  throw domain_error("least_primitive_root: none found");
}

}  // namespace detail

struct UnitGroup {
  i64 q = 1;
  std::vector<i64> generators;  // residues mod q
  std::vector<i64> orders;      // orders[i] = order of generators[i]
  Factorization fact;           // of q

  i64 phi() const {
    i64 r = 1;
    for (i64 o : orders) r *= o;
    return r;
  }

  // residue -> packed exponent index, built on first use (q <= 10^6)
  mutable std::vector<i64> dlog_table;

  std::vector<i64> decode(i64 packed) const {
    std::vector<i64> v(orders.size());
    for (std::size_t i = orders.size(); i-- > 0;) {
      v[i] = packed % orders[i];
      packed /= orders[i];
    }
    return v;
  }

  void build_dlog_table() const {
    if (!dlog_table.empty() || orders.empty()) return;
    if (q > 1'000'000)
      throw capacity_error("unit group dlog table beyond 10^6", double(q));
    dlog_table.assign(std::size_t(q), -1);
    std::vector<i64> digits(orders.size(), 0);
    i64 value = 1, packed = 0;
    i64 count = phi();
    for (i64 it = 0; it < count; ++it) {
      dlog_table[std::size_t(value)] = packed;
      // odometer step; gen^order == 1 so the wrap multiplication is free
      for (std::size_t i = orders.size(); i-- > 0;) {
        value = mul_mod(value, generators[i], q);
        i64 stride = 1;
        for (std::size_t j = i + 1; j < orders.size(); ++j) stride *= orders[j];
        if (++digits[i] < orders[i]) {
          packed += stride;
          break;
        }
        digits[i] = 0;
        packed -= stride * (orders[i] - 1);
      }
    }
  }
};

inline UnitGroup unit_group(i64 q) {
  if (q <= 0) throw domain_error("unit_group: q must be positive");
  UnitGroup g;
  g.q = q;
  g.fact = factorize(q);
  for (auto [p, e] : g.fact.factors) {
    i64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    i64 rest = q / pe;
    auto lift = [&](i64 r) {
      if (rest == 1) return mod_reduce(r, q);
      // CRT: = r mod pe, = 1 mod rest
      i64 m1 = mul_mod(mod_reduce(r, pe), mul_mod(rest, inv_mod(rest, pe), q), q);
      i64 m2 = mul_mod(1, mul_mod(pe, inv_mod(pe, rest), q), q);
      return mod_reduce(m1 + m2, q);
    };
    if (p == 2) {
      if (e == 1) continue;
      if (e == 2) {
        g.generators.push_back(lift(3));
        g.orders.push_back(2);
      } else {
        i64 half = pe / 4;  // order of 5 mod 2^e is 2^{e-2}
        g.generators.push_back(lift(pe - 1));
        g.orders.push_back(2);
        g.generators.push_back(lift(5));
        g.orders.push_back(half);
      }
    } else {
      i64 phi = (p - 1) * (pe / p);
      g.generators.push_back(lift(detail::least_primitive_root(pe, phi)));
      g.orders.push_back(phi);
    }
  }
  return g;
}

inline std::vector<i64> discrete_log(const UnitGroup& g, i64 u) {
  u = mod_reduce(u, g.q);
  if (std::gcd(u, g.q) != 1)
    throw not_a_unit_error("discrete_log: gcd(u, q) > 1");
  if (g.q == 1) return {};
  g.build_dlog_table();
  if (g.orders.empty()) return {};
  return g.decode(g.dlog_table[std::size_t(u)]);
}

// ---------------------------------------------------------------------------
// CyclotomicTally: exact integer multiset of exponents of e(m/M)
// ---------------------------------------------------------------------------

namespace detail {

// Phi_M(x) with integer coefficients, by exact division of x^M - 1.
inline const std::vector<i64>& cyclotomic_poly(i64 M) {
  static std::map<i64, std::vector<i64>> cache;
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  std::vector<i64> poly(std::size_t(M) + 1, 0);
  poly[0] = -1;
  poly[std::size_t(M)] = 1;  // x^M - 1
  for (i64 d = 1; d < M; ++d) {
    if (M % d != 0) continue;
    const std::vector<i64>& phid = cyclotomic_poly(d);
    // exact long division by the monic phid
    std::vector<i64> quot(poly.size() - phid.size() + 1, 0);
    for (std::size_t i = quot.size(); i-- > 0;) {
      i64 c = poly[i + phid.size() - 1];
      quot[i] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < phid.size(); ++j)
        poly[i + j] -= c * phid[j];
    }
    poly = std::move(quot);
  }
  return cache.emplace(M, std::move(poly)).first->second;
}

}  // namespace detail

class CyclotomicTally {
 public:
  CyclotomicTally() : order_(1), counts_(1, 0) {}
  explicit CyclotomicTally(i64 order)
      : order_(order), counts_(std::size_t(order), 0) {
    if (order < 1) throw domain_error("tally order must be >= 1");
  }

  static CyclotomicTally one() {
    CyclotomicTally t(1);
    t.counts_[0] = 1;
    return t;
  }

  i64 order() const { return order_; }
  const std::vector<i64>& counts() const { return counts_; }

  void add_term(i64 m, i64 count = 1) {
    counts_[std::size_t(mod_reduce(m, order_))] += count;
  }

  i64 term_count() const {
    i64 s = 0;
    for (i64 c : counts_) s += std::abs(c);
    return s;
  }

  bool empty() const {
    for (i64 c : counts_)
      if (c != 0) return false;
    return true;
  }

  // Exact rescaling to a compatible larger order; value is preserved.
  CyclotomicTally rescaled(i64 new_order) const {
    if (new_order % order_ != 0)
      throw domain_error("rescale: new order must be a multiple of the old");
    CyclotomicTally t(new_order);
    i64 f = new_order / order_;
    for (i64 m = 0; m < order_; ++m)
      if (counts_[std::size_t(m)] != 0)
        t.counts_[std::size_t(m * f)] = counts_[std::size_t(m)];
    return t;
  }

  CyclotomicTally conjugated() const {
    CyclotomicTally t(order_);
    for (i64 m = 0; m < order_; ++m)
      if (counts_[std::size_t(m)] != 0)
        t.counts_[std::size_t((order_ - m) % order_)] = counts_[std::size_t(m)];
    return t;
  }

  // Associative merge (element-wise addition after order unification).
  CyclotomicTally& merge(const CyclotomicTally& other) {
    if (other.order_ == order_) {
      for (i64 m = 0; m < order_; ++m)
        counts_[std::size_t(m)] += other.counts_[std::size_t(m)];
      return *this;
    }
    i64 M = lcm_checked(order_, other.order_, caps().tally_order_cap);
    *this = rescaled(M);
    return merge(other.rescaled(M));
  }

  std::complex<double> value() const {
    KahanSum re, im;
    const double twopi = 6.283185307179586476925286766559;
    for (i64 m = 0; m < order_; ++m) {
      i64 c = counts_[std::size_t(m)];
      if (c == 0) continue;
      double ang = twopi * double(m) / double(order_);
      re.add(double(c) * std::cos(ang));
      im.add(double(c) * std::sin(ang));
    }
    return {re.value(), im.value()};
  }

  // Exact zero test: the count polynomial evaluated at e(1/M) vanishes
  // iff it is divisible by the M-th cyclotomic polynomial.
  bool is_zero_exact() const {
    if (empty()) return true;
    const std::vector<i64>& phiM = detail::cyclotomic_poly(order_);
    std::size_t deg = phiM.size() - 1;
    std::vector<__int128> rem(counts_.begin(), counts_.end());
    for (std::size_t i = rem.size(); i-- > deg;) {
      __int128 c = rem[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j <= deg; ++j)
        rem[i - deg + j] -= c * phiM[j];
    }
    for (std::size_t i = 0; i < deg; ++i)
      if (rem[i] != 0) return false;
    return true;
  }

  bool equals_exact(const CyclotomicTally& other) const {
    CyclotomicTally diff = *this;
    CyclotomicTally neg(other.order_);
    for (i64 m = 0; m < other.order_; ++m)
      neg.counts_[std::size_t(m)] = -other.counts_[std::size_t(m)];
    diff.merge(neg);
    return diff.is_zero_exact();
  }

  bool identical(const CyclotomicTally& other) const {
    return order_ == other.order_ && counts_ == other.counts_;
  }

 private:
  i64 order_;
  std::vector<i64> counts_;
};

inline CyclotomicTally tally_convolve(const CyclotomicTally& a,
                                      const CyclotomicTally& b) {
  i64 M = lcm_checked(a.order(), b.order(), caps().tally_order_cap);
  CyclotomicTally ra = a.order() == M ? a : a.rescaled(M);
  CyclotomicTally rb = b.order() == M ? b : b.rescaled(M);
  CyclotomicTally out(M);
  std::vector<std::pair<i64, i64>> sb;
  for (i64 m = 0; m < M; ++m)
    if (rb.counts()[std::size_t(m)] != 0) sb.emplace_back(m, rb.counts()[std::size_t(m)]);
  for (i64 m = 0; m < M; ++m) {
    i64 ca = ra.counts()[std::size_t(m)];
    if (ca == 0) continue;
    for (auto [mb, cb] : sb) out.add_term(m + mb, ca * cb);
  }
  return out;
}

inline std::complex<double> tally_value(const CyclotomicTally& t) {
  return t.value();
}

}  // namespace mg
