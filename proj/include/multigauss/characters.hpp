#pragma once

#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>

#include "multigauss/arith.hpp"

namespace mg {

// Shared, memoized unit groups; characters mod k all reference one instance.
inline std::shared_ptr<const UnitGroup> shared_unit_group(i64 q) {
  static std::mutex mu;
  static std::unordered_map<i64, std::shared_ptr<const UnitGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<UnitGroup>(unit_group(q));
  cache.emplace(q, g);
  return g;
}

// chi(n) as a reduced root of unity e(num/den), or zero.
struct CharValue {
  bool zero = true;
  i64 num = 0;
  i64 den = 1;
};

inline CharValue make_root(i64 num, i64 den) {
  num = mod_reduce(num, den);
  i64 g = std::gcd(num, den);
  if (num == 0) return {false, 0, 1};
  return {false, num / g, den / g};
}

class DirichletCharacter {
 public:
  DirichletCharacter() : DirichletCharacter(1, {}) {}

  DirichletCharacter(i64 k, std::vector<i64> exponents)
      : k_(k), group_(shared_unit_group(k)), exps_(std::move(exponents)) {
    if (exps_.size() != group_->orders.size())
      throw domain_error("character: exponent count must match generator count");
    L_ = 1;
    for (i64 o : group_->orders) L_ = std::lcm(L_, o);
    for (std::size_t i = 0; i < exps_.size(); ++i)
      exps_[i] = mod_reduce(exps_[i], group_->orders[i]);
    if (k_ <= 1'000'000) build_table();
  }

  i64 modulus() const { return k_; }
  const std::vector<i64>& exponents() const { return exps_; }
  const UnitGroup& group() const { return *group_; }

  bool is_principal() const {
    for (i64 e : exps_)
      if (e != 0) return false;
    return true;
  }

  // Order of chi in the character group.
  i64 order() const {
    i64 g = L_;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      g = std::gcd(g, exps_[i] * (L_ / group_->orders[i]));
    return L_ / g;
  }

  // Unreduced numerator against denominator L(); -1 encodes zero.
  i64 value_numerator(i64 n) const {
    n = mod_reduce(n, k_);
    if (!table_.empty()) return table_[std::size_t(n)];
    if (std::gcd(n == 0 ? k_ : n, k_) != 1) return -1;
    if (k_ == 1) return 0;
    auto v = discrete_log(*group_, n);
    i64 num = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      num = mod_reduce(num + exps_[i] * (L_ / group_->orders[i]) % L_ * v[i], L_);
    return num;
  }

  i64 value_denominator() const { return L_; }

  CharValue operator()(i64 n) const {
    i64 num = value_numerator(n);
    if (num < 0) return {};
    return make_root(num, L_);
  }

  DirichletCharacter conjugated() const {
    std::vector<i64> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = mod_reduce(-exps_[i], group_->orders[i]);
    return {k_, std::move(e)};
  }

 private:
  void build_table() {
    if (k_ == 1) {
      table_ = {0};
      return;
    }
    table_.assign(std::size_t(k_), -1);
    std::vector<i64> digits(exps_.size(), 0);
    i64 value = 1, num = 0;
    i64 count = group_->phi();
    std::vector<i64> step(exps_.size());
    for (std::size_t i = 0; i < exps_.size(); ++i)
      step[i] = exps_[i] * (L_ / group_->orders[i]) % L_;
    for (i64 it = 0; it < count; ++it) {
      table_[std::size_t(value)] = num;
      for (std::size_t i = exps_.size(); i-- > 0;) {
        value = mul_mod(value, group_->generators[i], k_);
        num = mod_reduce(num + step[i], L_);
        if (++digits[i] < group_->orders[i]) break;
        digits[i] = 0;
        num = mod_reduce(num - step[i] * group_->orders[i], L_);
      }
    }
  }

  i64 k_;
  std::shared_ptr<const UnitGroup> group_;
  std::vector<i64> exps_;
  i64 L_ = 1;
  std::vector<i64> table_;  // residue -> numerator over L_, -1 = zero
};

inline DirichletCharacter principal_character(i64 k) {
  return {k, std::vector<i64>(shared_unit_group(k)->orders.size(), 0)};
}

// All phi(q) characters mod q, exponent vectors in lexicographic order.
inline std::vector<DirichletCharacter> enumerate_characters(i64 q) {
  auto g = shared_unit_group(q);
  std::vector<DirichletCharacter> out;
  std::vector<i64> digits(g->orders.size(), 0);
  i64 total = g->phi();
  out.reserve(std::size_t(total));
  for (i64 t = 0; t < total; ++t) {
    out.emplace_back(q, digits);
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < g->orders[i]) break;
      digits[i] = 0;
    }
  }
  return out;
}

inline DirichletCharacter char_product(const DirichletCharacter& a,
                                       const DirichletCharacter& b) {
  if (a.modulus() != b.modulus())
    throw modulus_error("char_product: moduli differ (induce first)");
  std::vector<i64> e(a.exponents().size());
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = a.exponents()[i] + b.exponents()[i];
  return {a.modulus(), std::move(e)};
}

// chi * chi0 mod q: agrees with chi on units of q, vanishes elsewhere.
inline DirichletCharacter induce_character(const DirichletCharacter& chi, i64 q) {
  if (q % chi.modulus() != 0)
    throw domain_error("induce: modulus of chi must divide q");
  auto g = shared_unit_group(q);
  std::vector<i64> e(g->orders.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    CharValue v = chi(g->generators[i]);
    // chi(gen) = e(num/den) with den | order of gen mod q
    e[i] = v.num * (g->orders[i] / v.den);
  }
  return {q, std::move(e)};
}

// Unique decomposition chi = chi' * chi'' along a coprime split q = q1*q2,
// where chi' is supported mod gcd-part of k dividing q1.
inline std::pair<DirichletCharacter, DirichletCharacter> split_character(
    const DirichletCharacter& chi, i64 q1, i64 q2) {
  i64 k = chi.modulus();
  i64 k1 = 1, k2 = 1;
  for (auto [p, ex] : factorize(k).factors) {
    i64 pe = 1;
    for (int i = 0; i < ex; ++i) pe *= p;
    (q1 % p == 0 ? k1 : k2) *= pe;
  }
  auto part = [&](i64 kp, i64 ko) {
    auto g = shared_unit_group(kp);
    std::vector<i64> e(g->orders.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      // lift: = gen mod kp, = 1 mod ko
      i64 u = g->generators[i];
      i64 lifted = ko == 1 ? u
                           : mod_reduce(u * ko % k * inv_mod(ko, kp) % k +
                                            kp * inv_mod(kp, ko) % k,
                                        k);
      CharValue v = chi(lifted);
      e[i] = v.num * (g->orders[i] / v.den);
    }
    return DirichletCharacter(kp, std::move(e));
  };
  return {part(k1, k2), part(k2, k1)};
}

struct CharacterSystem {
  std::vector<DirichletCharacter> chars;
  i64 q = 1;  // common modulus; every modulus divides q

  CharacterSystem() = default;
  CharacterSystem(std::vector<DirichletCharacter> cs, i64 common)
      : chars(std::move(cs)), q(common) {
    for (const auto& c : chars)
      if (q % c.modulus() != 0)
        throw modulus_error("character system: modulus does not divide q");
  }

  static CharacterSystem principal(i64 q, int s) {
    std::vector<DirichletCharacter> cs(std::size_t(s), principal_character(q));
    return {std::move(cs), q};
  }

  std::size_t size() const { return chars.size(); }
};

inline i64 lcm_modulus(const CharacterSystem& cs) {
  i64 k0 = 1;
  for (const auto& c : cs.chars) k0 = std::lcm(k0, c.modulus());
  return k0;
}

// CLI character spec "q:e1,e2,..." against the canonical generator list.
inline DirichletCharacter parse_character(const std::string& spec) {
  auto colon = spec.find(':');
  std::string qpart = colon == std::string::npos ? spec : spec.substr(0, colon);
  i64 q = 0;
  try {
    q = std::stoll(qpart);
  } catch (...) {
    throw parse_error("character spec: bad modulus", 0);
  }
  if (q < 1) throw parse_error("character spec: modulus must be >= 1", 0);
  std::vector<i64> exps;
  if (colon != std::string::npos && colon + 1 < spec.size()) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        exps.push_back(std::stoll(tok));
      } catch (...) {
        throw parse_error("character spec: bad exponent", colon + 1);
      }
    }
  }
  auto g = shared_unit_group(q);
  exps.resize(g->orders.size(), 0);
  return {q, std::move(exps)};
}

inline std::string character_spec(const DirichletCharacter& chi) {
  std::string s = std::to_string(chi.modulus()) + ":";
  for (std::size_t i = 0; i < chi.exponents().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(chi.exponents()[i]);
  }
  return s;
}

// Conductor: smallest modulus f | k such that chi factors through f.
// Metadata only; nothing downstream depends on it.
inline i64 conductor(const DirichletCharacter& chi) {
  i64 k = chi.modulus();
  for (i64 f = 1; f <= k; ++f) {
    if (k % f != 0) continue;
    bool ok = true;
    for (i64 a = 1; a < k && ok; ++a) {
      if (std::gcd(a, k) != 1) continue;
      if (mod_reduce(a, f) == mod_reduce(1, f)) {
        CharValue v = chi(a);
        ok = !v.zero && v.num == 0;
      }
    }
    if (ok) return f;
  }
  return k;
}

}  // namespace mg
