#pragma once

#include <optional>
#include <thread>
#include <unordered_map>

#include "multigauss/characters.hpp"
#include "multigauss/forms.hpp"

namespace mg {

enum class ThetaMode { unconditional, igusa };

// Saving exponent for normalized complete sums of degree-d polynomials.
inline double theta(int d, ThetaMode mode) {
  if (mode == ThetaMode::igusa) {
    if (d < 1) throw domain_error("theta: d must be >= 1");
    return 1.0 / double(d);
  }
  if (d < 2) throw domain_error("theta: unconditional mode needs d >= 2");
  return 1.0 / (2.0 * double(d - 1));
}

struct GaussSumInstance {
  FormSystem system;
  i64 q = 1;
  std::vector<i64> a;    // length R, reduced mod q
  CharacterSystem chars;  // length s, moduli dividing q

  int s() const { return system.vars(); }
  int R() const { return system.count(); }

  void validate() const {
    if (int(a.size()) != R())
      throw domain_error("instance: |a| must equal the number of forms");
    if (int(chars.size()) != s())
      throw domain_error("instance: need one character per variable");
    for (const auto& c : chars.chars)
      if (q % c.modulus() != 0)
        throw modulus_error("instance: character modulus must divide q");
  }

  bool admissible_a() const {
    i64 g = q;
    for (i64 ai : a) g = std::gcd(g, mod_reduce(ai, q));
    return g == 1;
  }
};

struct GaussSumReport {
  std::complex<double> value{0.0, 0.0};
  double magnitude = 0.0;
  std::optional<CyclotomicTally> tally;
  double empirical_exponent = std::numeric_limits<double>::quiet_NaN();
  double theoretical_exponent = std::numeric_limits<double>::quiet_NaN();
  ThetaMode theta_mode = ThetaMode::unconditional;
  bool bound_ok = true;
  double slack = 0.0;
  int d = 0;    // highest degree among forms with a_i != 0 mod q
  int r_d = 0;  // number of degree-d forms in the system
};

namespace detail {

// Numerators of chi at every residue mod q, rescaled to exponent order M.
// -1 marks chi = 0.
inline std::vector<i64> char_exponent_table(const DirichletCharacter& chi,
                                            i64 q, i64 M) {
  std::vector<i64> tab(std::size_t(q), -1);
  i64 L = chi.value_denominator();
  for (i64 h = 0; h < q; ++h) {
    i64 num = chi.value_numerator(h);  // chi is k-periodic; h mod k inside
    if (num < 0) continue;
    tab[std::size_t(h)] = i64((__int128)num * M / L % M);
  }
  return tab;
}

inline i64 exponent_order(const GaussSumInstance& inst) {
  i64 M = inst.q;
  for (const auto& c : inst.chars.chars)
    M = lcm_checked(M, c.order(), caps().tally_order_cap);
  return M;
}

inline void check_budget(double work, const char* what) {
  if (work > caps().term_budget)
    throw capacity_error(std::string(what) + ": work cap exceeded", work);
}

// Core summation: tally of sum over h in (Z/q)^s of
//   chi_1(h_1)...chi_s(h_s) e(a.F(h)/q),
// deterministic for any worker count (integer tallies merge associatively).
inline CyclotomicTally gauss_sum_tally(const GaussSumInstance& inst,
                                       int workers = 1) {
  const i64 q = inst.q;
  const int s = inst.s();
  const int R = inst.R();
  inst.validate();
  check_budget(std::pow(double(q), double(s)), "gauss_sum");

  const i64 M = exponent_order(inst);
  const i64 qstep = M / q;
  std::vector<std::vector<i64>> chitab;
  for (const auto& c : inst.chars.chars)
    chitab.push_back(char_exponent_table(c, q, M));
  std::vector<i64> ared(static_cast<std::size_t>(R));
  for (int j = 0; j < R; ++j) ared[std::size_t(j)] = mod_reduce(inst.a[std::size_t(j)], q);

  const int maxdeg = inst.system.max_degree();
  PowerTable pt(q, std::max(maxdeg, 1));

  // outer index space: first s-1 coordinates; innermost evaluated by Horner
  i64 outer_total = 1;
  for (int i = 0; i + 1 < s; ++i) outer_total *= q;

  auto run_range = [&](i64 begin, i64 end, CyclotomicTally& out) {
    std::vector<i64> x(std::size_t(s), 0);
    std::vector<i64> poly(static_cast<std::size_t>(maxdeg + 1));
    for (i64 idx = begin; idx < end; ++idx) {
      i64 t = idx;
      for (int i = s - 2; i >= 0; --i) {
        x[std::size_t(i)] = t % q;
        t /= q;
      }
      // character contribution of the fixed coordinates
      i64 eouter = 0;
      bool dead = false;
      for (int i = 0; i + 1 < s; ++i) {
        i64 c = chitab[std::size_t(i)][std::size_t(x[std::size_t(i)])];
        if (c < 0) {
          dead = true;
          break;
        }
        eouter += c;
        if (eouter >= M) eouter -= M;
      }
      if (dead) continue;
      // a-weighted coefficients of the innermost variable
      std::fill(poly.begin(), poly.end(), 0);
      for (int j = 0; j < R; ++j) {
        if (ared[std::size_t(j)] == 0) continue;
        const Form& f = inst.system.forms[std::size_t(j)];
        for (const auto& term : f.terms()) {
          i64 v = mul_mod(mod_reduce(term.coeff, q), ared[std::size_t(j)], q);
          for (int i = 0; i + 1 < s && v != 0; ++i)
            if (term.exps[std::size_t(i)] != 0)
              v = mul_mod(v, pt.pow(x[std::size_t(i)], term.exps[std::size_t(i)]), q);
          int e = s >= 1 ? term.exps[std::size_t(s - 1)] : 0;
          poly[std::size_t(e)] = mod_reduce(poly[std::size_t(e)] + v, q);
        }
      }
      const std::vector<i64>& inner = chitab[std::size_t(s - 1)];
      for (i64 h = 0; h < q; ++h) {
        i64 ci = inner[std::size_t(h)];
        if (ci < 0) continue;
        i64 v = 0;
        for (int e = maxdeg; e >= 0; --e)
          v = mod_reduce(mul_mod(v, h, q) + poly[std::size_t(e)], q);
        out.add_term(eouter + ci + v * qstep);
      }
    }
  };

  if (s == 0) return CyclotomicTally::one();
  workers = int(std::max<i64>(1, std::min<i64>(workers, outer_total)));
  if (workers == 1 || outer_total == 1) {
    CyclotomicTally out(M);
    run_range(0, outer_total, out);
    return out;
  }
  std::vector<CyclotomicTally> parts(static_cast<std::size_t>(workers), CyclotomicTally(M));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    i64 begin = outer_total * w / workers;
    i64 end = outer_total * (w + 1) / workers;
    pool.emplace_back([&, begin, end, w] { run_range(begin, end, parts[std::size_t(w)]); });
  }
  for (auto& th : pool) th.join();
  CyclotomicTally out = std::move(parts[0]);
  for (int w = 1; w < workers; ++w) out.merge(parts[std::size_t(w)]);
  return out;
}

}  // namespace detail

inline GaussSumReport report_from_tally(CyclotomicTally tally, i64 q) {
  GaussSumReport rep;
  rep.value = tally.value();
  rep.magnitude = std::abs(rep.value);
  if (q >= 2) {
    if (tally.is_zero_exact())
      rep.empirical_exponent = -std::numeric_limits<double>::infinity();
    else
      rep.empirical_exponent = std::log(rep.magnitude) / std::log(double(q));
  }
  rep.tally = std::move(tally);
  return rep;
}

inline GaussSumReport gauss_sum_bruteforce(const GaussSumInstance& inst,
                                           int workers = 1) {
  return report_from_tally(detail::gauss_sum_tally(inst, workers), inst.q);
}

// Multiplicative fast path: factor q into prime powers, split characters and
// remap a along each coprime factor, multiply the factor tallies.  The result
// is the brute-force tally exactly (the CRT bijection of summation domains).
inline GaussSumReport gauss_sum_crt(const GaussSumInstance& inst,
                                    int workers = 1) {
  inst.validate();
  const i64 q = inst.q;
  auto fact = factorize(q);
  if (fact.factors.size() <= 1) return gauss_sum_bruteforce(inst, workers);

  CyclotomicTally total = CyclotomicTally::one();
  for (auto [p, e] : fact.factors) {
    i64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    i64 rest = q / pe;
    GaussSumInstance part;
    part.system = inst.system;
    part.q = pe;
    i64 inv_rest = inv_mod(rest, pe);
    for (i64 aj : inst.a)
      part.a.push_back(mul_mod(mod_reduce(aj, pe), inv_rest, pe));
    std::vector<DirichletCharacter> cs;
    for (const auto& chi : inst.chars.chars)
      cs.push_back(split_character(chi, pe, rest).first);
    part.chars = CharacterSystem(std::move(cs), pe);
    total = tally_convolve(total, detail::gauss_sum_tally(part, workers));
  }
  return report_from_tally(std::move(total), q);
}

// E_F(q) = q^{-s} sum_x e(u F(x) / q).
inline std::complex<double> normalized_complete_sum(const Form& F, i64 q,
                                                    i64 u = 1,
                                                    int workers = 1) {
  if (std::gcd(mod_reduce(u, q) == 0 ? q : mod_reduce(u, q), q) != 1 && q > 1)
    throw domain_error("normalized_complete_sum: u must be coprime to q");
  GaussSumInstance inst;
  inst.system.forms = {F};
  inst.q = q;
  inst.a = {u};
  inst.chars = CharacterSystem::principal(1, F.vars());
  auto tally = detail::gauss_sum_tally(inst, workers);
  return tally.value() / std::pow(double(q), double(F.vars()));
}

// ---------------------------------------------------------------------------
// nu(q; chi_1..chi_s): outer sum over admissible a of C_F(q, a; conj(chi)chi0)
// ---------------------------------------------------------------------------

struct NuResult {
  CyclotomicTally tally;
  std::complex<double> value;
};

inline NuResult nu_sum(const FormSystem& S, i64 q, const CharacterSystem& chars,
                       int workers = 1) {
  const int s = S.vars();
  const int R = S.count();
  if (int(chars.size()) != s)
    throw domain_error("nu_sum: need one character per variable");
  std::vector<DirichletCharacter> psi;
  for (const auto& chi : chars.chars)
    psi.push_back(induce_character(chi.conjugated(), q));

  double grid = std::pow(double(q), double(s));
  double agrid = std::pow(double(q), double(R));
  detail::check_budget(grid + agrid, "nu_sum");

  i64 Mchi = 1;
  for (const auto& c : psi) Mchi = std::lcm(Mchi, c.order());
  const i64 M = lcm_checked(q, Mchi, caps().tally_order_cap);

  std::vector<std::vector<i64>> chitab;
  for (const auto& c : psi) chitab.push_back(detail::char_exponent_table(c, q, M));

  PowerTable pt(q, std::max(S.max_degree(), 1));

  // histogram of (character exponent, value vector of F) over the h-grid
  std::unordered_map<u64, i64> buckets;
  {
    std::vector<i64> x(std::size_t(s), 0);
    i64 total = 1;
    for (int i = 0; i < s; ++i) total *= q;
    for (i64 idx = 0; idx < total; ++idx) {
      i64 t = idx;
      for (int i = s - 1; i >= 0; --i) {
        x[std::size_t(i)] = t % q;
        t /= q;
      }
      i64 e = 0;
      bool dead = false;
      for (int i = 0; i < s; ++i) {
        i64 c = chitab[std::size_t(i)][std::size_t(x[std::size_t(i)])];
        if (c < 0) {
          dead = true;
          break;
        }
        e = (e + c) % M;
      }
      if (dead) continue;
      u64 key = u64(e);
      for (int j = 0; j < R; ++j)
        key = key * u64(q) + u64(eval_with_table(S.forms[std::size_t(j)], pt, x));
      buckets[key] += 1;
    }
  }

  // for each distinct value vector v: histogram over admissible a of a.v mod q
  std::unordered_map<u64, std::vector<i64>> dot_hist;
  std::vector<std::vector<i64>> admissible;
  {
    std::vector<i64> a(std::size_t(R), 0);
    i64 total = 1;
    for (int j = 0; j < R; ++j) total *= q;
    for (i64 idx = 0; idx < total; ++idx) {
      i64 t = idx;
      i64 g = q;
      for (int j = R - 1; j >= 0; --j) {
        a[std::size_t(j)] = t % q;
        g = std::gcd(g, a[std::size_t(j)]);
        t /= q;
      }
      if (g == 1) admissible.push_back(a);
    }
  }

  CyclotomicTally out(M);
  const i64 qstep = M / q;
  for (const auto& [key, cnt] : buckets) {
    u64 vkey = key;
    std::vector<i64> v(static_cast<std::size_t>(R));
    for (int j = R - 1; j >= 0; --j) {
      v[std::size_t(j)] = i64(vkey % u64(q));
      vkey /= u64(q);
    }
    i64 e = i64(vkey);
    u64 venc = 0;
    for (int j = 0; j < R; ++j) venc = venc * u64(q) + u64(v[std::size_t(j)]);
    auto& hist = dot_hist[venc];
    if (hist.empty()) {
      hist.assign(std::size_t(q), 0);
      for (const auto& a : admissible) {
        i64 r = 0;
        for (int j = 0; j < R; ++j)
          r = mod_reduce(r + mul_mod(a[std::size_t(j)], v[std::size_t(j)], q), q);
        hist[std::size_t(r)] += 1;
      }
    }
    for (i64 r = 0; r < q; ++r)
      if (hist[std::size_t(r)] != 0)
        out.add_term(e + r * qstep, cnt * hist[std::size_t(r)]);
  }
  (void)workers;
  return {out, out.value()};
}

// ---------------------------------------------------------------------------
// Fourth-power Cauchy inequality: |C|^4 <= quadruple character-free sum,
// RHS evaluated by the O(q^{3s}) inner-square reorganization.
// ---------------------------------------------------------------------------

struct CauchyCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_imag = 0.0;
  bool ok = false;
};

inline CauchyCheck cauchy_fourth_check(const GaussSumInstance& inst,
                                       int workers = 1) {
  inst.validate();
  const i64 q = inst.q;
  const int s = inst.s();
  const int R = inst.R();
  detail::check_budget(std::pow(double(q), 3.0 * double(s)), "cauchy_fourth_check");

  CauchyCheck out;
  out.lhs = std::pow(gauss_sum_bruteforce(inst, workers).magnitude, 4.0);

  PowerTable pt(q, std::max(inst.system.max_degree(), 1));
  std::vector<i64> ared(static_cast<std::size_t>(R));
  for (int j = 0; j < R; ++j) ared[std::size_t(j)] = mod_reduce(inst.a[std::size_t(j)], q);

  i64 grid = 1;
  for (int i = 0; i < s; ++i) grid *= q;

  // decode grid indices once
  std::vector<std::vector<i64>> tuple(static_cast<std::size_t>(grid), std::vector<i64>(static_cast<std::size_t>(s)));
  for (i64 idx = 0; idx < grid; ++idx) {
    i64 t = idx;
    for (int i = s - 1; i >= 0; --i) {
      tuple[std::size_t(idx)][std::size_t(i)] = t % q;
      t /= q;
    }
  }

  // D[h * grid + j] = a.F(h o j) mod q; q^{2s} entries
  std::vector<i64> D(std::size_t(grid) * std::size_t(grid));
  {
    std::vector<i64> prod(static_cast<std::size_t>(s));
    for (i64 hi = 0; hi < grid; ++hi)
      for (i64 ji = 0; ji < grid; ++ji) {
        for (int i = 0; i < s; ++i)
          prod[std::size_t(i)] =
              mul_mod(tuple[std::size_t(hi)][std::size_t(i)],
                      tuple[std::size_t(ji)][std::size_t(i)], q);
        i64 v = 0;
        for (int r = 0; r < R; ++r) {
          if (ared[std::size_t(r)] == 0) continue;
          v = mod_reduce(
              v + mul_mod(ared[std::size_t(r)],
                          eval_with_table(inst.system.forms[std::size_t(r)], pt, prod), q),
              q);
        }
        D[std::size_t(hi) * std::size_t(grid) + std::size_t(ji)] = v;
      }
  }

  std::vector<double> cosq(static_cast<std::size_t>(q)), sinq(static_cast<std::size_t>(q));
  for (i64 w = 0; w < q; ++w) {
    double ang = 2.0 * M_PI * double(w) / double(q);
    cosq[std::size_t(w)] = std::cos(ang);
    sinq[std::size_t(w)] = std::sin(ang);
  }

  auto run_rows = [&](i64 begin, i64 end, KahanSum& acc) {
    std::vector<i64> cnt(static_cast<std::size_t>(q));
    for (i64 hi = begin; hi < end; ++hi) {
      const i64* rh = D.data() + hi * grid;
      for (i64 hpi = 0; hpi < grid; ++hpi) {
        const i64* rhp = D.data() + hpi * grid;
        std::fill(cnt.begin(), cnt.end(), 0);
        for (i64 ji = 0; ji < grid; ++ji) {
          i64 w = rh[ji] - rhp[ji];
          if (w < 0) w += q;
          cnt[std::size_t(w)] += 1;
        }
        double re = 0, im = 0;
        for (i64 w = 0; w < q; ++w) {
          if (cnt[std::size_t(w)] == 0) continue;
          re += double(cnt[std::size_t(w)]) * cosq[std::size_t(w)];
          im += double(cnt[std::size_t(w)]) * sinq[std::size_t(w)];
        }
        acc.add(re * re + im * im);
      }
    }
  };

  workers = int(std::max<i64>(1, std::min<i64>(workers, grid)));
  std::vector<KahanSum> partial(static_cast<std::size_t>(workers));
  if (workers == 1) {
    run_rows(0, grid, partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        run_rows(grid * w / workers, grid * (w + 1) / workers, partial[std::size_t(w)]);
      });
    for (auto& th : pool) th.join();
  }
  KahanSum acc;
  for (const auto& pk : partial) acc.add(pk.value());
  out.rhs = acc.value();
  out.rhs_imag = 0.0;  // |T|^2 accumulation is real by the h <-> h' pairing
  out.ok = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Exponent reporting against the main multiple-Gauss-sum bound
// ---------------------------------------------------------------------------

inline GaussSumReport exponent_report(const GaussSumInstance& inst,
                                      int dim_v_star,
                                      ThetaMode mode = ThetaMode::unconditional,
                                      double slack = 0.25, int workers = 1) {
  inst.validate();
  if (!inst.admissible_a())
    throw domain_error("exponent_report: gcd(a, q) must be 1");
  GaussSumReport rep = gauss_sum_crt(inst, workers);
  const int s = inst.s();

  int d = 0;
  bool any = false;
  for (int j = 0; j < inst.R(); ++j) {
    if (mod_reduce(inst.a[std::size_t(j)], inst.q) == 0 && inst.q > 1) continue;
    d = std::max(d, inst.system.forms[std::size_t(j)].degree());
    any = true;
  }
  if (!any) d = inst.system.max_degree();
  rep.d = d;
  rep.r_d = degree_part(inst.system, d).count();
  rep.theta_mode = mode;
  rep.slack = slack;
  rep.theoretical_exponent =
      double(s) - theta(2 * d, mode) * double(s - dim_v_star) /
                      (4.0 * double(rep.r_d + 1));
  if (rep.empirical_exponent == -std::numeric_limits<double>::infinity())
    rep.bound_ok = true;
  else
    rep.bound_ok = rep.empirical_exponent <= rep.theoretical_exponent + slack;
  return rep;
}

// ---------------------------------------------------------------------------
// One-variable polynomials and the Cochrane--Zheng bound
// ---------------------------------------------------------------------------

struct Poly1 {
  std::vector<i64> coeffs;  // c0 + c1 x + ... + cd x^d

  int degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;)
      if (coeffs[i] != 0) return int(i);
    return 0;
  }

  i64 eval_mod(i64 x, i64 q) const {
    i64 v = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
      v = mod_reduce(mul_mod(v, x, q) + coeffs[i], q);
    return v;
  }
};

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

inline BoundCheck cochrane_zheng_check(const Poly1& f, i64 p, int t, i64 a,
                                       const DirichletCharacter& chi) {
  i64 q = 1;
  for (int i = 0; i < t; ++i) q *= p;
  if (std::gcd(mod_reduce(a, q) == 0 ? q : mod_reduce(a, q), q) != 1)
    throw domain_error("cochrane_zheng_check: gcd(a, p) must be 1");
  int d = f.degree();
  if (d < 1) throw domain_error("cochrane_zheng_check: degree must be >= 1");
  if (q % chi.modulus() != 0)
    throw modulus_error("cochrane_zheng_check: chi modulus must divide p^t");

  i64 L = chi.value_denominator();
  i64 M = lcm_checked(q, L, caps().tally_order_cap);
  CyclotomicTally tally(M);
  for (i64 h = 0; h < q; ++h) {
    i64 num = chi.value_numerator(h);
    if (num < 0) continue;
    i64 e = i64((__int128)num * M / L % M);
    tally.add_term(e + mul_mod(mod_reduce(a, q), f.eval_mod(h, q), q) * (M / q));
  }
  BoundCheck out;
  out.lhs = std::abs(tally.value());
  out.rhs = 4.0 * double(d) *
            std::pow(double(q), 1.0 - 1.0 / double(d + 1));
  out.ok = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

}  // namespace mg
