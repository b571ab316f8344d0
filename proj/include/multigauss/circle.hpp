#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "multigauss/arith.hpp"
#include "multigauss/characters.hpp"
#include "multigauss/common.hpp"
#include "multigauss/expsums.hpp"
#include "multigauss/forms.hpp"

namespace mg {

struct BoxSpec {
  std::vector<std::pair<double, double>> sides;  // (b'_i, b''_i), 0 < b' < b'' < 1

  static BoxSpec default_box(int s) {
    BoxSpec b;
    b.sides.assign(std::size_t(s), {0.25, 0.75});
    return b;
  }

  void validate() const {
    for (auto [lo, hi] : sides)
      if (!(0.0 < lo && lo < hi && hi < 1.0))
        throw domain_error("box: need 0 < b' < b'' < 1");
  }

  double volume() const {
    double v = 1.0;
    for (auto [lo, hi] : sides) v *= hi - lo;
    return v;
  }
};

// Lambda(n) = log p if n = p^k, else 0.
inline std::vector<double> sieve_von_mangoldt(i64 N) {
  if (N < 0) throw domain_error("sieve: negative bound");
  if (N > caps().sieve_cap)
    throw capacity_error("sieve: bound over cap", double(N));
  std::vector<double> lam(std::size_t(N + 1), 0.0);
  std::vector<char> composite(std::size_t(N + 1), 0);
  for (i64 p = 2; p <= N; ++p) {
    if (composite[std::size_t(p)]) continue;
    for (i64 m = p * p; m <= N; m += p) composite[std::size_t(m)] = 1;
    double lp = std::log(double(p));
    for (i64 pk = p; pk <= N; pk *= p) {
      lam[std::size_t(pk)] = lp;
      if (pk > N / p) break;
    }
  }
  return lam;
}

namespace detail {

inline i64 eval_int(const Form& F, const std::vector<i64>& x) {
  i64 acc = 0;
  for (const auto& t : F.terms()) {
    i64 v = t.coeff;
    for (int i = 0; i < F.vars(); ++i)
      for (int e = 0; e < t.exps[std::size_t(i)]; ++e) v *= x[std::size_t(i)];
    acc += v;
  }
  return acc;
}

// A variable occurring in exactly one term, alone and to the first power, can
// be solved for from the remaining coordinates.
inline int solvable_variable(const FormSystem& S) {
  if (S.count() != 1) return -1;
  const Form& f = S.forms[0];
  for (int j = 0; j < f.vars(); ++j) {
    int hits = 0;
    bool clean = true;
    for (const auto& t : f.terms()) {
      if (t.exps[std::size_t(j)] == 0) continue;
      ++hits;
      if (t.exps[std::size_t(j)] != 1) clean = false;
      for (int i = 0; i < f.vars(); ++i)
        if (i != j && t.exps[std::size_t(i)] != 0) clean = false;
    }
    if (hits == 1 && clean) return j;
  }
  return -1;
}

}  // namespace detail

inline double weighted_solution_count(const FormSystem& S, double X,
                                      const BoxSpec& B, int workers = 1) {
  const int s = S.vars();
  if (int(B.sides.size()) != s) throw domain_error("count: box arity mismatch");
  B.validate();
  if (X < 2) return 0.0;

  std::vector<i64> lo(static_cast<std::size_t>(s));
  std::vector<i64> hi(static_cast<std::size_t>(s));
  i64 maxhi = 0;
  for (int i = 0; i < s; ++i) {
    lo[std::size_t(i)] = i64(std::ceil(B.sides[std::size_t(i)].first * X - 1e-9));
    hi[std::size_t(i)] = i64(std::floor(B.sides[std::size_t(i)].second * X + 1e-9));
    lo[std::size_t(i)] = std::max<i64>(lo[std::size_t(i)], 2);  // Lambda(1) = 0
    maxhi = std::max(maxhi, hi[std::size_t(i)]);
  }
  for (int i = 0; i < s; ++i)
    if (lo[std::size_t(i)] > hi[std::size_t(i)]) return 0.0;
  auto lam = sieve_von_mangoldt(maxhi);

  // only prime powers carry weight
  std::vector<std::vector<i64>> support(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i)
    for (i64 n = lo[std::size_t(i)]; n <= hi[std::size_t(i)]; ++n)
      if (lam[std::size_t(n)] > 0) support[std::size_t(i)].push_back(n);
  for (int i = 0; i < s; ++i)
    if (support[std::size_t(i)].empty()) return 0.0;

  int solve = detail::solvable_variable(S);
  if (s == 1) solve = -1;  // nothing left to enumerate
  double work = 1.0;
  for (int i = 0; i < s; ++i)
    if (i != solve) work *= double(support[std::size_t(i)].size());
  if (work > double(caps().term_budget))
    throw capacity_error("count: work cap exceeded", work);

  i64 solve_coeff = 0;
  if (solve >= 0)
    for (const auto& t : S.forms[0].terms())
      if (t.exps[std::size_t(solve)] == 1) solve_coeff = t.coeff;

  std::vector<int> outer;  // enumerated coordinates
  for (int i = 0; i < s; ++i)
    if (i != solve) outer.push_back(i);
  int no = int(outer.size());
  const auto& first = support[std::size_t(outer[0])];

  int nw = int(std::max<i64>(
      1, std::min<i64>(workers <= 0 ? 1 : workers, i64(first.size()))));
  // one partial per outer index so the merge order is worker-independent
  std::vector<double> partial(first.size(), 0.0);
  auto run = [&](int w) {
    std::size_t b = first.size() * std::size_t(w) / std::size_t(nw);
    std::size_t e = first.size() * std::size_t(w + 1) / std::size_t(nw);
    std::vector<i64> x(std::size_t(s), 0);
    std::vector<std::size_t> digits(std::size_t(no - 1), 0);
    for (std::size_t i0 = b; i0 < e; ++i0) {
      KahanSum acc;
      x[std::size_t(outer[0])] = first[i0];
      std::fill(digits.begin(), digits.end(), 0);
      while (true) {
        for (int i = 1; i < no; ++i)
          x[std::size_t(outer[std::size_t(i)])] =
              support[std::size_t(outer[std::size_t(i)])][digits[std::size_t(i - 1)]];
        double wgt = 1.0;
        for (int i = 0; i < no; ++i)
          wgt *= lam[std::size_t(x[std::size_t(outer[std::size_t(i)])])];
        if (solve >= 0) {
          x[std::size_t(solve)] = 0;
          i64 rest = detail::eval_int(S.forms[0], x);
          if (rest % solve_coeff == 0) {
            i64 v = -rest / solve_coeff;
            if (v >= lo[std::size_t(solve)] && v <= hi[std::size_t(solve)] &&
                lam[std::size_t(v)] > 0)
              acc.add(wgt * lam[std::size_t(v)]);
          }
        } else {
          bool zero = true;
          for (const auto& f : S.forms)
            if (detail::eval_int(f, x) != 0) {
              zero = false;
              break;
            }
          if (zero) acc.add(wgt);
        }
        int i = 0;
        while (i < no - 1 &&
               ++digits[std::size_t(i)] ==
                   support[std::size_t(outer[std::size_t(i + 1)])].size()) {
          digits[std::size_t(i)] = 0;
          ++i;
        }
        if (i == no - 1) break;
      }
      partial[i0] = acc.value();
    }
  };
  if (nw == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  KahanSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

inline double major_arc_Q(double X, int R) {
  if (X < 2) throw domain_error("major arcs: need X >= 2");
  return std::pow(X, 1.0 / (4.0 * (R + 1)));
}

struct MajorArcReport {
  double Q = 0.0;
  i64 q_max = 0;
  i64 box_count = 0;
  double measure_bound = 0.0;   // union bound over all boxes
  bool disjoint_exact = true;   // pairwise check at this X
  bool disjoint_classical = true;  // 2 Q^2 <= X^{min d_i}
};

inline MajorArcReport major_arc_report(const FormSystem& S, double X) {
  const int R = S.count();
  MajorArcReport rep;
  rep.Q = major_arc_Q(X, R);
  rep.q_max = i64(std::floor(rep.Q));
  int mind = S.forms[0].degree();
  for (const auto& f : S.forms) mind = std::min(mind, f.degree());
  rep.disjoint_classical = 2.0 * rep.Q * rep.Q <= std::pow(X, double(mind));

  // centers a/q with gcd(a_1,...,a_R,q) = 1; half-widths Q / (q X^{d_i})
  struct Box {
    std::vector<double> c;
    i64 q;
  };
  std::vector<Box> boxes;
  for (i64 q = 1; q <= rep.q_max; ++q) {
    double per_box = 1.0;
    for (const auto& f : S.forms)
      per_box *= 2.0 * rep.Q / (double(q) * std::pow(X, double(f.degree())));
    i64 n_a = 0;
    std::vector<i64> a(std::size_t(R), 0);
    while (true) {
      i64 g = q;
      for (i64 ai : a) g = std::gcd(g, ai);
      if (g == 1 || q == 1) {
        ++n_a;
        Box b;
        b.q = q;
        for (i64 ai : a) b.c.push_back(double(ai) / double(q));
        boxes.push_back(std::move(b));
      }
      int i = 0;
      while (i < R && ++a[std::size_t(i)] == q) {
        a[std::size_t(i)] = 0;
        ++i;
      }
      if (i == R) break;
    }
    rep.measure_bound += double(n_a) * per_box;
  }
  rep.box_count = i64(boxes.size());
  for (std::size_t i = 0; i < boxes.size() && rep.disjoint_exact; ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      bool separated = false;
      for (int k = 0; k < R; ++k) {
        double d = double(S.forms[std::size_t(k)].degree());
        double w = rep.Q / (double(boxes[i].q) * std::pow(X, d)) +
                   rep.Q / (double(boxes[j].q) * std::pow(X, d));
        if (std::abs(boxes[i].c[std::size_t(k)] - boxes[j].c[std::size_t(k)]) >
            w)
          separated = true;
      }
      if (!separated) {
        rep.disjoint_exact = false;
        break;
      }
    }
  return rep;
}

struct SingularSeries {
  double value = 0.0;  // real part of the truncated series
  double imag = 0.0;   // diagnostic; should be ~0 for principal characters
  i64 last_q = 0;      // last modulus fully included
  bool complete = true;
  std::vector<std::pair<i64, double>> dyadic;  // (Q', |S(Q') - S(Q'/2)|)
  bool obstruction_flag = false;
};

inline SingularSeries singular_series_partial(const FormSystem& S, i64 Q,
                                              int workers = 1) {
  const int s = S.vars();
  SingularSeries out;
  KahanSum re, im;
  double max_partial = 0.0;
  i64 next_dyadic = 2;
  double prev_dyadic_value = 0.0;
  for (i64 q = 1; q <= Q; ++q) {
    NuResult nu;
    try {
      nu = nu_sum(S, q, CharacterSystem::principal(q, s), workers);
    } catch (const capacity_error&) {
      out.complete = false;
      break;
    }
    double phis = std::pow(double(euler_phi(q)), double(s));
    re.add(nu.value.real() / phis);
    im.add(nu.value.imag() / phis);
    out.last_q = q;
    max_partial = std::max(max_partial, std::abs(re.value()));
    while (q >= next_dyadic) {
      out.dyadic.push_back(
          {next_dyadic, std::abs(re.value() - prev_dyadic_value)});
      prev_dyadic_value = re.value();
      next_dyadic *= 2;
    }
  }
  out.value = re.value();
  out.imag = im.value();
  out.obstruction_flag =
      max_partial > 0.0 && std::abs(out.value) < 0.05 * std::max(1.0, max_partial);
  return out;
}

// Lemma-style absolute sum restricted to multiples of k0 = lcm of the
// character moduli.
inline double singular_series_lemma_sum(const FormSystem& S,
                                        const CharacterSystem& chars, i64 Q,
                                        int workers = 1) {
  const int s = S.vars();
  i64 k0 = lcm_modulus(chars);
  KahanSum acc;
  for (i64 q = k0; q <= Q; q += k0) {
    auto nu = nu_sum(S, q, chars, workers);
    acc.add(std::abs(nu.value) / std::pow(double(euler_phi(q)), double(s)));
  }
  return acc.value();
}

namespace detail {

inline double radical_inverse(u64 n, u64 base) {
  double inv = 1.0 / double(base), f = inv, x = 0.0;
  while (n > 0) {
    x += double(n % base) * f;
    n /= base;
    f *= inv;
  }
  return x;
}

constexpr u64 kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace detail

struct SingularIntegral {
  double value = 0.0;
  double value_half_eps = 0.0;
  double sensitivity = 0.0;  // |J(eps) - J(eps/2)| / max(|J(eps)|, 1e-12)
  double eps = 0.0;
  i64 samples = 0;
};

inline SingularIntegral singular_integral_estimate(const FormSystem& S,
                                                   const BoxSpec& B, double eps,
                                                   i64 n_samples,
                                                   int workers = 1) {
  const int s = S.vars();
  const int R = S.count();
  if (eps <= 0) throw domain_error("integral: need eps > 0");
  if (R > s) throw domain_error("integral: more forms than variables");
  if (int(B.sides.size()) != s)
    throw domain_error("integral: box arity mismatch");
  if (s > 8) throw domain_error("integral: at most 8 variables supported");
  B.validate();

  int nw = int(std::max<i64>(
      1, std::min<i64>(workers <= 0 ? 1 : workers, n_samples)));
  std::vector<i64> hit(std::size_t(nw), 0), hit_half(std::size_t(nw), 0);
  auto run = [&](int w) {
    i64 b = n_samples * i64(w) / nw, e = n_samples * i64(w + 1) / nw;
    std::vector<double> u(static_cast<std::size_t>(s));
    i64 c = 0, ch = 0;
    for (i64 n = b; n < e; ++n) {
      for (int i = 0; i < s; ++i) {
        double t = detail::radical_inverse(u64(n) + 1, detail::kHaltonBases[i]);
        u[std::size_t(i)] = B.sides[std::size_t(i)].first +
                            (B.sides[std::size_t(i)].second -
                             B.sides[std::size_t(i)].first) *
                                t;
      }
      bool in = true, in_half = true;
      for (const auto& f : S.forms) {
        double v = std::abs(f.eval_real(u));
        if (v > eps / 2) in = false;
        if (v > eps / 4) in_half = false;
        if (!in) break;
      }
      if (in) ++c;
      if (in_half) ++ch;
    }
    hit[std::size_t(w)] = c;
    hit_half[std::size_t(w)] = ch;
  };
  if (nw == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  i64 c = 0, ch = 0;
  for (int w = 0; w < nw; ++w) {
    c += hit[std::size_t(w)];
    ch += hit_half[std::size_t(w)];
  }
  SingularIntegral out;
  out.eps = eps;
  out.samples = n_samples;
  double vol = B.volume();
  out.value = vol * double(c) / double(n_samples) / std::pow(eps, double(R));
  out.value_half_eps =
      vol * double(ch) / double(n_samples) / std::pow(eps / 2, double(R));
  out.sensitivity = std::abs(out.value - out.value_half_eps) /
                    std::max(std::abs(out.value), 1e-12);
  return out;
}

struct AsymptoticReport {
  double X = 0.0;
  double n_value = 0.0;       // N_F(X)
  double sseries = 0.0;       // truncated singular series
  double sintegral = 0.0;     // singular integral estimate
  double predicted = 0.0;     // sseries * sintegral * X^{s - dsum}
  double ratio = 0.0;         // NaN when no real solutions
  double Q = 0.0;
  int dsum = 0;
  bool no_real_solutions = false;
  SingularSeries series_detail;
  SingularIntegral integral_detail;
};

inline AsymptoticReport asymptotic_report(const FormSystem& S, double X,
                                          const BoxSpec& B,
                                          std::optional<i64> Q_override = {},
                                          double eps = 0.05,
                                          i64 n_samples = 200000,
                                          int workers = 1) {
  const int s = S.vars();
  AsymptoticReport rep;
  rep.X = X;
  rep.dsum = S.degree_sum();
  rep.Q = major_arc_Q(X, S.count());
  i64 Q = Q_override ? *Q_override : i64(std::floor(rep.Q));
  rep.n_value = weighted_solution_count(S, X, B, workers);
  rep.series_detail = singular_series_partial(S, Q, workers);
  rep.sseries = rep.series_detail.value;
  rep.integral_detail = singular_integral_estimate(S, B, eps, n_samples, workers);
  rep.sintegral = rep.integral_detail.value;
  rep.predicted =
      rep.sseries * rep.sintegral * std::pow(X, double(s - rep.dsum));
  if (rep.predicted <= 0.0 || rep.sintegral == 0.0) {
    rep.no_real_solutions = rep.sintegral == 0.0;
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.ratio = rep.n_value / rep.predicted;
  }
  return rep;
}

}  // namespace mg
