#pragma once

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "multigauss/circle.hpp"
#include "multigauss/expsums.hpp"
#include "multigauss/geometry.hpp"

namespace mg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  std::string payload;  // deterministic per-instance record, for replay checks
  double seconds = 0.0;
};

namespace acceptance_detail {

inline std::string fmt15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline u64 tally_hash(const CyclotomicTally& t) {
  u64 h = 1469598103934665603ull;
  auto mix = [&](u64 v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(u64(t.order()));
  for (i64 c : t.counts()) mix(u64(c));
  return h;
}

class Timer {
 public:
  double elapsed() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

inline DirichletCharacter random_character(std::mt19937_64& rng, i64 q) {
  auto chars = enumerate_characters(q);
  return chars[rng() % chars.size()];
}

}  // namespace acceptance_detail

// 1. Exact orthogonality of every character mod q <= 200.
inline CriterionResult criterion_orthogonality() {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{1, "character orthogonality", true, "", "", 0.0};
  i64 checked = 0;
  for (i64 q = 1; q <= 200 && res.pass; ++q) {
    i64 phi = shared_unit_group(q)->phi();
    for (const auto& chi : enumerate_characters(q)) {
      CyclotomicTally t(chi.value_denominator());
      for (i64 h = 0; h < q; ++h) {
        i64 num = chi.value_numerator(h);
        if (num >= 0) t.add_term(num);
      }
      bool good = chi.is_principal()
                      ? (t.counts()[0] == phi && t.term_count() == phi)
                      : t.is_zero_exact();
      ++checked;
      if (!good) {
        res.pass = false;
        res.detail = "failed at q=" + std::to_string(q);
        break;
      }
    }
  }
  if (res.pass)
    res.detail = std::to_string(checked) + " characters, all sums exact";
  res.seconds = timer.elapsed();
  return res;
}

// 2. CRT factorization equals brute force as integer tallies.
inline CriterionResult criterion_crt(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{2, "crt factorization", true, "", "", 0.0};
  std::mt19937_64 rng(20240201);
  const std::vector<std::string> systems = {
      "x1",           "x1^2",          "x1^3",
      "x1 + 2*x2",    "x1^2 + x2^2",   "x1*x2",
      "x1^2*x2 - x2^3", "x1*x2; x1^3", "x1^2 + x2^2 + x3^2",
      "x1*x2*x3"};
  std::ostringstream payload;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& txt = systems[rng() % systems.size()];
    auto S = parse_system(txt);
    int s = S.vars();
    i64 qmax = s >= 3 ? 84 : 400;
    i64 q;
    do {
      q = 4 + i64(rng() % u64(qmax - 3));
    } while (is_prime_u64(u64(q)) || factorize(q).factors.size() < 2);
    GaussSumInstance inst;
    inst.system = S;
    inst.q = q;
    for (int j = 0; j < S.count(); ++j) inst.a.push_back(i64(rng() % u64(q)));
    std::vector<DirichletCharacter> cs;
    for (int i = 0; i < s; ++i) cs.push_back(random_character(rng, q));
    inst.chars = CharacterSystem(std::move(cs), q);

    auto rb = gauss_sum_bruteforce(inst, workers);
    auto rc = gauss_sum_crt(inst, workers);
    bool same = rc.tally->identical(*rb.tally);
    payload << trial << ',' << q << ',' << txt << ','
            << fmt15(rb.value.real()) << ',' << fmt15(rb.value.imag()) << ','
            << tally_hash(*rb.tally) << '\n';
    if (!same) {
      res.pass = false;
      res.detail = "mismatch at trial " + std::to_string(trial) +
                   " (q=" + std::to_string(q) + ", " + txt + ")";
      break;
    }
  }
  if (res.pass) res.detail = "200 instances, tallies identical";
  res.payload = payload.str();
  res.seconds = timer.elapsed();
  return res;
}

// 3. Fourth-power inequality from two Cauchy-Schwarz steps.
inline CriterionResult criterion_cauchy(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{3, "fourth power inequality", true, "", "", 0.0};
  std::mt19937_64 rng(20240203);
  const std::vector<std::string> systems = {"x1",      "x1^2",        "x1^3",
                                            "x1 + 2*x2", "x1^2 + x2^2", "x1*x2",
                                            "x1^2*x2 - x2^3"};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& txt = systems[rng() % systems.size()];
    auto S = parse_system(txt);
    i64 q = 2 + i64(rng() % 12);
    GaussSumInstance inst;
    inst.system = S;
    inst.q = q;
    for (int j = 0; j < S.count(); ++j) inst.a.push_back(i64(rng() % u64(q)));
    std::vector<DirichletCharacter> cs;
    for (int i = 0; i < S.vars(); ++i) cs.push_back(random_character(rng, q));
    inst.chars = CharacterSystem(std::move(cs), q);
    auto chk = cauchy_fourth_check(inst, workers);
    if (chk.rhs > 0) worst = std::max(worst, chk.lhs / chk.rhs);
    if (!chk.ok) {
      res.pass = false;
      res.detail = "violation at trial " + std::to_string(trial) +
                   " (q=" + std::to_string(q) + ", " + txt +
                   "): lhs=" + fmt15(chk.lhs) + " rhs=" + fmt15(chk.rhs);
      break;
    }
  }
  if (res.pass)
    res.detail = "50 instances, max lhs/rhs = " + fmt15(worst);
  res.seconds = timer.elapsed();
  return res;
}

// 4. Prime-power bound for one-variable sums, all characters.
inline CriterionResult criterion_prime_power_bound() {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{4, "prime power bound", true, "", "", 0.0};
  std::mt19937_64 rng(20240204);
  std::vector<std::pair<i64, int>> prime_powers;
  for (i64 p = 2; p <= 343; ++p) {
    if (!is_prime_u64(u64(p))) continue;
    i64 q = p;
    int t = 1;
    while (q <= 343) {
      prime_powers.push_back({p, t});
      if (q > 343 / p) break;
      q *= p;
      ++t;
    }
  }
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    auto [p, t] = prime_powers[rng() % prime_powers.size()];
    i64 q = 1;
    for (int i = 0; i < t; ++i) q *= p;
    int d = 1 + int(rng() % 4);
    Poly1 f;
    f.coeffs.assign(std::size_t(d + 1), 0);
    for (int i = 0; i <= d; ++i) f.coeffs[std::size_t(i)] = i64(rng() % 7) - 3;
    do {
      f.coeffs[std::size_t(d)] = i64(rng() % 7) - 3;
    } while (f.coeffs[std::size_t(d)] % p == 0);  // leading coeff a unit mod p
    i64 a;
    do {
      a = 1 + i64(rng() % u64(q - 1));
    } while (std::gcd(a, q) != 1);
    for (const auto& chi : enumerate_characters(q)) {
      auto chk = cochrane_zheng_check(f, p, t, a, chi);
      if (chk.rhs > 0) worst = std::max(worst, chk.lhs / chk.rhs);
      if (!chk.ok) {
        res.pass = false;
        res.detail = "violation at trial " + std::to_string(trial) +
                     " (q=" + std::to_string(q) + "): lhs=" + fmt15(chk.lhs) +
                     " rhs=" + fmt15(chk.rhs);
        break;
      }
    }
    if (!res.pass) break;
  }
  if (res.pass)
    res.detail = "500 polynomials, max |C|/bound = " + fmt15(worst);
  res.seconds = timer.elapsed();
  return res;
}

// 5. Exact magnitudes of normalized quadratic sums.
inline CriterionResult criterion_quadratic_sums() {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{5, "quadratic sums", true, "", "", 0.0};
  auto sq = parse_system("x1^2").forms[0];
  for (i64 p = 3; p <= 97 && res.pass; ++p) {
    if (!is_prime_u64(u64(p))) continue;
    double got = std::abs(normalized_complete_sum(sq, p));
    double want = 1.0 / std::sqrt(double(p));
    if (std::abs(got - want) > 1e-9 * want) {
      res.pass = false;
      res.detail = "one-variable mismatch at p=" + std::to_string(p);
    }
  }
  auto q3 = parse_system("x1^2 + x2^2 + x3^2").forms[0];
  for (i64 p = 3; p <= 11 && res.pass; ++p) {
    if (!is_prime_u64(u64(p))) continue;
    double got = std::abs(normalized_complete_sum(q3, p));
    double want = std::pow(double(p), -1.5);
    if (std::abs(got - want) > 1e-9 * want) {
      res.pass = false;
      res.detail = "three-variable mismatch at p=" + std::to_string(p);
    }
  }
  if (res.pass) res.detail = "p^{-1/2} and p^{-3/2} magnitudes exact to 1e-9";
  res.seconds = timer.elapsed();
  return res;
}

// 6. Decay exponent of single-form normalized sums.
inline CriterionResult criterion_single_form_exponent() {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{6, "single form exponent", true, "", "", 0.0};
  struct Case {
    const char* txt;
    int d;
  };
  const std::vector<Case> cases = {
      {"x1^2", 2},
      {"x1^3", 3},
      {"x1^2 + x2^2", 2},
      {"x1^3 + x2^3", 3},
      {"x1^2 + 2*x2^2", 2},
      {"x1^2 + 3*x2^2", 2},
      {"x1^2 + x2^2 + x3^2", 2},
      {"x1^3 + x2^3 + x3^3", 3},
      {"x1^2 + x2^2 + 2*x3^2", 2},
      {"x1^3 + 2*x2^3 + x3^3", 3}};
  const std::vector<i64> primes = {11, 31, 53, 97};
  double worst_gap = -1e9;
  for (const auto& c : cases) {
    auto F = parse_system(c.txt).forms[0];
    int s = F.vars();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (i64 p : primes) {
      double e = std::abs(normalized_complete_sum(F, p));
      if (e < 1e-12) continue;  // exact cancellation up to rounding
      double lx = std::log(double(p)), ly = std::log(e);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (n < 2) continue;  // vanishes at nearly every prime: decay is immediate
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double bound = -theta(c.d, ThetaMode::unconditional) * s + 0.15;
    worst_gap = std::max(worst_gap, slope - bound);
    if (slope > bound) {
      res.pass = false;
      res.detail = std::string("slope too large for ") + c.txt + ": " +
                   fmt15(slope) + " > " + fmt15(bound);
      break;
    }
  }
  if (res.pass)
    res.detail = "10 forms, max slope-bound gap = " + fmt15(worst_gap);
  res.seconds = timer.elapsed();
  return res;
}

// 7. System exponent bound at the top of a prime sweep.
inline CriterionResult criterion_system_exponent(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{7, "system exponent", true, "", "", 0.0};
  std::mt19937_64 rng(20240207);
  const std::vector<std::string> systems = {
      "x1^2",
      "x1^3",
      "x1^2 + x2^2",
      "x1^3 + x2^3",
      "x1^2 + 2*x2^2",
      "x1^2 + x2^2 + x3^2",
      "x1^3 + x2^3 + x3^3",
      "x1^2 + x2^2 + 2*x3^2",
      "x1^2 + x2^2 + x3^2 + x4^2",
      "x1^3 + x2^3 + x3^3 + x4^3"};
  const std::vector<i64> sweep = {11, 31, 97};
  std::ostringstream payload;
  for (const auto& txt : systems) {
    auto S = parse_system(txt);
    int s = S.vars();
    GaussSumReport top;
    for (i64 p : sweep) {
      GaussSumInstance inst;
      inst.system = S;
      inst.q = p;
      inst.a = {1 + i64(rng() % u64(p - 1))};
      std::vector<DirichletCharacter> cs;
      for (int i = 0; i < s; ++i) cs.push_back(random_character(rng, p));
      inst.chars = CharacterSystem(std::move(cs), p);
      // nonsingular diagonal systems: dim V* = 0
      auto rep = exponent_report(inst, 0, ThetaMode::unconditional, 0.25, workers);
      payload << txt << ',' << p << ',' << fmt15(rep.value.real()) << ','
              << fmt15(rep.value.imag()) << ',' << fmt15(rep.magnitude) << ','
              << fmt15(rep.empirical_exponent) << ','
              << fmt15(rep.theoretical_exponent) << '\n';
      if (p == sweep.back()) top = rep;
    }
    if (!(top.empirical_exponent <= top.theoretical_exponent + 0.25)) {
      res.pass = false;
      res.detail = std::string("bound exceeded for ") + txt + ": " +
                   fmt15(top.empirical_exponent) + " > " +
                   fmt15(top.theoretical_exponent) + " + 0.25";
      break;
    }
  }
  if (res.pass) res.detail = "10 systems within slack 0.25 at p=97";
  res.payload = payload.str();
  res.seconds = timer.elapsed();
  return res;
}

// 8. Dimension chain inequalities.
inline CriterionResult criterion_dimension_chain(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{8, "dimension chain", true, "", "", 0.0};
  const std::vector<std::string> systems = {
      "x1^2 + x2^2 + x3^2", "x1*x2 + x3^2", "x1^2 + x2^2; x3^2 + x4^2",
      "x1^3 + x2^3 + x3^3", "x1*x2; x3*x4"};
  for (const auto& txt : systems) {
    auto rep = verify_chain_claims(parse_system(txt), {11, 13, 17}, workers);
    if (!rep.complete || !rep.all_ok()) {
      res.pass = false;
      res.detail = "chain inequalities failed for " + txt;
      break;
    }
  }
  if (res.pass) res.detail = "5 systems, all chain inequalities hold";
  res.seconds = timer.elapsed();
  return res;
}

// 9. Codimension lower bound after bihomogenizing.
inline CriterionResult criterion_codimension(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{9, "codimension bound", true, "", "", 0.0};
  const std::vector<std::string> systems = {"x1^2 + x2^2", "x1*x2",
                                            "x1^2 + x2^2 + x3^2"};
  std::ostringstream detail;
  for (const auto& txt : systems) {
    auto rep = verify_codim_proposition(parse_system(txt), {11, 13}, workers);
    detail << txt << ": min codim " << std::min(rep.codim_g1, rep.codim_g2)
           << " >= " << fmt15(rep.bound) << "; ";
    if (!rep.ok) {
      res.pass = false;
      res.detail = "codimension bound failed for " + txt;
      break;
    }
  }
  if (res.pass) res.detail = detail.str();
  res.seconds = timer.elapsed();
  return res;
}

// 10. Prime-weighted count against the local-density prediction.
inline CriterionResult criterion_prime_asymptotic(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{10, "prime asymptotic", true, "", "", 0.0};
  auto S = parse_system("x1 + x2 - 2*x3");
  auto B = BoxSpec::default_box(3);
  auto r3 = asymptotic_report(S, 3000, B, i64(50), 0.05, 200000, workers);
  auto r6 = asymptotic_report(S, 6000, B, i64(50), 0.05, 200000, workers);
  std::ostringstream payload;
  for (const auto* r : {&r3, &r6})
    payload << fmt15(r->X) << ',' << fmt15(r->n_value) << ','
            << fmt15(r->sseries) << ',' << fmt15(r->sintegral) << ','
            << fmt15(r->predicted) << ',' << fmt15(r->ratio) << '\n';
  res.payload = payload.str();
  if (!(r3.ratio >= 0.85 && r3.ratio <= 1.15)) {
    res.pass = false;
    res.detail = "ratio at X=3000 out of range: " + fmt15(r3.ratio);
  } else if (!(std::abs(r6.ratio - 1.0) <= std::abs(r3.ratio - 1.0) + 0.02)) {
    res.pass = false;
    res.detail = "ratio drift grew: X=3000 -> " + fmt15(r3.ratio) +
                 ", X=6000 -> " + fmt15(r6.ratio);
  } else {
    res.detail = "ratio " + fmt15(r3.ratio) + " at X=3000, " + fmt15(r6.ratio) +
                 " at X=6000";
  }
  res.seconds = timer.elapsed();
  return res;
}

// 11. Multiplicativity of nu and the restricted absolute sum.
inline CriterionResult criterion_nu(int workers = 1) {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{11, "nu multiplicativity", true, "", "", 0.0};
  std::mt19937_64 rng(20240211);
  const std::vector<std::string> systems = {"x1 + x2", "x1^2 + x2^2", "x1*x2",
                                            "x1 + x2 - x3"};
  const std::vector<std::pair<i64, i64>> pairs = {
      {3, 5}, {4, 9}, {8, 3}, {5, 9}, {4, 25}, {7, 4}, {9, 8}, {3, 16}};
  for (int trial = 0; trial < 50; ++trial) {
    auto [q1, q2] = pairs[rng() % pairs.size()];
    i64 q = q1 * q2;
    auto S = parse_system(systems[rng() % systems.size()]);
    std::vector<DirichletCharacter> cs;
    for (int i = 0; i < S.vars(); ++i) cs.push_back(random_character(rng, q));
    auto nu = nu_sum(S, q, CharacterSystem(cs, q), workers);
    std::vector<DirichletCharacter> cs1, cs2;
    for (const auto& chi : cs) {
      auto [a1, a2] = split_character(chi, q1, q2);
      cs1.push_back(std::move(a1));
      cs2.push_back(std::move(a2));
    }
    auto nu1 = nu_sum(S, q1, CharacterSystem(cs1, q1), workers);
    auto nu2 = nu_sum(S, q2, CharacterSystem(cs2, q2), workers);
    if (!tally_convolve(nu1.tally, nu2.tally).equals_exact(nu.tally)) {
      res.pass = false;
      res.detail = "multiplicativity failed at trial " + std::to_string(trial) +
                   " (q=" + std::to_string(q1) + "*" + std::to_string(q2) + ")";
      break;
    }
  }
  if (res.pass) {
    auto S = parse_system("x1 + x2 - x3");
    for (i64 k0 : {1, 2, 3, 4, 5}) {
      std::vector<DirichletCharacter> cs;
      for (int i = 0; i < 3; ++i) cs.push_back(random_character(rng, k0));
      double v =
          singular_series_lemma_sum(S, CharacterSystem(cs, k0), 100, workers);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        res.pass = false;
        res.detail = "restricted sum failed for k0=" + std::to_string(k0);
        break;
      }
    }
  }
  if (res.pass)
    res.detail = "50 coprime pairs exact; restricted sums finite for 5 systems";
  res.seconds = timer.elapsed();
  return res;
}

// 12. Worker-count determinism of the heavy criteria.
inline CriterionResult criterion_determinism() {
  using namespace acceptance_detail;
  Timer timer;
  CriterionResult res{12, "determinism", true, "", "", 0.0};
  struct Pair {
    const char* what;
    CriterionResult a, b;
  };
  std::vector<Pair> runs;
  runs.push_back({"crt", criterion_crt(1), criterion_crt(4)});
  runs.push_back(
      {"exponent", criterion_system_exponent(1), criterion_system_exponent(4)});
  runs.push_back({"asymptotic", criterion_prime_asymptotic(1),
                  criterion_prime_asymptotic(4)});
  for (const auto& r : runs) {
    if (r.a.payload != r.b.payload || r.a.pass != r.b.pass) {
      res.pass = false;
      res.detail = std::string("payload differs between workers 1 and 4: ") +
                   r.what;
      break;
    }
  }
  if (res.pass) res.detail = "criteria 2, 7, 10 byte-identical at workers 1 and 4";
  res.seconds = timer.elapsed();
  return res;
}

inline std::vector<CriterionResult> run_acceptance(int workers = 1) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_orthogonality());
  out.push_back(criterion_crt(workers));
  out.push_back(criterion_cauchy(workers));
  out.push_back(criterion_prime_power_bound());
  out.push_back(criterion_quadratic_sums());
  out.push_back(criterion_single_form_exponent());
  out.push_back(criterion_system_exponent(workers));
  out.push_back(criterion_dimension_chain(workers));
  out.push_back(criterion_codimension(workers));
  out.push_back(criterion_prime_asymptotic(workers));
  out.push_back(criterion_nu(workers));
  out.push_back(criterion_determinism());
  return out;
}

}  // namespace mg
