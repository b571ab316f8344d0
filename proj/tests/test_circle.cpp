#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "multigauss/circle.hpp"

using namespace mg;

TEST_CASE("von Mangoldt sieve") {
  auto lam = sieve_von_mangoldt(100);
  CHECK(lam[1] == 0.0);
  CHECK(lam[8] == Catch::Approx(std::log(2.0)));
  CHECK(lam[12] == 0.0);
  CHECK(lam[97] == Catch::Approx(std::log(97.0)));

  // sum of Lambda(n) over n <= 100 equals log lcm(1..100)
  double chebyshev = 0.0;
  for (int n = 1; n <= 100; ++n) chebyshev += lam[std::size_t(n)];
  double log_lcm = 0.0;
  for (i64 p = 2; p <= 100; ++p) {
    if (!is_prime_u64(u64(p))) continue;
    int k = 0;
    for (i64 pk = p; pk <= 100; pk *= p) ++k;
    log_lcm += k * std::log(double(p));
  }
  CHECK(chebyshev == Catch::Approx(log_lcm));

  auto old = caps().sieve_cap;
  caps().sieve_cap = 10;
  CHECK_THROWS_AS(sieve_von_mangoldt(100), capacity_error);
  caps().sieve_cap = old;
}

// grid oracle: no solve-last shortcut, no support pruning
static double brute_count(const FormSystem& S, double X, const BoxSpec& B) {
  int s = S.vars();
  std::vector<i64> lo(static_cast<std::size_t>(s));
  std::vector<i64> hi(static_cast<std::size_t>(s));
  i64 maxhi = 2;
  for (int i = 0; i < s; ++i) {
    lo[std::size_t(i)] = std::max<i64>(
        2, i64(std::ceil(B.sides[std::size_t(i)].first * X - 1e-9)));
    hi[std::size_t(i)] =
        i64(std::floor(B.sides[std::size_t(i)].second * X + 1e-9));
    maxhi = std::max(maxhi, hi[std::size_t(i)]);
  }
  auto lam = sieve_von_mangoldt(maxhi);
  double total = 0.0;
  std::vector<i64> x(lo);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < s; ++i) w *= lam[std::size_t(x[std::size_t(i)])];
    if (w > 0) {
      bool zero = true;
      for (const auto& f : S.forms) {
        i64 v = 0;
        for (const auto& t : f.terms()) {
          i64 m = t.coeff;
          for (int i = 0; i < s; ++i)
            for (int e = 0; e < t.exps[std::size_t(i)]; ++e)
              m *= x[std::size_t(i)];
          v += m;
        }
        if (v != 0) zero = false;
      }
      if (zero) total += w;
    }
    int i = 0;
    while (i < s && ++x[std::size_t(i)] > hi[std::size_t(i)]) {
      x[std::size_t(i)] = lo[std::size_t(i)];
      ++i;
    }
    if (i == s) break;
  }
  return total;
}

TEST_CASE("weighted_solution_count examples") {
  BoxSpec b2;
  b2.sides = {{0.1, 0.9}, {0.1, 0.9}};
  auto diag = parse_system("x1 - x2");
  auto lam = sieve_von_mangoldt(9);
  double expect = 0.0;
  for (int n = 2; n <= 9; ++n)
    expect += lam[std::size_t(n)] * lam[std::size_t(n)];
  CHECK(weighted_solution_count(diag, 10, b2) == Catch::Approx(expect));

  // positive forms have no solutions in a positive box
  auto pos = parse_system("x1 + x2");
  CHECK(weighted_solution_count(pos, 50, BoxSpec::default_box(2)) == 0.0);

  auto S = parse_system("x1 + x2 - 2*x3");
  double n100 = weighted_solution_count(S, 100, BoxSpec::default_box(3));
  CHECK(n100 > 0.0);
  CHECK(n100 == Catch::Approx(brute_count(S, 100, BoxSpec::default_box(3))));
}

TEST_CASE("solve-last agrees with the grid oracle") {
  auto S = parse_system("x1 + x2 - 2*x3");
  for (double X : {60.0, 150.0, 333.0}) {
    auto B = BoxSpec::default_box(3);
    REQUIRE(weighted_solution_count(S, X, B) ==
            Catch::Approx(brute_count(S, X, B)).margin(1e-9));
  }
  auto T = parse_system("x1*x2 - x3^2");  // no linear variable: full grid path
  auto B = BoxSpec::default_box(3);
  REQUIRE(weighted_solution_count(T, 40, B) ==
          Catch::Approx(brute_count(T, 40, B)).margin(1e-9));
}

TEST_CASE("worker determinism for solution counting") {
  auto S = parse_system("x1 + x2 - 2*x3");
  auto B = BoxSpec::default_box(3);
  double a = weighted_solution_count(S, 500, B, 1);
  double b = weighted_solution_count(S, 500, B, 4);
  REQUIRE(a == b);  // bit-identical merge order
}

TEST_CASE("major arc parameters") {
  CHECK(major_arc_Q(256, 1) == Catch::Approx(2.0));
  CHECK(major_arc_Q(6561, 2) == Catch::Approx(std::pow(6561.0, 1.0 / 12)));

  auto S = parse_system("x1 + x2 - 2*x3");
  auto rep = major_arc_report(S, 4096);
  CHECK(rep.Q == Catch::Approx(std::pow(4096.0, 0.125)));
  CHECK(rep.q_max == 2);
  CHECK(rep.measure_bound > 0.0);
  CHECK(rep.measure_bound < 1.0);
  CHECK(rep.disjoint_classical);
  CHECK(rep.disjoint_exact);
}

TEST_CASE("singular series partial sums") {
  auto S1 = parse_system("x1 + x2 - x3");
  auto r1 = singular_series_partial(S1, 1);
  CHECK(r1.value == Catch::Approx(1.0));
  CHECK(r1.last_q == 1);

  auto S2 = parse_system("x1 + x2 - 2*x3");
  auto r50 = singular_series_partial(S2, 50);
  REQUIRE(r50.complete);
  CHECK(std::abs(r50.imag) < 1e-9 * std::max(1.0, std::abs(r50.value)));
  CHECK(r50.value > 0.0);
  CHECK(!r50.obstruction_flag);
  REQUIRE(r50.dyadic.size() >= 4);
  // dyadic increments decrease over the tested range
  CHECK(r50.dyadic.back().second < r50.dyadic.front().second + 1e-12);

  auto r25 = singular_series_partial(S2, 25);
  CHECK(std::abs(r50.value - r25.value) < 0.2 * std::abs(r50.value));

  // odd + odd - odd is odd: a genuine local obstruction at 2
  auto robs = singular_series_partial(S1, 40);
  CHECK(robs.obstruction_flag);
  CHECK(std::abs(robs.value) < 0.05);
}

TEST_CASE("lemma-style absolute sum over multiples of the character modulus") {
  auto S = parse_system("x1 + x2 - x3");
  auto chars = CharacterSystem::principal(1, 3);
  double v = singular_series_lemma_sum(S, chars, 12);
  CHECK(v > 0.0);
  std::vector<DirichletCharacter> cs(3, principal_character(4));
  double v4 = singular_series_lemma_sum(S, CharacterSystem(cs, 4), 12);
  CHECK(v4 >= 0.0);  // only q in {4, 8, 12} contribute
}

TEST_CASE("singular integral against the slab volume") {
  auto S = parse_system("x1 - x2");
  BoxSpec B;
  B.sides = {{0.25, 0.75}, {0.25, 0.75}};
  double eps = 0.05;
  auto est = singular_integral_estimate(S, B, eps, 200000);
  double exact = 0.5 - eps / 4;  // slab volume / eps on a side-1/2 square
  CHECK(est.value == Catch::Approx(exact).epsilon(0.01));
  CHECK(est.sensitivity < 0.02);

  auto S3 = parse_system("x1 + x2 - 2*x3");
  auto e1 = singular_integral_estimate(S3, BoxSpec::default_box(3), 0.05, 200000);
  auto e2 = singular_integral_estimate(S3, BoxSpec::default_box(3), 0.025, 200000);
  CHECK(e1.value > 0.0);
  CHECK(e2.value > 0.0);
  CHECK(e1.value == Catch::Approx(0.125).epsilon(0.05));
  CHECK(e2.value == Catch::Approx(e1.value).epsilon(0.05));
}

TEST_CASE("asymptotic report") {
  auto S = parse_system("x1 + x2 - 2*x3");
  auto rep = asymptotic_report(S, 3000, BoxSpec::default_box(3), i64(50));
  CHECK(rep.dsum == 1);
  CHECK(rep.n_value > 0.0);
  CHECK(rep.predicted > 0.0);
  CHECK(rep.ratio > 0.85);
  CHECK(rep.ratio < 1.15);

  // positive form: the box has no real solutions
  auto pos = parse_system("x1 + x2");
  auto bad = asymptotic_report(pos, 500, BoxSpec::default_box(2), i64(10));
  CHECK(bad.no_real_solutions);
  CHECK(std::isnan(bad.ratio));
}

TEST_CASE("solution count grows with the window") {
  auto S = parse_system("x1 + x2 - 2*x3");
  auto B = BoxSpec::default_box(3);
  double a = weighted_solution_count(S, 1000, B);
  double b = weighted_solution_count(S, 2000, B);
  CHECK(a > 0.0);
  CHECK(b > a);
}
