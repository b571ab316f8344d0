#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "multigauss/geometry.hpp"

using namespace mg;

static VarietySpec affine_space(int n) {
  VarietySpec V;
  V.n = n;
  return V;
}

TEST_CASE("point_count_mod_p examples") {
  CHECK(point_count_mod_p(affine_space(2), 7) == 49);

  VarietySpec line = affine_space(2);
  line.equations.push_back(parse_system("x1").forms[0]);
  CHECK(point_count_mod_p(line, 11) == 11);

  // nonsingular quadric: singular locus is the origin
  auto V = singular_locus_spec(parse_system("x1^2 + x2^2 + x3^2"));
  CHECK(point_count_mod_p(V, 5) == 1);
}

TEST_CASE("point_count matches p^n on affine space") {
  for (int n = 0; n <= 4; ++n)
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19}) {
      i64 expect = 1;
      for (int i = 0; i < n; ++i) expect *= p;
      REQUIRE(point_count_mod_p(affine_space(n), p) == expect);
    }
}

TEST_CASE("adding an equation never increases the count") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + int(rng() % 2);
    i64 p = (trial % 2) ? 5 : 7;
    VarietySpec V = affine_space(n);
    i64 prev = point_count_mod_p(V, p);
    for (int step = 0; step < 3; ++step) {
      std::vector<Term> terms;
      Term t;
      t.coeff = 1 + i64(rng() % 4);
      t.exps.assign(std::size_t(n), 0);
      int d = 1 + int(rng() % 2);
      for (int i = 0; i < d; ++i) t.exps[rng() % u64(n)] += 1;
      terms.push_back(t);
      V.equations.emplace_back(n, std::move(terms), d);
      i64 cur = point_count_mod_p(V, p);
      REQUIRE(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("dim_estimate examples") {
  auto e3 = dim_estimate(affine_space(3));
  CHECK(e3.dim == 3);
  CHECK(e3.residual < 1e-9);

  VarietySpec cross = affine_space(2);
  cross.equations.push_back(parse_system("x1*x2").forms[0]);
  auto ec = dim_estimate(cross);
  CHECK(ec.dim == 1);  // count 2p - 1 at every prime
  for (auto [p, c] : ec.per_prime_counts) REQUIRE(c == 2 * p - 1);

  auto e0 = dim_estimate(singular_locus_spec(parse_system("x1*x2")));
  CHECK(e0.dim == 0);

  // empty variety: 1 = 0 has no solutions
  VarietySpec empty = affine_space(1);
  {
    Term one;
    one.coeff = 1;
    one.exps = {0};
    empty.equations.emplace_back(1, std::vector<Term>{one}, 0);
  }
  auto ee = dim_estimate(empty);
  CHECK(ee.dim == -1);

  CHECK_THROWS_AS(dim_estimate(affine_space(1), {11}), domain_error);
}

TEST_CASE("dim_estimate is exact on linear subspaces") {
  for (int n = 1; n <= 4; ++n)
    for (int codim = 0; codim <= n; ++codim) {
      VarietySpec V = affine_space(n);
      for (int i = 0; i < codim; ++i) V.coordinate_constraints.push_back(i);
      auto est = dim_estimate(V);
      REQUIRE(est.dim == n - codim);
      REQUIRE(est.residual < 1e-9);
    }
}

TEST_CASE("singular_locus_spec examples") {
  auto S5 = parse_system("x1^2 + x2^2 + x3^2 + x4^2 + x5^2");
  auto V5 = singular_locus_spec(S5);
  CHECK(V5.n == 5);
  CHECK(V5.equations.empty());
  REQUIRE(V5.rank_condition);
  CHECK(V5.rank_condition->bound == 1);
  CHECK(point_count_mod_p(V5, 3) == 1);

  // two split quadrics: rank < 2 means one gradient row vanishes
  auto Spl = parse_system("x1^2 + x2^2; x3^2 + x4^2");
  auto Vpl = singular_locus_spec(Spl);
  for (i64 p : {5, 7})
    REQUIRE(point_count_mod_p(Vpl, p) == 2 * p * p - 1);
  CHECK(dim_estimate(Vpl, {5, 7, 11, 13}).dim == 2);
}

TEST_CASE("nonsingular diagonal forms have zero-dimensional singular locus") {
  for (const char* txt : {"x1^2 + 3*x2^2", "x1^3 + x2^3 + 2*x3^3",
                          "x1^4 + x2^4 + x3^4 + x4^4"}) {
    auto S = parse_system(txt);
    auto V = singular_locus_spec(S);
    for (i64 p : filter_primes(S, {5, 7, 11, 13}))
      REQUIRE(point_count_mod_p(V, p) == 1);
  }
}

TEST_CASE("chain_varieties examples") {
  auto S = parse_system("x1^2 + x2^2 + x3^2");

  // T_s is the singular locus spec, structurally
  auto [Ts, Us] = chain_varieties(S, 3);
  CHECK(specs_identical(Ts, singular_locus_spec(S)));

  auto [T1, U1] = chain_varieties(S, 1);
  CHECK(T1.coordinate_constraints == std::vector<int>{1, 2});
  CHECK(point_count_mod_p(T1, 7) == 1);
  CHECK(dim_estimate(T1).dim == 0);

  auto C = parse_system("x1*x2");
  auto [Tc, Uc] = chain_varieties(C, 1);
  for (i64 p : {5, 11}) REQUIRE(point_count_mod_p(Tc, p) == p);
  CHECK(dim_estimate(Tc).dim == 1);

  CHECK_THROWS_AS(chain_varieties(S, 0), domain_error);
  CHECK_THROWS_AS(chain_varieties(S, 4), domain_error);
}

TEST_CASE("verify_chain_claims") {
  auto r1 = verify_chain_claims(parse_system("x1^2 + x2^2 + x3^2"));
  REQUIRE(r1.complete);
  for (const auto& t : r1.t_est) {
    REQUIRE(t);
    REQUIRE(t->dim == 0);
  }
  CHECK(r1.dim_v_star == 0);
  CHECK(r1.all_ok());

  auto r2 = verify_chain_claims(parse_system("x1*x2 + x3^2"), {11, 13});
  REQUIRE(r2.complete);
  CHECK(r2.all_ok());

  auto r3 = verify_chain_claims(parse_system("x1^2 + x2^2; x3^2 + x4^2"),
                                {5, 7, 11, 13});
  REQUIRE(r3.complete);
  CHECK(r3.claim2_bound == Catch::Approx((2.0 * 4 + 2) / 3));
  CHECK(r3.all_ok());
}

TEST_CASE("verify_codim_proposition") {
  auto r1 = verify_codim_proposition(parse_system("x1^2 + x2^2"));
  CHECK(r1.codim_f == 2);
  CHECK(r1.bound == Catch::Approx(1.0));
  CHECK(r1.codim_g1 == 2);
  CHECK(r1.ok);

  auto r2 = verify_codim_proposition(parse_system("x1*x2"));
  CHECK(r2.codim_f == 2);
  CHECK(r2.bound == Catch::Approx(1.0));
  CHECK(r2.ok);

  // degenerate one-variable case: bound 1/2
  auto r3 = verify_codim_proposition(parse_system("x1^2"));
  CHECK(r3.codim_f == 1);
  CHECK(r3.bound == Catch::Approx(0.5));
  CHECK(r3.ok);
}

TEST_CASE("bad prime filter") {
  auto S = parse_system("2*x1^3 + 3*x2^3");
  auto good = filter_primes(S, {2, 3, 5, 7, 11, 13});
  CHECK(good == std::vector<i64>{5, 7, 11, 13});
}

TEST_CASE("worker determinism and capacity") {
  auto V = singular_locus_spec(parse_system("x1*x2 + x3^2"));
  for (i64 p : {7, 11, 13})
    REQUIRE(point_count_mod_p(V, p, 1) == point_count_mod_p(V, p, 4));

  auto old = caps().term_budget;
  caps().term_budget = 100;
  CHECK_THROWS_AS(point_count_mod_p(affine_space(3), 11), capacity_error);
  caps().term_budget = old;
}
