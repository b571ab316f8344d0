#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "multigauss/expsums.hpp"

using namespace mg;

static GaussSumInstance make_instance(const std::string& system, i64 q,
                                      std::vector<i64> a,
                                      std::vector<DirichletCharacter> chars) {
  GaussSumInstance inst;
  inst.system = parse_system(system);
  inst.q = q;
  inst.a = std::move(a);
  inst.chars = CharacterSystem(std::move(chars), q);
  return inst;
}

TEST_CASE("gauss_sum_bruteforce examples") {
  // F=x, q=3, principal chi: sum over units of e(h/3) = -1
  auto r1 = gauss_sum_bruteforce(make_instance("x1", 3, {1}, {principal_character(3)}));
  CHECK(r1.value.real() == Catch::Approx(-1.0).margin(1e-12));
  CHECK(std::abs(r1.value.imag()) < 1e-12);

  // F=x, q=5, Legendre character: |C| = sqrt(5)
  for (const auto& chi : enumerate_characters(5)) {
    if (chi.order() != 2) continue;
    auto r2 = gauss_sum_bruteforce(make_instance("x1", 5, {1}, {chi}));
    CHECK(r2.magnitude == Catch::Approx(std::sqrt(5.0)).epsilon(1e-9));
  }

  // a = 0, principal characters: value phi(q)^s
  auto r3 = gauss_sum_bruteforce(make_instance(
      "x1^2 + x2^2", 9, {0}, {principal_character(9), principal_character(9)}));
  CHECK(r3.value.real() == Catch::Approx(36.0).margin(1e-9));  // phi(9)^2

  // q = 1 convention
  auto r4 = gauss_sum_bruteforce(make_instance("x1", 1, {0}, {principal_character(1)}));
  CHECK(r4.value.real() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("trivial bound and worker determinism") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    i64 q = 2 + i64(rng() % 30);
    auto chars = enumerate_characters(q);
    auto inst = make_instance("x1^2 + x2*x1; x2^3", q,
                              {1 + i64(rng() % (u64(q))), i64(rng() % u64(q))},
                              {chars[rng() % chars.size()], chars[rng() % chars.size()]});
    auto r1 = gauss_sum_bruteforce(inst, 1);
    auto r4 = gauss_sum_bruteforce(inst, 4);
    REQUIRE(r1.tally->identical(*r4.tally));
    REQUIRE(r1.magnitude <= std::pow(double(q), 2.0) * (1 + 1e-12));
  }
}

TEST_CASE("gauss_sum_crt equals bruteforce exactly") {
  // Ramanujan-type sum q = 15
  auto i15 = make_instance("x1", 15, {1}, {principal_character(15)});
  auto b = gauss_sum_bruteforce(i15);
  auto c = gauss_sum_crt(i15);
  CHECK(c.tally->identical(*b.tally));

  std::mt19937_64 rng(17);
  std::vector<std::string> systems = {"x1", "x1^2 + x2^2", "x1*x2; x1^3",
                                      "x1^2*x2 - x2^3", "x1 + 2*x2"};
  for (int trial = 0; trial < 25; ++trial) {
    i64 q;
    do {
      q = 6 + i64(rng() % 95);
    } while (factorize(q).factors.size() < 2);
    const auto& sys = systems[rng() % systems.size()];
    auto S = parse_system(sys);
    std::vector<i64> a;
    for (int j = 0; j < S.count(); ++j) a.push_back(i64(rng() % u64(q)));
    auto chars = enumerate_characters(q);
    std::vector<DirichletCharacter> cs;
    for (int i = 0; i < S.vars(); ++i) cs.push_back(chars[rng() % chars.size()]);
    auto inst = make_instance(sys, q, a, cs);
    auto rb = gauss_sum_bruteforce(inst);
    auto rc = gauss_sum_crt(inst);
    REQUIRE(rc.tally->identical(*rb.tally));
  }
}

TEST_CASE("conjugation symmetry at tally level") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    i64 q = 3 + i64(rng() % 28);
    auto chars = enumerate_characters(q);
    const auto& chi = chars[rng() % chars.size()];
    i64 a = 1 + i64(rng() % u64(q - 1));
    auto r = gauss_sum_bruteforce(make_instance("x1^2", q, {a}, {chi}));
    auto rbar = gauss_sum_bruteforce(
        make_instance("x1^2", q, {mod_reduce(-a, q)}, {chi.conjugated()}));
    REQUIRE(rbar.tally->identical(r.tally->conjugated()));
  }
}

TEST_CASE("normalized complete sums") {
  // nonzero linear form: exact zero by orthogonality
  auto F = parse_system("x1 + 2*x2").forms[0];
  CHECK(std::abs(normalized_complete_sum(F, 7)) < 1e-12);

  // |E_{x^2}(p)| = p^{-1/2}
  auto sq = parse_system("x1^2").forms[0];
  for (i64 p : {3, 5, 7, 11, 13, 97}) {
    CHECK(std::abs(normalized_complete_sum(sq, p)) ==
          Catch::Approx(1.0 / std::sqrt(double(p))).epsilon(1e-9));
  }

  // |E_{x1^2+x2^2+x3^2}(p)| = p^{-3/2}
  auto q3 = parse_system("x1^2 + x2^2 + x3^2").forms[0];
  for (i64 p : {3, 5, 7, 11}) {
    CHECK(std::abs(normalized_complete_sum(q3, p)) ==
          Catch::Approx(std::pow(double(p), -1.5)).epsilon(1e-9));
  }
}

TEST_CASE("nu_sum examples and multiplicativity") {
  // S = x1+x2, q=2, principal: single admissible a=1, h=(1,1), e(2/2)=1
  {
    auto S = parse_system("x1 + x2");
    auto nu = nu_sum(S, 2, CharacterSystem::principal(2, 2));
    CHECK(nu.value.real() == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(nu.value.imag()) < 1e-12);
  }
  // q = 1: single empty term
  {
    auto S = parse_system("x1 + x2");
    auto nu = nu_sum(S, 1, CharacterSystem::principal(1, 2));
    CHECK(nu.value.real() == Catch::Approx(1.0).margin(1e-12));
  }
  // nu(15) = nu(3) nu(5) for principal characters
  {
    auto S = parse_system("x1 + x2");
    auto n15 = nu_sum(S, 15, CharacterSystem::principal(15, 2));
    auto n3 = nu_sum(S, 3, CharacterSystem::principal(3, 2));
    auto n5 = nu_sum(S, 5, CharacterSystem::principal(5, 2));
    auto prod = tally_convolve(n3.tally, n5.tally);
    REQUIRE(prod.equals_exact(n15.tally));
  }
}

TEST_CASE("nu multiplicativity with split characters, randomized") {
  std::mt19937_64 rng(31);
  std::vector<std::string> systems = {"x1 + x2", "x1^2 + x2^2", "x1*x2"};
  std::vector<std::pair<i64, i64>> pairs = {{3, 5}, {4, 9}, {8, 3}, {5, 9}, {4, 25}};
  for (int trial = 0; trial < 20; ++trial) {
    auto [q1, q2] = pairs[rng() % pairs.size()];
    i64 q = q1 * q2;
    auto S = parse_system(systems[rng() % systems.size()]);
    auto chars = enumerate_characters(q);
    std::vector<DirichletCharacter> cs;
    for (int i = 0; i < S.vars(); ++i) cs.push_back(chars[rng() % chars.size()]);
    auto nu = nu_sum(S, q, CharacterSystem(cs, q));
    std::vector<DirichletCharacter> cs1, cs2;
    for (const auto& chi : cs) {
      auto [a1, a2] = split_character(chi, q1, q2);
      cs1.push_back(std::move(a1));
      cs2.push_back(std::move(a2));
    }
    auto nu1 = nu_sum(S, q1, CharacterSystem(cs1, q1));
    auto nu2 = nu_sum(S, q2, CharacterSystem(cs2, q2));
    auto prod = tally_convolve(nu1.tally, nu2.tally);
    REQUIRE(prod.equals_exact(nu.tally));
  }
}

TEST_CASE("cauchy fourth power inequality") {
  // F=x, q=3, principal chi: lhs = 1
  auto c1 = cauchy_fourth_check(make_instance("x1", 3, {1}, {principal_character(3)}));
  CHECK(c1.lhs == Catch::Approx(1.0).margin(1e-9));
  CHECK(c1.rhs >= 1.0 - 1e-9);
  CHECK(c1.ok);

  // all-principal, a = 0: lhs = phi(q)^{4s}
  auto c2 = cauchy_fourth_check(make_instance("x1", 3, {0}, {principal_character(3)}));
  CHECK(c2.lhs == Catch::Approx(16.0).margin(1e-6));
  CHECK(c2.ok);

  std::mt19937_64 rng(47);
  std::vector<std::string> systems = {"x1", "x1^2", "x1^3", "x1^2 + x2^2", "x1*x2"};
  for (int trial = 0; trial < 10; ++trial) {
    i64 q = 2 + i64(rng() % 8);
    const auto& sys = systems[rng() % systems.size()];
    auto S = parse_system(sys);
    auto chars = enumerate_characters(q);
    std::vector<DirichletCharacter> cs;
    for (int i = 0; i < S.vars(); ++i) cs.push_back(chars[rng() % chars.size()]);
    std::vector<i64> a;
    for (int j = 0; j < S.count(); ++j) a.push_back(i64(rng() % u64(q)));
    auto chk = cauchy_fourth_check(make_instance(sys, q, a, cs));
    REQUIRE(chk.ok);
    REQUIRE(std::abs(chk.rhs_imag) < 1e-9);
  }
}

TEST_CASE("theta values") {
  CHECK(theta(2, ThetaMode::unconditional) == Catch::Approx(0.5));
  CHECK(theta(4, ThetaMode::unconditional) == Catch::Approx(1.0 / 6.0));
  CHECK(theta(3, ThetaMode::igusa) == Catch::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(theta(1, ThetaMode::unconditional), domain_error);
}

TEST_CASE("exponent_report") {
  // Corollary arithmetic: s=5, R=1, D=2, nonsingular -> 5 - 1/12
  // theta_{2D} = theta(4) = 1/6; exponent = 5 - (1/6)*(5-1)/(4*2) = 5 - 1/12
  auto inst = make_instance("x1^2 + x2^2 + x3^2 + x4^2 + x5^2", 11, {1},
                            {principal_character(11), principal_character(11),
                             principal_character(11), principal_character(11),
                             principal_character(11)});
  auto rep = exponent_report(inst, /*dim_v_star=*/1);
  CHECK(rep.theoretical_exponent == Catch::Approx(5.0 - 1.0 / 12.0).epsilon(1e-12));
  CHECK(rep.d == 2);
  CHECK(rep.r_d == 1);

  // diagonal quadric sweep: empirical about s/2
  for (i64 p : {11, 31}) {
    auto ip = make_instance("x1^2 + x2^2 + x3^2 + x4^2", p, {1},
                            std::vector<DirichletCharacter>(4, principal_character(p)));
    auto rp = exponent_report(ip, 0);
    REQUIRE(rp.empirical_exponent <= rp.theoretical_exponent + 0.25);
    REQUIRE(rp.empirical_exponent == Catch::Approx(2.0).margin(0.35));
  }

  CHECK_THROWS_AS(
      exponent_report(make_instance("x1", 6, {2}, {principal_character(6)}), 0),
      domain_error);
}

TEST_CASE("zero sum reports -inf exponent and passes bound") {
  // nonprincipal chi mod 4 with F = x^2: chi(h) e(h^2/4), h in {1,3}:
  // chi(1) e(1/4) + chi(3) e(1/4) = 0
  auto chi = enumerate_characters(4)[1];
  auto rep = exponent_report(make_instance("x1^2", 4, {1}, {chi}), 0);
  CHECK(rep.empirical_exponent == -std::numeric_limits<double>::infinity());
  CHECK(rep.bound_ok);
}

TEST_CASE("cochrane_zheng_check") {
  // f = x, p=5, t=1, principal chi: |C| = |c_5(1)| = 1
  auto c = cochrane_zheng_check(Poly1{{0, 1}}, 5, 1, 1, principal_character(5));
  CHECK(c.lhs == Catch::Approx(1.0).margin(1e-9));
  CHECK(c.rhs == Catch::Approx(4.0 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK(c.ok);

  for (const auto& chi : enumerate_characters(7)) {
    auto r = cochrane_zheng_check(Poly1{{0, 0, 1}}, 7, 1, 1, chi);
    REQUIRE(r.ok);
    REQUIRE(r.rhs == Catch::Approx(8.0 * std::pow(7.0, 2.0 / 3.0)).epsilon(1e-12));
  }

  for (const auto& chi : enumerate_characters(9)) {
    auto r = cochrane_zheng_check(Poly1{{0, 1, 0, 1}}, 3, 2, 1, chi);
    REQUIRE(r.ok);
  }

  CHECK_THROWS_AS(cochrane_zheng_check(Poly1{{0, 1}}, 5, 1, 5, principal_character(5)),
                  domain_error);
  CHECK_THROWS_AS(cochrane_zheng_check(Poly1{{3}}, 5, 1, 1, principal_character(5)),
                  domain_error);
}

TEST_CASE("one-variable square root cancellation diagnostic") {
  // F = x^d, nonprincipal chi: |C| <= d sqrt(p)
  for (i64 p : {5, 7, 11, 13}) {
    for (int d : {1, 2, 3}) {
      std::string sys = d == 1 ? "x1" : "x1^" + std::to_string(d);
      for (const auto& chi : enumerate_characters(p)) {
        if (chi.is_principal()) continue;
        auto r = gauss_sum_bruteforce(make_instance(sys, p, {1}, {chi}));
        REQUIRE(r.magnitude <= double(d) * std::sqrt(double(p)) * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("capacity errors carry the required budget") {
  auto saved = caps();
  caps().term_budget = 100;
  auto inst = make_instance("x1^2 + x2^2", 50, {1},
                            {principal_character(50), principal_character(50)});
  try {
    gauss_sum_bruteforce(inst);
    FAIL("expected capacity_error");
  } catch (const capacity_error& e) {
    CHECK(e.required() == Catch::Approx(2500.0));
  }
  caps() = saved;
}
