#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "multigauss/forms.hpp"

using namespace mg;

TEST_CASE("parse_system basics") {
  auto s1 = parse_system("x1");
  CHECK(s1.vars() == 1);
  CHECK(s1.forms[0].degree() == 1);
  CHECK(s1.forms[0].terms().size() == 1);

  auto s2 = parse_system("x1^2 + x2^2 + x3^2");
  CHECK(s2.vars() == 3);
  CHECK(s2.forms[0].degree() == 2);
  CHECK(s2.forms[0].terms().size() == 3);

  auto s3 = parse_system("x1*x2 - 2*x3^2; x1^3");
  REQUIRE(s3.count() == 2);
  CHECK(s3.forms[0].degree() == 2);
  CHECK(s3.forms[1].degree() == 3);

  CHECK_THROWS_AS(parse_system("x1 + x2^2"), parse_error);
  CHECK_THROWS_AS(parse_system("x1 + "), parse_error);
  CHECK_THROWS_AS(parse_system("3"), parse_error);
}

TEST_CASE("eval_mod examples") {
  auto F = parse_system("x1^2").forms[0];
  CHECK(F.eval_mod({3}, 7) == 2);

  auto G = parse_system("x1*x2 - 2*x3^2").forms[0];
  CHECK(G.eval_mod({0, 0, 0}, 11) == 0);
  CHECK(G.eval_mod({1, 2, 1}, 5) == 0);
}

TEST_CASE("jacobian examples") {
  auto S = parse_system("x1^2 + x2^2");
  auto J = jacobian(S, 2);
  REQUIRE(J.size() == 1);
  CHECK(J[0][0].terms()[0].coeff == 2);
  CHECK(J[0][0].terms()[0].exps == std::vector<int>{1, 0});
  CHECK(J[0][1].terms()[0].exps == std::vector<int>{0, 1});

  auto J1 = jacobian(parse_system("x1*x2"), 1);
  CHECK(J1[0][0].terms()[0].exps == std::vector<int>{0, 1});  // x2

  auto J3 = jacobian(parse_system("x1^3"), 1);
  CHECK(J3[0][0].terms()[0].coeff == 3);
  CHECK(J3[0][0].terms()[0].exps == std::vector<int>{2});
}

TEST_CASE("bihomogenize examples") {
  auto F = parse_system("x1*x2").forms[0];
  auto G = bihomogenize(F);
  REQUIRE(G.vars() == 4);
  CHECK(G.terms()[0].exps == std::vector<int>{1, 1, 1, 1});

  auto G2 = bihomogenize(parse_system("x1^2").forms[0]);
  CHECK(G2.terms()[0].exps == std::vector<int>{2, 2});

  auto G3 = bihomogenize(parse_system("x1^2 + x2^2").forms[0]);
  REQUIRE(G3.terms().size() == 2);

  // substituting y = 1 recovers F
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    std::vector<i64> x = {i64(rng() % 13), i64(rng() % 13)};
    std::vector<i64> xy = {x[0], x[1], 1, 1};
    REQUIRE(G3.eval_mod(xy, 13) == parse_system("x1^2 + x2^2").forms[0].eval_mod(x, 13));
  }
}

TEST_CASE("quadruple_difference examples") {
  // F = x^2: L = (h^2 - h'^2)(j^2 - j'^2)
  auto L = quadruple_difference(parse_system("x1^2").forms[0]);
  REQUIRE(L.vars() == 4);
  for (i64 h = 0; h < 5; ++h)
    for (i64 hp = 0; hp < 5; ++hp)
      for (i64 j = 0; j < 5; ++j)
        for (i64 jp = 0; jp < 5; ++jp) {
          i64 expect = mod_reduce((h * h - hp * hp) * (j * j - jp * jp), 5);
          REQUIRE(L.eval_mod({h, hp, j, jp}, 5) == expect);
        }

  auto L1 = quadruple_difference(parse_system("x1").forms[0]);
  CHECK(L1.eval_mod({3, 1, 4, 2}, 101) == mod_reduce((3 - 1) * (4 - 2), 101));

  auto L2 = quadruple_difference(parse_system("x1*x2").forms[0]);
  CHECK(L2.eval_mod({1, 1, 0, 0, 1, 1, 0, 0}, 101) == 1);
}

TEST_CASE("degree_part") {
  auto S = parse_system("x1*x2 - 2*x3^2; x1^3");
  CHECK(degree_part(S, 3).count() == 1);
  CHECK(degree_part(S, 2).count() == 1);
  CHECK(degree_part(S, 5).count() == 0);
  auto T = parse_system("x1^2; x2^2");
  CHECK(degree_part(T, 2).count() == 2);
}

static Form random_form(std::mt19937_64& rng, int s, int d) {
  std::vector<Term> terms;
  int nterms = 1 + int(rng() % 4);
  for (int t = 0; t < nterms; ++t) {
    Term term;
    term.coeff = i64(rng() % 9) - 4;
    if (term.coeff == 0) term.coeff = 1;
    term.exps.assign(std::size_t(s), 0);
    for (int k = 0; k < d; ++k) term.exps[rng() % u64(s)] += 1;
    terms.push_back(std::move(term));
  }
  Form f(s, std::move(terms), d);
  if (!f.is_zero()) return f;
  Term mono;
  mono.coeff = 1;
  mono.exps.assign(std::size_t(s), 0);
  mono.exps[0] = d;
  return Form(s, {mono}, d);
}

TEST_CASE("Euler identity and derivative linearity on random forms") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    int s = 1 + int(rng() % 3);
    int d = 1 + int(rng() % 3);
    Form f = random_form(rng, s, d);
    if (f.is_zero()) continue;

    // sum_j xj * dF/dxj = d * F
    std::vector<Term> euler;
    for (int j = 0; j < s; ++j) {
      Form dj = f.derivative(j);
      for (auto t : dj.terms()) {
        t.exps[std::size_t(j)] += 1;
        euler.push_back(t);
      }
    }
    Form lhs(s, std::move(euler), f.degree());
    Form rhs = f.scaled(d);
    REQUIRE(lhs.terms().size() == rhs.terms().size());
    for (std::size_t i = 0; i < lhs.terms().size(); ++i) {
      REQUIRE(lhs.terms()[i].coeff == rhs.terms()[i].coeff);
      REQUIRE(lhs.terms()[i].exps == rhs.terms()[i].exps);
    }

    // jacobian of a scaled form scales entrywise
    i64 c = 3;
    for (int j = 0; j < s; ++j) {
      Form a = f.scaled(c).derivative(j);
      Form b = f.derivative(j).scaled(c);
      REQUIRE(a.terms().size() == b.terms().size());
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        REQUIRE(a.terms()[i].coeff == b.terms()[i].coeff);
    }
  }
}

TEST_CASE("quadruple difference agrees with its four-fold expansion") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    int s = 1 + int(rng() % 2);
    int d = 1 + int(rng() % 3);
    Form f = random_form(rng, s, d);
    Form G = bihomogenize(f);
    Form L = quadruple_difference(f);
    i64 q = 2 + i64(rng() % 97);
    for (int pt = 0; pt < 100; ++pt) {
      std::vector<i64> v(std::size_t(4 * s));
      for (auto& c : v) c = i64(rng() % u64(q));
      std::vector<i64> hj, hjp, hpj, hpjp;
      for (int i = 0; i < s; ++i) hj.push_back(v[std::size_t(i)]);
      for (int i = 0; i < s; ++i) hj.push_back(v[std::size_t(2 * s + i)]);
      for (int i = 0; i < s; ++i) hjp.push_back(v[std::size_t(i)]);
      for (int i = 0; i < s; ++i) hjp.push_back(v[std::size_t(3 * s + i)]);
      for (int i = 0; i < s; ++i) hpj.push_back(v[std::size_t(s + i)]);
      for (int i = 0; i < s; ++i) hpj.push_back(v[std::size_t(2 * s + i)]);
      for (int i = 0; i < s; ++i) hpjp.push_back(v[std::size_t(s + i)]);
      for (int i = 0; i < s; ++i) hpjp.push_back(v[std::size_t(3 * s + i)]);
      i64 expect = mod_reduce(G.eval_mod(hj, q) - G.eval_mod(hjp, q) -
                                  G.eval_mod(hpj, q) + G.eval_mod(hpjp, q),
                              q);
      REQUIRE(L.eval_mod(v, q) == expect);
    }
  }
}

TEST_CASE("power table evaluation matches direct evaluation") {
  std::mt19937_64 rng(5);
  auto S = parse_system("2*x1^3 - x1*x2^2; x1^2 + 3*x2^2");
  for (i64 q : {2, 7, 30}) {
    PowerTable pt(q, S.max_degree());
    for (i64 a = 0; a < q; ++a)
      for (i64 b = 0; b < q; ++b)
        for (const auto& f : S.forms)
          REQUIRE(eval_with_table(f, pt, {a, b}) == f.eval_mod({a, b}, q));
  }
}

TEST_CASE("JSON round trip") {
  auto S = parse_system("x1*x2 - 2*x3^2; x1^3");
  auto back = system_from_json(system_to_json(S));
  REQUIRE(back.count() == S.count());
  for (int i = 0; i < S.count(); ++i) {
    REQUIRE(back.forms[std::size_t(i)].terms().size() ==
            S.forms[std::size_t(i)].terms().size());
    REQUIRE(back.forms[std::size_t(i)].degree() == S.forms[std::size_t(i)].degree());
  }
  auto twice = parse_system(system_to_text(S));
  REQUIRE(system_to_text(twice) == system_to_text(S));
}
