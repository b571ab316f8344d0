#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "multigauss/arith.hpp"
#include "multigauss/common.hpp"
#include "multigauss/forms.hpp"

namespace mg {

// Membership requires rank(matrix(x)) < bound; bound = 1 means every entry
// vanishes.
struct RankCondition {
  std::vector<std::vector<Form>> matrix;
  int bound = 0;
};

struct VarietySpec {
  int n = 0;
  std::vector<Form> equations;
  std::optional<RankCondition> rank_condition;
  std::vector<int> coordinate_constraints;  // zero-based indices forced to 0
};

struct DimEstimate {
  int dim = -1;  // -1 encodes the empty variety
  std::vector<std::pair<i64, i64>> per_prime_counts;
  double slope = 0.0;
  double residual = 0.0;
};

inline bool forms_identical(const Form& a, const Form& b) {
  if (a.vars() != b.vars() || a.degree() != b.degree()) return false;
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (a.terms()[i].coeff != b.terms()[i].coeff) return false;
    if (a.terms()[i].exps != b.terms()[i].exps) return false;
  }
  return true;
}

inline bool specs_identical(const VarietySpec& a, const VarietySpec& b) {
  if (a.n != b.n) return false;
  if (a.coordinate_constraints != b.coordinate_constraints) return false;
  if (a.equations.size() != b.equations.size()) return false;
  for (std::size_t i = 0; i < a.equations.size(); ++i)
    if (!forms_identical(a.equations[i], b.equations[i])) return false;
  if (a.rank_condition.has_value() != b.rank_condition.has_value()) return false;
  if (a.rank_condition) {
    const auto& ra = *a.rank_condition;
    const auto& rb = *b.rank_condition;
    if (ra.bound != rb.bound) return false;
    if (ra.matrix.size() != rb.matrix.size()) return false;
    for (std::size_t i = 0; i < ra.matrix.size(); ++i) {
      if (ra.matrix[i].size() != rb.matrix[i].size()) return false;
      for (std::size_t j = 0; j < ra.matrix[i].size(); ++j)
        if (!forms_identical(ra.matrix[i][j], rb.matrix[i][j])) return false;
    }
  }
  return true;
}

inline int matrix_rank_mod_p(std::vector<std::vector<i64>> m, i64 p) {
  int rows = int(m.size());
  if (rows == 0) return 0;
  int cols = int(m[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (m[std::size_t(r)][std::size_t(c)] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[std::size_t(rank)], m[std::size_t(piv)]);
    i64 inv = inv_mod(m[std::size_t(rank)][std::size_t(c)], p);
    for (int r = rank + 1; r < rows; ++r) {
      i64 f = mul_mod(m[std::size_t(r)][std::size_t(c)], inv, p);
      if (f == 0) continue;
      for (int c2 = c; c2 < cols; ++c2)
        m[std::size_t(r)][std::size_t(c2)] = mod_reduce(
            m[std::size_t(r)][std::size_t(c2)] -
                mul_mod(f, m[std::size_t(rank)][std::size_t(c2)], p),
            p);
    }
    ++rank;
  }
  return rank;
}

namespace detail {

inline int spec_max_degree(const VarietySpec& V) {
  int d = 1;
  for (const auto& f : V.equations) d = std::max(d, f.degree());
  if (V.rank_condition)
    for (const auto& row : V.rank_condition->matrix)
      for (const auto& f : row) d = std::max(d, f.degree());
  return d;
}

inline bool spec_contains(const VarietySpec& V, const std::vector<i64>& x,
                          i64 p, const PowerTable& pt) {
  for (const auto& f : V.equations)
    if (eval_with_table(f, pt, x) != 0) return false;
  if (V.rank_condition) {
    const auto& rc = *V.rank_condition;
    std::vector<std::vector<i64>> m;
    m.reserve(rc.matrix.size());
    for (const auto& row : rc.matrix) {
      std::vector<i64> r;
      r.reserve(row.size());
      for (const auto& f : row) r.push_back(eval_with_table(f, pt, x));
      m.push_back(std::move(r));
    }
    if (matrix_rank_mod_p(std::move(m), p) >= rc.bound) return false;
  }
  return true;
}

}  // namespace detail

inline i64 point_count_mod_p(const VarietySpec& V, i64 p, int workers = 1) {
  if (p < 2 || !is_prime_u64(u64(p)))
    throw domain_error("point_count: modulus must be prime");
  std::vector<char> constrained(std::size_t(V.n), 0);
  for (int i : V.coordinate_constraints) {
    if (i < 0 || i >= V.n)
      throw domain_error("point_count: constraint index out of range");
    constrained[std::size_t(i)] = 1;
  }
  std::vector<int> free_idx;
  for (int i = 0; i < V.n; ++i)
    if (!constrained[std::size_t(i)]) free_idx.push_back(i);
  int nf = int(free_idx.size());
  double work = std::pow(double(p), double(nf));
  if (work > double(caps().term_budget))
    throw capacity_error("point_count: work cap exceeded", work);

  int maxdeg = detail::spec_max_degree(V);
  if (nf == 0) {
    PowerTable pt(p, maxdeg);
    std::vector<i64> x(std::size_t(V.n), 0);
    return detail::spec_contains(V, x, p, pt) ? 1 : 0;
  }

  int nw = int(std::max<i64>(1, std::min<i64>(workers <= 0 ? 1 : workers, p)));
  std::vector<i64> partial(std::size_t(nw), 0);
  auto run = [&](int w) {
    i64 lo = p * i64(w) / nw, hi = p * i64(w + 1) / nw;
    PowerTable pt(p, maxdeg);
    std::vector<i64> x(std::size_t(V.n), 0);
    std::vector<i64> digits(std::size_t(nf - 1), 0);
    i64 cnt = 0;
    for (i64 v0 = lo; v0 < hi; ++v0) {
      x[std::size_t(free_idx[0])] = v0;
      std::fill(digits.begin(), digits.end(), 0);
      while (true) {
        for (int i = 1; i < nf; ++i)
          x[std::size_t(free_idx[std::size_t(i)])] = digits[std::size_t(i - 1)];
        if (detail::spec_contains(V, x, p, pt)) ++cnt;
        int i = 0;
        while (i < nf - 1 && ++digits[std::size_t(i)] == p) {
          digits[std::size_t(i)] = 0;
          ++i;
        }
        if (i == nf - 1) break;
      }
    }
    partial[std::size_t(w)] = cnt;
  };
  if (nw == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  i64 total = 0;
  for (i64 c : partial) total += c;
  return total;
}

inline std::vector<i64> default_dim_primes() { return {11, 13, 17, 19}; }

inline DimEstimate dim_estimate(const VarietySpec& V,
                                const std::vector<i64>& primes = default_dim_primes(),
                                int workers = 1) {
  if (primes.size() < 2)
    throw domain_error("dim_estimate: need at least two primes");
  DimEstimate est;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npos = 0;
  for (i64 p : primes) {
    i64 c = point_count_mod_p(V, p, workers);
    est.per_prime_counts.push_back({p, c});
    if (c > 0) {
      double lx = std::log(double(p)), ly = std::log(double(c));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++npos;
    }
  }
  if (npos == 0) {
    est.dim = -1;
    return est;
  }
  double slope, intercept;
  if (npos == 1) {
    slope = sy / sx;  // single usable prime: slope through the origin
    intercept = 0.0;
  } else {
    slope = (npos * sxy - sx * sy) / (npos * sxx - sx * sx);
    intercept = (sy - slope * sx) / npos;
  }
  est.slope = slope;
  est.dim = std::clamp(int(std::llround(slope)), 0, V.n);
  double ss = 0;
  for (auto [p, c] : est.per_prime_counts) {
    if (c <= 0) continue;
    double r = std::log(double(c)) - (slope * std::log(double(p)) + intercept);
    ss += r * r;
  }
  est.residual = std::sqrt(ss / npos);
  return est;
}

inline VarietySpec singular_locus_spec(const FormSystem& S) {
  VarietySpec V;
  V.n = S.vars();
  V.rank_condition = RankCondition{jacobian(S), S.count()};
  return V;
}

// T_k: rank M_k < R with x_{k+1} = ... = x_s = 0; U_k relaxes x_{k+1}.
inline std::pair<VarietySpec, VarietySpec> chain_varieties(const FormSystem& S,
                                                           int k) {
  int s = S.vars(), R = S.count();
  if (k < 1 || k > s) throw domain_error("chain_varieties: k out of range");
  auto Mk = jacobian(S, k);
  VarietySpec T, U;
  T.n = U.n = s;
  T.rank_condition = RankCondition{Mk, R};
  U.rank_condition = RankCondition{std::move(Mk), R};
  for (int i = k; i < s; ++i) T.coordinate_constraints.push_back(i);
  for (int i = k + 1; i < s; ++i) U.coordinate_constraints.push_back(i);
  return {std::move(T), std::move(U)};
}

// Bad-reduction filter: skip p dividing any coefficient or any degree.
inline std::vector<i64> filter_primes(const FormSystem& S,
                                      const std::vector<i64>& primes) {
  std::vector<i64> good;
  for (i64 p : primes) {
    bool ok = true;
    for (const auto& f : S.forms) {
      if (f.degree() > 0 && f.degree() % p == 0) ok = false;
      for (const auto& t : f.terms())
        if (t.coeff % p == 0) ok = false;
    }
    if (ok) good.push_back(p);
  }
  return good;
}

struct ChainReport {
  int s = 0, R = 0;
  std::vector<std::optional<DimEstimate>> t_est, u_est;  // index k-1
  int dim_v_star = -1;
  double claim2_bound = 0.0;
  bool rel_ok = true;        // dim T_{k+1} - 1 <= dim T_k <= dim T_{k+1} + R
  bool interlace_ok = true;  // dim T_{k+1} <= dim U_k in {dim T_k, dim T_k + 1}
  bool claim2_ok = true;     // max dim T_k <= (R s + dim V*) / (R + 1)
  bool complete = true;
  std::vector<std::string> notes;

  bool all_ok() const { return rel_ok && interlace_ok && claim2_ok; }
};

inline ChainReport verify_chain_claims(const FormSystem& S,
                                       const std::vector<i64>& primes =
                                           default_dim_primes(),
                                       int workers = 1) {
  ChainReport rep;
  rep.s = S.vars();
  rep.R = S.count();
  auto good = filter_primes(S, primes);
  if (good.size() < 2)
    throw domain_error("verify_chain_claims: fewer than two admissible primes");
  rep.t_est.resize(std::size_t(rep.s));
  rep.u_est.resize(std::size_t(rep.s));
  for (int k = 1; k <= rep.s; ++k) {
    auto [T, U] = chain_varieties(S, k);
    try {
      rep.t_est[std::size_t(k - 1)] = dim_estimate(T, good, workers);
    } catch (const capacity_error&) {
      rep.complete = false;
      rep.notes.push_back("T_" + std::to_string(k) + " skipped: over cap");
    }
    try {
      rep.u_est[std::size_t(k - 1)] = dim_estimate(U, good, workers);
    } catch (const capacity_error&) {
      rep.complete = false;
      rep.notes.push_back("U_" + std::to_string(k) + " skipped: over cap");
    }
  }
  if (rep.t_est[std::size_t(rep.s - 1)])
    rep.dim_v_star = rep.t_est[std::size_t(rep.s - 1)]->dim;
  else
    rep.notes.push_back("dim V* unavailable, using -1");
  rep.claim2_bound =
      (double(rep.R) * rep.s + rep.dim_v_star) / double(rep.R + 1);
  for (int k = 1; k < rep.s; ++k) {
    const auto& tk = rep.t_est[std::size_t(k - 1)];
    const auto& tk1 = rep.t_est[std::size_t(k)];
    const auto& uk = rep.u_est[std::size_t(k - 1)];
    if (tk && tk1) {
      if (!(tk1->dim - 1 <= tk->dim && tk->dim <= tk1->dim + rep.R))
        rep.rel_ok = false;
    }
    if (tk && tk1 && uk) {
      if (tk1->dim > uk->dim) rep.interlace_ok = false;
      if (uk->dim != tk->dim && uk->dim != tk->dim + 1)
        rep.interlace_ok = false;
    }
  }
  for (const auto& tk : rep.t_est)
    if (tk && double(tk->dim) > rep.claim2_bound + 1e-9) rep.claim2_ok = false;
  return rep;
}

struct CodimReport {
  int s = 0, R = 0;
  DimEstimate f_star, g1_star, g2_star;
  int codim_f = 0, codim_g1 = 0, codim_g2 = 0;
  double bound = 0.0;
  bool ok = false;
  bool used_empty = false;  // some dim was -1
};

inline CodimReport verify_codim_proposition(const FormSystem& S,
                                            const std::vector<i64>& primes =
                                                {11, 13},
                                            int workers = 1) {
  CodimReport rep;
  rep.s = S.vars();
  rep.R = S.count();
  auto good = filter_primes(S, primes);
  if (good.size() < 2)
    throw domain_error(
        "verify_codim_proposition: fewer than two admissible primes");
  rep.f_star = dim_estimate(singular_locus_spec(S), good, workers);

  FormSystem G = bihomogenize(S);
  auto JG = jacobian(G);
  std::vector<std::vector<Form>> J1, J2;
  for (const auto& row : JG) {
    J1.push_back({row.begin(), row.begin() + rep.s});
    J2.push_back({row.begin() + rep.s, row.end()});
  }
  VarietySpec V1, V2;
  V1.n = V2.n = 2 * rep.s;
  V1.rank_condition = RankCondition{std::move(J1), rep.R};
  V2.rank_condition = RankCondition{std::move(J2), rep.R};
  rep.g1_star = dim_estimate(V1, good, workers);
  rep.g2_star = dim_estimate(V2, good, workers);

  rep.codim_f = rep.s - rep.f_star.dim;
  rep.codim_g1 = 2 * rep.s - rep.g1_star.dim;
  rep.codim_g2 = 2 * rep.s - rep.g2_star.dim;
  rep.used_empty =
      rep.f_star.dim < 0 || rep.g1_star.dim < 0 || rep.g2_star.dim < 0;
  rep.bound = double(rep.codim_f) / double(rep.R + 1);
  rep.ok = double(std::min(rep.codim_g1, rep.codim_g2)) + 1e-9 >= rep.bound;
  return rep;
}

}  // namespace mg
