#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multigauss/acceptance.hpp"
#include "multigauss/circle.hpp"
#include "multigauss/expsums.hpp"
#include "multigauss/geometry.hpp"

using json = nlohmann::ordered_json;
using namespace mg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitMathFail = 3;

// every numeric output is rounded to 15 significant digits
double sig15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

double log_base(double mag, i64 q) {
  if (q <= 1 || mag <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(mag) / std::log(double(q));
}

struct Report {
  json config = json::object();
  json results = json::array();
  json diagnostics = json::array();
  std::vector<std::string> csv_lines;  // including the header
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void print(const std::string& format) const {
    if (format == "csv" && !csv_lines.empty()) {
      for (const auto& l : csv_lines) std::cout << l << '\n';
      return;
    }
    json out;
    out["config"] = config;
    out["results"] = results;
    out["diagnostics"] = diagnostics;
    out["timing"] = {
        {"seconds",
         sig15(std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
                   .count())}};
    std::cout << out.dump(2) << '\n';
  }
};

std::vector<DirichletCharacter> resolve_chars(
    const std::vector<std::string>& specs, i64 q, int s) {
  std::vector<DirichletCharacter> cs;
  if (specs.empty()) {
    for (int i = 0; i < s; ++i) cs.push_back(principal_character(q));
    return cs;
  }
  for (const auto& spec : specs) cs.push_back(parse_character(spec));
  if (int(cs.size()) == 1 && s > 1)
    cs.assign(std::size_t(s), cs[0]);
  if (int(cs.size()) != s)
    throw domain_error("need one character per variable");
  return cs;
}

BoxSpec resolve_box(const std::string& text, int s) {
  if (text.empty()) return BoxSpec::default_box(s);
  BoxSpec b;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos)
      throw domain_error("box: expected lo:hi pairs separated by commas");
    b.sides.push_back({std::stod(part.substr(0, colon)),
                       std::stod(part.substr(colon + 1))});
  }
  if (int(b.sides.size()) == 1 && s > 1)
    b.sides.assign(std::size_t(s), b.sides[0]);
  if (int(b.sides.size()) != s) throw domain_error("box: arity mismatch");
  b.validate();
  return b;
}

GaussSumInstance build_instance(const std::string& system, i64 q,
                                std::vector<i64> a,
                                const std::vector<std::string>& chi_specs) {
  GaussSumInstance inst;
  inst.system = parse_system(system);
  inst.q = q;
  if (a.empty()) a.assign(std::size_t(inst.system.count()), 1);
  inst.a = std::move(a);
  inst.chars =
      CharacterSystem(resolve_chars(chi_specs, q, inst.system.vars()), q);
  return inst;
}

json char_list_json(const CharacterSystem& cs) {
  json out = json::array();
  for (const auto& c : cs.chars) out.push_back(character_spec(c));
  return out;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

// scan CSV schema: q, a..., chi..., re, im, magnitude, emp, theo, ok
void push_scan_row(Report& rep, const GaussSumInstance& inst,
                   const GaussSumReport& r) {
  std::vector<std::string> cells;
  cells.push_back(std::to_string(inst.q));
  for (i64 ai : inst.a) cells.push_back(std::to_string(ai));
  for (const auto& c : inst.chars.chars) cells.push_back(character_spec(c));
  cells.push_back(fmt15(r.value.real()));
  cells.push_back(fmt15(r.value.imag()));
  cells.push_back(fmt15(r.magnitude));
  cells.push_back(fmt15(r.empirical_exponent));
  cells.push_back(fmt15(r.theoretical_exponent));
  cells.push_back(r.bound_ok ? "1" : "0");
  if (rep.csv_lines.empty()) {
    std::vector<std::string> head = {"q"};
    for (std::size_t j = 0; j < inst.a.size(); ++j)
      head.push_back("a" + std::to_string(j + 1));
    for (std::size_t j = 0; j < inst.chars.chars.size(); ++j)
      head.push_back("chi" + std::to_string(j + 1));
    for (const char* c :
         {"re", "im", "magnitude", "emp_exponent", "theo_exponent", "ok"})
      head.push_back(c);
    rep.csv_lines.push_back(join_csv(head));
  }
  rep.csv_lines.push_back(join_csv(cells));
}

json dim_estimate_json(const DimEstimate& e) {
  json counts = json::array();
  for (auto [p, c] : e.per_prime_counts) counts.push_back({{"p", p}, {"count", c}});
  return {{"dim", e.dim},
          {"slope", sig15(e.slope)},
          {"residual", sig15(e.residual)},
          {"per_prime_counts", counts}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and empirical toolkit for complete character sums"};
  app.require_subcommand(1);

  int workers = 1;
  std::string format = "json";
  u64 seed = 1;
  app.add_option("--workers", workers, "worker thread count")
      ->capture_default_str();
  app.add_option("--format", format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "seed for sampled sweeps")
      ->capture_default_str();

  if (const char* cap = std::getenv("MULTIGAUSS_CAP"))
    caps().term_budget = std::strtod(cap, nullptr);

  std::string system, box_text, chi_single, theta_text = "unconditional";
  std::vector<std::string> chi_specs;
  std::vector<i64> a_list, primes, coeffs;
  i64 q = 0, Q = 0, u = 1, p = 2, a_single = 1, samples = 200000;
  int t = 1, dimv = 0;
  double X = 0, eps = 0.05, slack = 0.25;

  auto* sc_charset = app.add_subcommand("charset", "list characters mod q");
  sc_charset->add_option("q", q, "modulus")->required();

  auto add_instance_opts = [&](CLI::App* sc, bool need_a) {
    sc->add_option("--system", system, "form system text")->required();
    sc->add_option("--q", q, "modulus")->required();
    auto* ao = sc->add_option("--a", a_list, "outer coefficients");
    ao->delimiter(',');
    if (need_a) ao->required();
    sc->add_option("--chi", chi_specs,
                   "character specs q:e1,e2,... (default principal)");
  };

  auto* sc_gauss = app.add_subcommand("gauss", "complete character sum");
  add_instance_opts(sc_gauss, false);
  auto* sc_crt = app.add_subcommand("crt-check",
                                    "compare factored and direct evaluation");
  add_instance_opts(sc_crt, false);
  auto* sc_cauchy =
      app.add_subcommand("cauchy-check", "fourth power inequality check");
  add_instance_opts(sc_cauchy, false);

  auto* sc_esum = app.add_subcommand("esum", "normalized complete sum");
  sc_esum->add_option("--system", system, "form system text")->required();
  sc_esum->add_option("--q", q, "modulus")->required();
  sc_esum->add_option("--u", u, "coefficient, coprime to q")
      ->capture_default_str();

  auto* sc_nu = app.add_subcommand("nu", "character-weighted local sum");
  sc_nu->add_option("--system", system, "form system text")->required();
  sc_nu->add_option("--q", q, "modulus")->required();
  sc_nu->add_option("--chi", chi_specs, "character specs (default principal)");

  auto* sc_scan = app.add_subcommand("exponent-scan",
                                     "exponent bound over a prime sweep");
  sc_scan->add_option("--system", system, "form system text")->required();
  sc_scan->add_option("--primes", primes, "primes to sweep")->delimiter(',')
      ->default_val(std::vector<i64>{11, 31, 97});
  sc_scan->add_option("--dimv", dimv, "singular locus dimension")
      ->capture_default_str();
  sc_scan->add_option("--theta", theta_text, "unconditional or igusa")
      ->check(CLI::IsMember({"unconditional", "igusa"}))
      ->capture_default_str();
  sc_scan->add_option("--slack", slack, "allowed exponent excess")
      ->capture_default_str();
  bool random_chars = false;
  sc_scan->add_flag("--random", random_chars,
                    "sample random characters and coefficients");

  auto* sc_cz = app.add_subcommand("cz-check",
                                   "one-variable prime power bound check");
  sc_cz->add_option("--coeffs", coeffs, "c0,c1,...,cd")->delimiter(',')->required();
  sc_cz->add_option("--p", p, "prime")->required();
  sc_cz->add_option("--t", t, "exponent of the prime power")->required();
  sc_cz->add_option("--a", a_single, "coefficient, coprime to p")
      ->capture_default_str();
  sc_cz->add_option("--chi", chi_single,
                    "character spec, or 'all' for every character mod p^t")
      ->default_val("all");

  auto* sc_dim = app.add_subcommand("dim", "singular locus dimension estimate");
  sc_dim->add_option("--system", system, "form system text")->required();
  sc_dim->add_option("--primes", primes, "sampling primes")->delimiter(',')
      ->default_val(std::vector<i64>{11, 13, 17, 19});

  auto* sc_chain = app.add_subcommand("chain-check",
                                      "dimension chain inequalities");
  sc_chain->add_option("--system", system, "form system text")->required();
  sc_chain->add_option("--primes", primes, "sampling primes")->delimiter(',')
      ->default_val(std::vector<i64>{11, 13, 17, 19});

  auto* sc_codim = app.add_subcommand("codim-check",
                                      "codimension lower bound check");
  sc_codim->add_option("--system", system, "form system text")->required();
  sc_codim->add_option("--primes", primes, "sampling primes")->delimiter(',')
      ->default_val(std::vector<i64>{11, 13});

  auto* sc_sseries = app.add_subcommand("sseries", "truncated singular series");
  sc_sseries->add_option("--system", system, "form system text")->required();
  sc_sseries->add_option("--Q", Q, "truncation point")->required();
  sc_sseries->add_option("--chi", chi_specs,
                         "character specs: compute the restricted absolute sum");

  auto* sc_sint = app.add_subcommand("sintegral", "singular integral estimate");
  sc_sint->add_option("--system", system, "form system text")->required();
  sc_sint->add_option("--eps", eps, "slab thickness")->capture_default_str();
  sc_sint->add_option("--samples", samples, "sample count")
      ->capture_default_str();
  sc_sint->add_option("--box", box_text, "lo:hi per coordinate, comma separated");

  auto* sc_count = app.add_subcommand("count-primes",
                                      "prime-power weighted solution count");
  sc_count->add_option("--system", system, "form system text")->required();
  sc_count->add_option("--X", X, "scale")->required();
  sc_count->add_option("--box", box_text, "lo:hi per coordinate");

  auto* sc_asym = app.add_subcommand("asymptotic",
                                     "count against the local-density product");
  sc_asym->add_option("--system", system, "form system text")->required();
  sc_asym->add_option("--X", X, "scale")->required();
  sc_asym->add_option("--Q", Q, "series truncation override");
  sc_asym->add_option("--eps", eps, "slab thickness")->capture_default_str();
  sc_asym->add_option("--samples", samples, "sample count")
      ->capture_default_str();
  sc_asym->add_option("--box", box_text, "lo:hi per coordinate");

  std::string level = "desk";
  auto* sc_suite = app.add_subcommand("verify-suite", "full acceptance battery");
  sc_suite->add_option("--level", level, "battery level")
      ->check(CLI::IsMember({"desk"}))
      ->capture_default_str();

  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Report rep;
  rep.config["workers"] = workers;
  rep.config["format"] = format;
  rep.config["seed"] = seed;
  rep.config["caps"] = {{"term_budget", caps().term_budget},
                        {"tally_order_cap", caps().tally_order_cap},
                        {"sieve_cap", caps().sieve_cap}};
  int exit_code = kExitOk;

  try {
    if (*sc_charset) {
      rep.config["command"] = "charset";
      rep.config["q"] = q;
      for (const auto& chi : enumerate_characters(q)) {
        json values = json::array();
        for (i64 n = 0; n < q; ++n) {
          CharValue v = chi(n);
          if (v.zero)
            values.push_back(nullptr);
          else
            values.push_back({{"num", v.num}, {"den", v.den}});
        }
        rep.results.push_back({{"spec", character_spec(chi)},
                               {"order", chi.order()},
                               {"principal", chi.is_principal()},
                               {"values", values}});
      }
    } else if (*sc_gauss || *sc_crt || *sc_cauchy) {
      auto inst = build_instance(system, q, a_list, chi_specs);
      rep.config["system"] = system;
      rep.config["q"] = q;
      rep.config["a"] = inst.a;
      rep.config["chi"] = char_list_json(inst.chars);
      if (*sc_gauss) {
        rep.config["command"] = "gauss";
        auto r = gauss_sum_crt(inst, workers);
        rep.results.push_back(
            {{"re", sig15(r.value.real())},
             {"im", sig15(r.value.imag())},
             {"magnitude", sig15(r.magnitude)},
             {"log_q_magnitude", sig15(log_base(r.magnitude, q))}});
        push_scan_row(rep, inst, r);
      } else if (*sc_crt) {
        rep.config["command"] = "crt-check";
        auto rb = gauss_sum_bruteforce(inst, workers);
        auto rc = gauss_sum_crt(inst, workers);
        bool same = rc.tally && rb.tally && rc.tally->identical(*rb.tally);
        rep.results.push_back({{"re", sig15(rb.value.real())},
                               {"im", sig15(rb.value.imag())},
                               {"magnitude", sig15(rb.magnitude)},
                               {"identical", same}});
        if (!same) exit_code = kExitMathFail;
      } else {
        rep.config["command"] = "cauchy-check";
        auto chk = cauchy_fourth_check(inst, workers);
        rep.results.push_back({{"lhs", sig15(chk.lhs)},
                               {"rhs", sig15(chk.rhs)},
                               {"rhs_imag", sig15(chk.rhs_imag)},
                               {"ok", chk.ok}});
        if (!chk.ok) exit_code = kExitMathFail;
      }
    } else if (*sc_esum) {
      rep.config["command"] = "esum";
      rep.config["system"] = system;
      rep.config["q"] = q;
      rep.config["u"] = u;
      auto F = parse_system(system).forms[0];
      auto v = normalized_complete_sum(F, q, u, workers);
      double mag = std::abs(v);
      rep.results.push_back({{"re", sig15(v.real())},
                             {"im", sig15(v.imag())},
                             {"magnitude", sig15(mag)},
                             {"log_q_magnitude", sig15(log_base(mag, q))}});
    } else if (*sc_nu) {
      rep.config["command"] = "nu";
      rep.config["system"] = system;
      rep.config["q"] = q;
      auto S = parse_system(system);
      CharacterSystem cs(resolve_chars(chi_specs, q, S.vars()), q);
      rep.config["chi"] = char_list_json(cs);
      auto nu = nu_sum(S, q, cs, workers);
      rep.results.push_back({{"re", sig15(nu.value.real())},
                             {"im", sig15(nu.value.imag())},
                             {"tally_order", nu.tally.order()},
                             {"terms", nu.tally.term_count()}});
    } else if (*sc_scan) {
      rep.config["command"] = "exponent-scan";
      rep.config["system"] = system;
      rep.config["primes"] = primes;
      rep.config["dimv"] = dimv;
      rep.config["theta"] = theta_text;
      rep.config["slack"] = slack;
      rep.config["random"] = random_chars;
      ThetaMode mode = theta_text == "igusa" ? ThetaMode::igusa
                                             : ThetaMode::unconditional;
      std::mt19937_64 rng(seed);
      auto S = parse_system(system);
      bool all_ok = true;
      for (i64 pr : primes) {
        if (!is_prime_u64(u64(pr)))
          throw domain_error("exponent-scan: sweep entries must be prime");
        GaussSumInstance inst;
        inst.system = S;
        inst.q = pr;
        for (int j = 0; j < S.count(); ++j)
          inst.a.push_back(random_chars ? 1 + i64(rng() % u64(pr - 1)) : 1);
        std::vector<DirichletCharacter> cs;
        if (random_chars) {
          auto all = enumerate_characters(pr);
          for (int i = 0; i < S.vars(); ++i)
            cs.push_back(all[rng() % all.size()]);
        } else {
          cs = resolve_chars({}, pr, S.vars());
        }
        inst.chars = CharacterSystem(std::move(cs), pr);
        auto r = exponent_report(inst, dimv, mode, slack, workers);
        rep.results.push_back(
            {{"q", pr},
             {"a", inst.a},
             {"chi", char_list_json(inst.chars)},
             {"re", sig15(r.value.real())},
             {"im", sig15(r.value.imag())},
             {"magnitude", sig15(r.magnitude)},
             {"emp_exponent", sig15(r.empirical_exponent)},
             {"theo_exponent", sig15(r.theoretical_exponent)},
             {"ok", r.bound_ok}});
        push_scan_row(rep, inst, r);
        if (!r.bound_ok) all_ok = false;
      }
      if (!all_ok) exit_code = kExitMathFail;
    } else if (*sc_cz) {
      rep.config["command"] = "cz-check";
      rep.config["coeffs"] = coeffs;
      rep.config["p"] = p;
      rep.config["t"] = t;
      rep.config["a"] = a_single;
      rep.config["chi"] = chi_single;
      Poly1 f;
      f.coeffs = coeffs;
      i64 pt = 1;
      for (int i = 0; i < t; ++i) pt *= p;
      std::vector<DirichletCharacter> chars;
      if (chi_single == "all")
        chars = enumerate_characters(pt);
      else
        chars.push_back(parse_character(chi_single));
      bool all_ok = true;
      for (const auto& chi : chars) {
        auto chk = cochrane_zheng_check(f, p, t, a_single, chi);
        rep.results.push_back({{"chi", character_spec(chi)},
                               {"lhs", sig15(chk.lhs)},
                               {"rhs", sig15(chk.rhs)},
                               {"ok", chk.ok}});
        if (!chk.ok) all_ok = false;
      }
      if (!all_ok) exit_code = kExitMathFail;
    } else if (*sc_dim) {
      rep.config["command"] = "dim";
      rep.config["system"] = system;
      rep.config["primes"] = primes;
      auto S = parse_system(system);
      auto good = filter_primes(S, primes);
      rep.diagnostics.push_back({{"admissible_primes", good}});
      auto est = dim_estimate(singular_locus_spec(S), good, workers);
      rep.results.push_back(dim_estimate_json(est));
    } else if (*sc_chain) {
      rep.config["command"] = "chain-check";
      rep.config["system"] = system;
      rep.config["primes"] = primes;
      auto r = verify_chain_claims(parse_system(system), primes, workers);
      json tdims = json::array(), udims = json::array();
      for (const auto& e : r.t_est)
        tdims.push_back(e ? json(dim_estimate_json(*e)) : json(nullptr));
      for (const auto& e : r.u_est)
        udims.push_back(e ? json(dim_estimate_json(*e)) : json(nullptr));
      rep.results.push_back({{"s", r.s},
                             {"R", r.R},
                             {"dim_v_star", r.dim_v_star},
                             {"claim2_bound", sig15(r.claim2_bound)},
                             {"rel_ok", r.rel_ok},
                             {"interlace_ok", r.interlace_ok},
                             {"claim2_ok", r.claim2_ok},
                             {"complete", r.complete},
                             {"t_dims", tdims},
                             {"u_dims", udims}});
      for (const auto& n : r.notes) rep.diagnostics.push_back(n);
      if (!r.all_ok()) exit_code = kExitMathFail;
    } else if (*sc_codim) {
      rep.config["command"] = "codim-check";
      rep.config["system"] = system;
      rep.config["primes"] = primes;
      auto r = verify_codim_proposition(parse_system(system), primes, workers);
      rep.results.push_back({{"s", r.s},
                             {"R", r.R},
                             {"codim_f", r.codim_f},
                             {"codim_g1", r.codim_g1},
                             {"codim_g2", r.codim_g2},
                             {"bound", sig15(r.bound)},
                             {"ok", r.ok},
                             {"used_empty_dim", r.used_empty},
                             {"f_star", dim_estimate_json(r.f_star)},
                             {"g1_star", dim_estimate_json(r.g1_star)},
                             {"g2_star", dim_estimate_json(r.g2_star)}});
      if (!r.ok) exit_code = kExitMathFail;
    } else if (*sc_sseries) {
      rep.config["command"] = "sseries";
      rep.config["system"] = system;
      rep.config["Q"] = Q;
      auto S = parse_system(system);
      if (!chi_specs.empty()) {
        // restricted absolute sum over multiples of the character modulus
        std::vector<DirichletCharacter> parsed =
            resolve_chars(chi_specs, 1, S.vars());
        i64 k0 = 1;
        for (const auto& c : parsed) k0 = std::lcm(k0, c.modulus());
        CharacterSystem sys(parsed, k0);
        rep.config["chi"] = char_list_json(sys);
        double v = singular_series_lemma_sum(S, sys, Q, workers);
        rep.results.push_back({{"restricted_abs_sum", sig15(v)}, {"k0", k0}});
      } else {
        auto r = singular_series_partial(S, Q, workers);
        json dyadic = json::array();
        for (auto [qq, d] : r.dyadic)
          dyadic.push_back({{"Q", qq}, {"increment", sig15(d)}});
        rep.results.push_back({{"value", sig15(r.value)},
                               {"imag", sig15(r.imag)},
                               {"last_q", r.last_q},
                               {"complete", r.complete},
                               {"obstruction_flag", r.obstruction_flag},
                               {"dyadic", dyadic}});
        rep.diagnostics.push_back(
            "truncated sum only; stabilization is reported, not convergence");
      }
    } else if (*sc_sint) {
      rep.config["command"] = "sintegral";
      rep.config["system"] = system;
      rep.config["eps"] = eps;
      rep.config["samples"] = samples;
      auto S = parse_system(system);
      auto B = resolve_box(box_text, S.vars());
      auto r = singular_integral_estimate(S, B, eps, samples, workers);
      rep.results.push_back({{"value", sig15(r.value)},
                             {"value_half_eps", sig15(r.value_half_eps)},
                             {"sensitivity", sig15(r.sensitivity)},
                             {"eps", r.eps},
                             {"samples", r.samples}});
    } else if (*sc_count) {
      rep.config["command"] = "count-primes";
      rep.config["system"] = system;
      rep.config["X"] = X;
      auto S = parse_system(system);
      auto B = resolve_box(box_text, S.vars());
      double n = weighted_solution_count(S, X, B, workers);
      rep.results.push_back({{"weighted_count", sig15(n)}});
    } else if (*sc_asym) {
      rep.config["command"] = "asymptotic";
      rep.config["system"] = system;
      rep.config["X"] = X;
      auto S = parse_system(system);
      auto B = resolve_box(box_text, S.vars());
      std::optional<i64> qo;
      if (sc_asym->count("--Q")) qo = Q;
      auto r = asymptotic_report(S, X, B, qo, eps, samples, workers);
      json res = {{"X", r.X},
                  {"n_value", sig15(r.n_value)},
                  {"sseries", sig15(r.sseries)},
                  {"sintegral", sig15(r.sintegral)},
                  {"predicted", sig15(r.predicted)},
                  {"Q", sig15(r.Q)},
                  {"degree_sum", r.dsum}};
      if (r.no_real_solutions)
        res["ratio"] = "NoRealSolutions";
      else
        res["ratio"] = sig15(r.ratio);
      rep.results.push_back(res);
      rep.diagnostics.push_back(
          "truncated series and sampled integral; stabilization only");
    } else if (*sc_suite) {
      rep.config["command"] = "verify-suite";
      rep.config["level"] = level;
      bool all_pass = true;
      for (const auto& r : run_acceptance(workers)) {
        rep.results.push_back({{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"detail", r.detail},
                               {"seconds", sig15(r.seconds)}});
        if (!r.pass) all_pass = false;
      }
      if (!all_pass) exit_code = kExitMathFail;
    }
  } catch (const capacity_error& e) {
    rep.diagnostics.push_back(std::string("capacity: ") + e.what());
    rep.print(format);
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  rep.print(format);
  return exit_code;
}
