#pragma once

#include <cctype>
#include <map>
#include <string>

#include "multigauss/common.hpp"

#include <json.hpp>

namespace mg {

struct Term {
  i64 coeff = 0;
  std::vector<int> exps;  // length s

  int total_degree() const {
    int d = 0;
    for (int e : exps) d += e;
    return d;
  }
};

// Homogeneous sparse polynomial in s variables.  Terms are normalized:
// distinct exponent vectors, nonzero coefficients.  The zero form keeps an
// explicit degree so Jacobian matrices stay well-shaped.
class Form {
 public:
  Form() = default;
  Form(int s, std::vector<Term> terms, int degree_if_zero = 0)
      : s_(s), degree_(degree_if_zero) {
    std::map<std::vector<int>, i64> merged;
    for (auto& t : terms) {
      if (int(t.exps.size()) != s)
        throw domain_error("form term has wrong variable count");
      merged[t.exps] += t.coeff;
    }
    bool first = true;
    for (auto& [e, c] : merged) {
      if (c == 0) continue;
      int d = 0;
      for (int x : e) d += x;
      if (first) {
        degree_ = d;
        first = false;
      } else if (d != degree_) {
        throw domain_error("form is not homogeneous");
      }
      terms_.push_back({c, e});
    }
  }

  int vars() const { return s_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  i64 eval_mod(const std::vector<i64>& x, i64 q) const {
    if (int(x.size()) != s_) throw domain_error("eval_mod: wrong point size");
    i64 acc = 0;
    for (const auto& t : terms_) {
      i64 v = mod_reduce(t.coeff, q);
      for (int i = 0; i < s_ && v != 0; ++i)
        if (t.exps[i] != 0) v = mul_mod(v, pow_mod(x[i], t.exps[i], q), q);
      acc = mod_reduce(acc + v, q);
    }
    return acc;
  }

  double eval_real(const std::vector<double>& x) const {
    double acc = 0;
    for (const auto& t : terms_) {
      double v = double(t.coeff);
      for (int i = 0; i < s_; ++i)
        for (int e = 0; e < t.exps[i]; ++e) v *= x[i];
      acc += v;
    }
    return acc;
  }

  Form derivative(int var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      if (t.exps[var] == 0) continue;
      Term d = t;
      d.coeff *= t.exps[var];
      d.exps[var] -= 1;
      out.push_back(std::move(d));
    }
    return Form(s_, std::move(out), std::max(degree_ - 1, 0));
  }

  Form scaled(i64 c) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff *= c;
    return Form(s_, std::move(out), degree_);
  }

  // Identify variables: each term's exponent of var `from` moves onto `to`.
  Form substitute_var(int from, int to) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) {
      t.exps[to] += t.exps[from];
      t.exps[from] = 0;
    }
    return Form(s_, std::move(out), degree_);
  }

 private:
  int s_ = 0;
  int degree_ = 0;
  std::vector<Term> terms_;
};

inline Form operator+(const Form& a, const Form& b) {
  std::vector<Term> t = a.terms();
  t.insert(t.end(), b.terms().begin(), b.terms().end());
  return Form(a.vars(), std::move(t), a.is_zero() ? b.degree() : a.degree());
}

struct FormSystem {
  std::vector<Form> forms;

  int vars() const { return forms.empty() ? 0 : forms[0].vars(); }
  int count() const { return int(forms.size()); }

  int max_degree() const {
    int d = 0;
    for (const auto& f : forms) d = std::max(d, f.degree());
    return d;
  }

  int degree_sum() const {
    int d = 0;
    for (const auto& f : forms) d += f.degree();
    return d;
  }
};

inline FormSystem degree_part(const FormSystem& S, int d) {
  FormSystem out;
  for (const auto& f : S.forms)
    if (f.degree() == d) out.forms.push_back(f);
  return out;
}

// ---------------------------------------------------------------------------
// Parser.  Grammar: forms separated by ';'; a form is a signed sum of terms
// c*x1^a1*x2^a2*... with optional coefficient and exponents.
// ---------------------------------------------------------------------------

namespace detail {

struct TermParse {
  i64 coeff;
  std::map<int, int> exps;  // 1-based variable -> exponent
};

class SystemParser {
 public:
  explicit SystemParser(const std::string& text) : text_(text) {}

  std::vector<std::vector<TermParse>> parse() {
    std::vector<std::vector<TermParse>> forms;
    forms.push_back(parse_form());
    while (peek() == ';') {
      ++pos_;
      forms.push_back(parse_form());
    }
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return forms;
  }

  int max_var = 0;

 private:
  std::vector<TermParse> parse_form() {
    std::vector<TermParse> terms;
    skip_ws();
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      if (peek() == '-') sign = -1;
      ++pos_;
    }
    terms.push_back(parse_term(sign));
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      terms.push_back(parse_term(c == '-' ? -1 : 1));
    }
    return terms;
  }

  TermParse parse_term(int sign) {
    TermParse t;
    t.coeff = sign;
    skip_ws();
    bool saw_factor = false;
    if (std::isdigit(peek())) {
      t.coeff = sign * parse_int();
      saw_factor = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        saw_factor = false;
      }
    }
    while (true) {
      skip_ws();
      if (peek() != 'x') break;
      ++pos_;
      if (!std::isdigit(peek())) fail("expected variable index after 'x'");
      int var = int(parse_int());
      if (var < 1) fail("variable indices start at 1");
      max_var = std::max(max_var, var);
      int e = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        if (!std::isdigit(peek())) fail("expected exponent after '^'");
        e = int(parse_int());
      }
      t.exps[var] += e;
      saw_factor = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        saw_factor = false;
        continue;
      }
      break;
    }
    if (!saw_factor) fail("expected a term");
    return t;
  }

  i64 parse_int() {
    std::size_t start = pos_;
    i64 v = 0;
    while (pos_ < text_.size() && std::isdigit(text_[pos_])) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("expected a number");
    return v;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(text_[pos_])) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error("form parse error at position " + std::to_string(pos_) +
                          ": " + msg,
                      pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FormSystem parse_system(const std::string& text) {
  detail::SystemParser p(text);
  auto raw = p.parse();
  int s = p.max_var;
  if (s == 0) throw parse_error("system has no variables", 0);
  FormSystem out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<Term> terms;
    for (const auto& tp : raw[i]) {
      Term t;
      t.coeff = tp.coeff;
      t.exps.assign(std::size_t(s), 0);
      for (auto [var, e] : tp.exps) t.exps[std::size_t(var - 1)] = e;
      terms.push_back(std::move(t));
    }
    try {
      out.forms.emplace_back(s, std::move(terms));
    } catch (const domain_error&) {
      throw parse_error("form " + std::to_string(i + 1) + " is not homogeneous",
                        0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jacobians and the paper-specific derived systems
// ---------------------------------------------------------------------------

// Rows = forms, columns = first k variables.
inline std::vector<std::vector<Form>> jacobian(const FormSystem& S, int k) {
  if (k < 1 || k > S.vars()) throw domain_error("jacobian: bad column cutoff");
  std::vector<std::vector<Form>> J;
  for (const auto& f : S.forms) {
    std::vector<Form> row;
    for (int j = 0; j < k; ++j) row.push_back(f.derivative(j));
    J.push_back(std::move(row));
  }
  return J;
}

inline std::vector<std::vector<Form>> jacobian(const FormSystem& S) {
  return jacobian(S, S.vars());
}

// G(x;y) = F(x1*y1, ..., xs*ys), bihomogeneous of bidegree (d, d).
// Variable blocks: (x | y).
inline Form bihomogenize(const Form& F) {
  int s = F.vars();
  std::vector<Term> out;
  for (const auto& t : F.terms()) {
    Term g;
    g.coeff = t.coeff;
    g.exps.assign(std::size_t(2 * s), 0);
    for (int i = 0; i < s; ++i) {
      g.exps[std::size_t(i)] = t.exps[std::size_t(i)];
      g.exps[std::size_t(s + i)] = t.exps[std::size_t(i)];
    }
    out.push_back(std::move(g));
  }
  return Form(2 * s, std::move(out), 2 * F.degree());
}

inline FormSystem bihomogenize(const FormSystem& S) {
  FormSystem out;
  for (const auto& f : S.forms) out.forms.push_back(bihomogenize(f));
  return out;
}

// L(h,h';j,j') = G(h;j) - G(h;j') - G(h';j) + G(h';j') in variable blocks
// (h | h' | j | j').  Vanishes identically when h = h' or j = j'.
inline Form quadruple_difference(const Form& F) {
  int s = F.vars();
  std::vector<Term> out;
  auto emit = [&](int sign, int hblock, int jblock) {
    for (const auto& t : F.terms()) {
      Term g;
      g.coeff = sign * t.coeff;
      g.exps.assign(std::size_t(4 * s), 0);
      for (int i = 0; i < s; ++i) {
        g.exps[std::size_t(hblock * s + i)] += t.exps[std::size_t(i)];
        g.exps[std::size_t(jblock * s + i)] += t.exps[std::size_t(i)];
      }
      out.push_back(std::move(g));
    }
  };
  emit(+1, 0, 2);
  emit(-1, 0, 3);
  emit(-1, 1, 2);
  emit(+1, 1, 3);
  Form L(4 * s, std::move(out), 2 * F.degree());

  // construction-time sanity: identifying h'=h (or j'=j) kills L
  Form collapse_h = L, collapse_j = L;
  for (int i = 0; i < s; ++i) {
    collapse_h = collapse_h.substitute_var(s + i, i);
    collapse_j = collapse_j.substitute_var(3 * s + i, 2 * s + i);
  }
  if (!collapse_h.is_zero() || !collapse_j.is_zero())
    throw domain_error("quadruple_difference: symmetry check failed");
  return L;
}

inline FormSystem quadruple_difference(const FormSystem& S) {
  FormSystem out;
  for (const auto& f : S.forms) out.forms.push_back(quadruple_difference(f));
  return out;
}

// ---------------------------------------------------------------------------
// Power tables for grid evaluation: tab[v * (maxdeg+1) + e] = v^e mod q
// ---------------------------------------------------------------------------

struct PowerTable {
  i64 q = 1;
  int maxdeg = 0;
  std::vector<i64> tab;

  PowerTable(i64 q_, int maxdeg_) : q(q_), maxdeg(maxdeg_) {
    tab.assign(std::size_t(q) * std::size_t(maxdeg + 1), 1);
    for (i64 v = 0; v < q; ++v) {
      tab[std::size_t(v) * (maxdeg + 1)] = 1 % q;
      for (int e = 1; e <= maxdeg; ++e)
        tab[std::size_t(v) * (maxdeg + 1) + e] =
            mul_mod(tab[std::size_t(v) * (maxdeg + 1) + e - 1], v, q);
    }
  }

  i64 pow(i64 v, int e) const { return tab[std::size_t(v) * (maxdeg + 1) + e]; }
};

inline i64 eval_with_table(const Form& F, const PowerTable& pt,
                           const std::vector<i64>& x) {
  i64 acc = 0;
  for (const auto& t : F.terms()) {
    i64 v = mod_reduce(t.coeff, pt.q);
    for (int i = 0; i < F.vars() && v != 0; ++i)
      if (t.exps[std::size_t(i)] != 0)
        v = mul_mod(v, pt.pow(x[std::size_t(i)], t.exps[std::size_t(i)]), pt.q);
    acc += v;
    if (acc >= pt.q) acc -= pt.q;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// JSON import/export: {s, forms: [{terms: [{coeff, exps}]}]}
// ---------------------------------------------------------------------------

inline nlohmann::json system_to_json(const FormSystem& S) {
  nlohmann::json j;
  j["s"] = S.vars();
  j["forms"] = nlohmann::json::array();
  for (const auto& f : S.forms) {
    nlohmann::json jf;
    jf["degree"] = f.degree();
    jf["terms"] = nlohmann::json::array();
    for (const auto& t : f.terms())
      jf["terms"].push_back({{"coeff", t.coeff}, {"exps", t.exps}});
    j["forms"].push_back(std::move(jf));
  }
  return j;
}

inline FormSystem system_from_json(const nlohmann::json& j) {
  int s = j.at("s").get<int>();
  FormSystem out;
  for (const auto& jf : j.at("forms")) {
    std::vector<Term> terms;
    for (const auto& jt : jf.at("terms")) {
      Term t;
      t.coeff = jt.at("coeff").get<i64>();
      t.exps = jt.at("exps").get<std::vector<int>>();
      if (int(t.exps.size()) != s)
        throw domain_error("system_from_json: exps length mismatch");
      terms.push_back(std::move(t));
    }
    out.forms.emplace_back(s, std::move(terms),
                           jf.value("degree", 0));
  }
  return out;
}

inline std::string system_to_text(const FormSystem& S) {
  std::string out;
  for (std::size_t fi = 0; fi < S.forms.size(); ++fi) {
    if (fi) out += "; ";
    const auto& terms = S.forms[fi].terms();
    if (terms.empty()) out += "0";
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      i64 c = terms[ti].coeff;
      if (ti == 0)
        out += c < 0 ? "-" : "";
      else
        out += c < 0 ? " - " : " + ";
      i64 ac = std::abs(c);
      bool printed = false;
      if (ac != 1 || terms[ti].total_degree() == 0) {
        out += std::to_string(ac);
        printed = true;
      }
      for (std::size_t v = 0; v < terms[ti].exps.size(); ++v) {
        int e = terms[ti].exps[v];
        if (e == 0) continue;
        if (printed) out += "*";
        out += "x" + std::to_string(v + 1);
        if (e > 1) out += "^" + std::to_string(e);
        printed = true;
      }
    }
  }
  return out;
}

}  // namespace mg
