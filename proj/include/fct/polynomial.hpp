#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fct/monomial.hpp"
#include "fct/rational.hpp"

namespace fct {

// Sparse multivariate polynomial with exact rational coefficients. Terms are
// stored sorted descending by the structural monomial order with no zero
// coefficients, so equality is representational.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(const Rational& c) {
    if (!c.is_zero()) terms_.emplace_back(Monomial::one(), c);
  }

  explicit Polynomial(const Variable& v) { terms_.emplace_back(Monomial(v), Rational(1)); }

  explicit Polynomial(const Monomial& m, const Rational& c = Rational(1)) {
    if (!c.is_zero()) terms_.emplace_back(m, c);
  }

  static Polynomial zero() { return Polynomial(); }

  static Polynomial from_terms(std::vector<std::pair<Monomial, Rational>> ts) {
    std::map<Monomial, Rational, std::function<bool(const Monomial&, const Monomial&)>>
        acc([](const Monomial& a, const Monomial& b) { return a.cmp(b) > 0; });
    for (auto& [m, c] : ts) {
      auto [it, fresh] = acc.emplace(m, c);
      if (!fresh) it->second += c;
    }
    Polynomial p;
    for (auto& [m, c] : acc)
      if (!c.is_zero()) p.terms_.emplace_back(m, c);
    return p;
  }

  const std::vector<std::pair<Monomial, Rational>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  std::vector<Variable> variables() const {
    std::vector<Variable> vs;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.factors()) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    while (it != terms_.end() || jt != o.terms_.end()) {
      if (jt == o.terms_.end() || (it != terms_.end() && it->first.cmp(jt->first) > 0)) {
        r.terms_.push_back(*it++);
      } else if (it == terms_.end() || jt->first.cmp(it->first) > 0) {
        r.terms_.push_back(*jt++);
      } else {
        Rational c = it->second + jt->second;
        if (!c.is_zero()) r.terms_.emplace_back(it->first, c);
        ++it;
        ++jt;
      }
    }
    return r;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

  Polynomial operator*(const Polynomial& o) const {
    std::vector<std::pair<Monomial, Rational>> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) prod.emplace_back(ma * mb, ca * cb);
    return from_terms(std::move(prod));
  }

  Polynomial scaled(const Rational& c) const {
    if (c.is_zero()) return Polynomial();
    Polynomial r(*this);
    for (auto& [m, k] : r.terms_) k *= c;
    return r;
  }

  Polynomial times_monomial(const Monomial& m, const Rational& c) const {
    if (c.is_zero()) return Polynomial();
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& [mm, cc] : terms_) r.terms_.emplace_back(mm * m, cc * c);
    // multiplying by a fixed monomial preserves the structural order of terms
    return r;
  }

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  std::string str() const {
    return str([](const Monomial& a, const Monomial& b) { return a.cmp(b); });
  }

  // Renders terms in descending order of the given comparison (>0 means the
  // first argument is larger). Canonical text: " - "/" + " separators, unit
  // coefficients dropped, exponents as ^k.
  std::string str(const std::function<int(const Monomial&, const Monomial&)>& cmp) const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<Monomial, Rational>*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [&](const auto* x, const auto* y) { return cmp(x->first, y->first) > 0; });
    std::string s;
    bool first = true;
    for (const auto* t : order) {
      Rational c = t->second;
      bool neg = c.sign() < 0;
      if (first) {
        if (neg) s += "-";
        first = false;
      } else {
        s += neg ? " - " : " + ";
      }
      Rational a = neg ? -c : c;
      if (t->first.is_one()) {
        s += a.str();
      } else {
        if (!a.is_one()) s += a.str() + "*";
        s += t->first.str();
      }
    }
    return s;
  }

 private:
  std::vector<std::pair<Monomial, Rational>> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p.scaled(c); }

// Replaces every variable of f by its image under the assignment; the image
// map must cover all variables of f. Substitution is a ring homomorphism,
// computed term by term.
inline Polynomial substitute(const Polynomial& f,
                             const std::map<Variable, Polynomial>& assignment) {
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    Polynomial term(c);
    for (const auto& [v, e] : m.factors()) {
      auto it = assignment.find(v);
      if (it == assignment.end()) throw MissingAssignment("no assignment for " + v.str());
      for (int k = 0; k < e; ++k) term = term * it->second;
    }
    out = out + term;
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(const std::string& text) : s_(text) {}

  Polynomial parse() {
    std::vector<std::pair<Monomial, Rational>> terms;
    skip_ws();
    if (done()) throw ParseError("empty polynomial text");
    bool neg = consume_sign();
    for (;;) {
      terms.push_back(parse_term(neg));
      skip_ws();
      if (done()) break;
      char c = s_[pos_];
      if (c == '+' || c == '-') {
        ++pos_;
        neg = c == '-';
      } else {
        throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                         std::to_string(pos_));
      }
    }
    return Polynomial::from_terms(std::move(terms));
  }

 private:
  bool done() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume_sign() {
    skip_ws();
    if (!done() && (s_[pos_] == '+' || s_[pos_] == '-')) return s_[pos_++] == '-';
    return false;
  }

  std::pair<Monomial, Rational> parse_term(bool neg) {
    skip_ws();
    Rational coeff(1);
    bool saw_coeff = false;
    if (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      coeff = parse_rational();
      saw_coeff = true;
      skip_ws();
      if (!done() && s_[pos_] == '*') {
        ++pos_;
        skip_ws();
      }
    }
    std::vector<std::pair<Variable, int>> factors;
    for (;;) {
      skip_ws();
      if (done() || (s_[pos_] != 's' && s_[pos_] != 'l')) break;
      factors.push_back(parse_factor());
      skip_ws();
      if (!done() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (factors.empty() && !saw_coeff)
      throw ParseError("expected term at offset " + std::to_string(pos_));
    if (neg) coeff = -coeff;
    return {Monomial::from_factors(std::move(factors)), coeff};
  }

  Rational parse_rational() {
    std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string num = s_.substr(start, pos_ - start);
    std::size_t save = pos_;
    skip_ws();
    if (!done() && s_[pos_] == '/') {
      ++pos_;
      skip_ws();
      std::size_t dstart = pos_;
      while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (dstart == pos_) throw ParseError("expected denominator at offset " + std::to_string(pos_));
      return Rational::from_string(num + "/" + s_.substr(dstart, pos_ - dstart));
    }
    pos_ = save;
    return Rational::from_string(num);
  }

  std::pair<Variable, int> parse_factor() {
    char kind = s_[pos_++];
    if (done() || s_[pos_] != '_')
      throw ParseError("expected '_' after variable kind at offset " + std::to_string(pos_));
    ++pos_;
    std::string a = parse_label();
    if (done() || s_[pos_] != '_')
      throw ParseError("expected '_' between labels at offset " + std::to_string(pos_));
    ++pos_;
    std::string b = parse_label();
    Variable v = kind == 's' ? Variable::sigma(a, b) : Variable::lambda(a, b);
    int exp = 1;
    if (!done() && s_[pos_] == '^') {
      ++pos_;
      std::size_t estart = pos_;
      while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (estart == pos_) throw ParseError("expected exponent at offset " + std::to_string(pos_));
      exp = std::stoi(s_.substr(estart, pos_ - estart));
    }
    return {v, exp};
  }

  std::string parse_label() {
    std::size_t start = pos_;
    while (!done() && label_char(s_[pos_])) ++pos_;
    if (start == pos_) throw ParseError("expected label at offset " + std::to_string(pos_));
    return s_.substr(start, pos_ - start);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text) {
  return detail::PolyParser(text).parse();
}

}  // namespace fct
