#pragma once

#include <algorithm>
#include <vector>

#include "fct/variable.hpp"

namespace fct {

// Power product of variables. Factors are kept sorted by the structural
// variable order with strictly positive exponents, so equal monomials have
// equal representations.
class Monomial {
 public:
  Monomial() = default;

  explicit Monomial(const Variable& v) { factors_.emplace_back(v, 1); }

  static Monomial one() { return Monomial(); }

  static Monomial from_factors(std::vector<std::pair<Variable, int>> fs) {
    std::sort(fs.begin(), fs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Monomial m;
    for (auto& [v, e] : fs) {
      if (e == 0) continue;
      if (e < 0) throw Error("negative exponent");
      if (!m.factors_.empty() && m.factors_.back().first == v)
        m.factors_.back().second += e;
      else
        m.factors_.emplace_back(v, e);
    }
    return m;
  }

  const std::vector<std::pair<Variable, int>>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [v, e] : factors_) d += e;
    return d;
  }

  int exponent_of(const Variable& v) const {
    for (const auto& [w, e] : factors_)
      if (w == v) return e;
    return 0;
  }

  bool contains(const Variable& v) const { return exponent_of(v) > 0; }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    auto it = factors_.begin();
    auto jt = o.factors_.begin();
    while (it != factors_.end() || jt != o.factors_.end()) {
      if (jt == o.factors_.end() || (it != factors_.end() && it->first < jt->first)) {
        r.factors_.push_back(*it++);
      } else if (it == factors_.end() || jt->first < it->first) {
        r.factors_.push_back(*jt++);
      } else {
        r.factors_.emplace_back(it->first, it->second + jt->second);
        ++it;
        ++jt;
      }
    }
    return r;
  }

  bool divides(const Monomial& o) const {
    auto jt = o.factors_.begin();
    for (const auto& [v, e] : factors_) {
      while (jt != o.factors_.end() && jt->first < v) ++jt;
      if (jt == o.factors_.end() || !(jt->first == v) || jt->second < e) return false;
    }
    return true;
  }

  // Quotient this / o; throws when o does not divide *this.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    auto jt = o.factors_.begin();
    for (const auto& [v, e] : factors_) {
      if (jt != o.factors_.end() && jt->first < v)
        throw Error("monomial division underflow");
      int sub = 0;
      if (jt != o.factors_.end() && jt->first == v) {
        sub = jt->second;
        ++jt;
      }
      if (sub > e) throw Error("monomial division underflow");
      if (e - sub > 0) r.factors_.emplace_back(v, e - sub);
    }
    if (jt != o.factors_.end()) throw Error("monomial division underflow");
    return r;
  }

  Monomial lcm(const Monomial& o) const {
    Monomial r;
    auto it = factors_.begin();
    auto jt = o.factors_.begin();
    while (it != factors_.end() || jt != o.factors_.end()) {
      if (jt == o.factors_.end() || (it != factors_.end() && it->first < jt->first)) {
        r.factors_.push_back(*it++);
      } else if (it == factors_.end() || jt->first < it->first) {
        r.factors_.push_back(*jt++);
      } else {
        r.factors_.emplace_back(it->first, std::max(it->second, jt->second));
        ++it;
        ++jt;
      }
    }
    return r;
  }

  bool coprime_with(const Monomial& o) const {
    auto it = factors_.begin();
    auto jt = o.factors_.begin();
    while (it != factors_.end() && jt != o.factors_.end()) {
      if (it->first < jt->first)
        ++it;
      else if (jt->first < it->first)
        ++jt;
      else
        return false;
    }
    return true;
  }

  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

  // Structural comparison: total degree first, then the exploded variable
  // sequences position by position; at the first difference the larger
  // variable wins. Graded and total, used for canonical storage and for
  // printing when no term order is in play.
  int cmp(const Monomial& o) const {
    if (int dd = degree() - o.degree()) return dd < 0 ? -1 : 1;
    auto it = factors_.begin();
    auto jt = o.factors_.begin();
    int ei = 0, ej = 0;  // units of the current factor already consumed
    while (it != factors_.end() && jt != o.factors_.end()) {
      if (int c = it->first.cmp(jt->first)) return c;
      int ri = it->second - ei;
      int rj = jt->second - ej;
      int step = ri < rj ? ri : rj;
      ei += step;
      ej += step;
      if (ei == it->second) {
        ++it;
        ei = 0;
      }
      if (ej == jt->second) {
        ++jt;
        ej = 0;
      }
    }
    return 0;
  }

  bool operator<(const Monomial& o) const { return cmp(o) < 0; }

  std::string str() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (const auto& [v, e] : factors_) {
      if (!s.empty()) s += "*";
      s += v.str();
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
  }

 private:
  std::vector<std::pair<Variable, int>> factors_;
};

}  // namespace fct
