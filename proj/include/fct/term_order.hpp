#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fct/monomial.hpp"

namespace fct {

// Monomial order driven by one circular embedding of the observed vertices.
// Covariance variables fall into distance classes (cyclic distance between
// their endpoints, 1 .. floor(n/2)); monomials are compared by per-class
// total degree, smallest distance class first, so a product of short chords
// always beats a product of long ones. In particular, for any four embedded
// vertices both noncrossing pairings of the induced quadrilateral exceed the
// crossing one: the shortest side involved lies in a strictly smaller class
// than both diagonals. Remaining ties fall to a graded lexicographic
// comparison under a fixed variable priority; two built-in priorities are
// provided so order-dependent results can be cross-checked.
class TermOrder {
 public:
  enum class TieBreak { standard, alternate };

  TermOrder() = default;

  explicit TermOrder(std::vector<std::string> embedding, TieBreak tb = TieBreak::standard)
      : embedding_(std::move(embedding)), tie_(tb) {
    for (std::size_t i = 0; i < embedding_.size(); ++i) {
      if (!position_.emplace(embedding_[i], i).second)
        throw Error("repeated vertex in embedding: " + embedding_[i]);
    }
  }

  const std::vector<std::string>& embedding() const { return embedding_; }
  TieBreak tie_break() const { return tie_; }
  std::size_t size() const { return embedding_.size(); }

  std::size_t position(const std::string& label) const {
    auto it = position_.find(label);
    if (it == position_.end()) throw UnknownVertex("vertex not embedded: " + label);
    return it->second;
  }

  // Cyclic distance between the endpoints, in 1 .. floor(n/2).
  int class_of(const Variable& v) const {
    if (!v.is_sigma()) throw Error("distance class of a non-covariance variable");
    std::size_t i = position(v.first());
    std::size_t j = position(v.second());
    std::size_t d = i < j ? j - i : i - j;
    std::size_t n = embedding_.size();
    return static_cast<int>(d <= n - d ? d : n - d);
  }

  // Sign of a - b in this order.
  int compare(const Monomial& a, const Monomial& b) const {
    std::size_t n = embedding_.size();
    std::size_t nclasses = n / 2;
    std::vector<int> ca(nclasses + 1, 0), cb(nclasses + 1, 0);
    int la = 0, lb = 0;
    tally(a, ca, la);
    tally(b, cb, lb);
    for (std::size_t k = 1; k <= nclasses; ++k)
      if (ca[k] != cb[k]) return ca[k] > cb[k] ? 1 : -1;
    if (la != lb) return la > lb ? 1 : -1;
    return lex_tie_break(a, b);
  }

  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  std::function<int(const Monomial&, const Monomial&)> cmp_fn() const {
    return [this](const Monomial& a, const Monomial& b) { return compare(a, b); };
  }

 private:
  void tally(const Monomial& m, std::vector<int>& classes, int& lambda_deg) const {
    for (const auto& [v, e] : m.factors()) {
      if (v.is_sigma())
        classes[static_cast<std::size_t>(class_of(v))] += e;
      else
        lambda_deg += e;
    }
  }

  // Priority key; lexicographically smaller key = more significant variable.
  std::array<long, 4> priority(const Variable& v) const {
    if (v.is_sigma()) {
      long p1 = static_cast<long>(position(v.first()));
      long p2 = static_cast<long>(position(v.second()));
      if (p1 > p2) std::swap(p1, p2);
      long cls = class_of(v);
      if (tie_ == TieBreak::standard) return {0, cls, p1, p2};
      long n = static_cast<long>(embedding_.size());
      return {0, cls, n - 1 - p2, n - 1 - p1};
    }
    return {1, 0, 0, 0};
  }

  // v strictly more significant than w.
  bool more_significant(const Variable& v, const Variable& w) const {
    auto kv = priority(v);
    auto kw = priority(w);
    if (kv != kw) return kv < kw;
    return v < w;  // lambda variables, and a final structural refinement
  }

  int lex_tie_break(const Monomial& a, const Monomial& b) const {
    std::vector<Variable> vars;
    for (const auto& [v, e] : a.factors()) vars.push_back(v);
    for (const auto& [v, e] : b.factors()) vars.push_back(v);
    std::sort(vars.begin(), vars.end(),
              [this](const Variable& x, const Variable& y) { return more_significant(x, y); });
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (const auto& v : vars) {
      int ea = a.exponent_of(v);
      int eb = b.exponent_of(v);
      if (ea != eb) return ea > eb ? 1 : -1;
    }
    return 0;
  }

  std::vector<std::string> embedding_;
  std::map<std::string, std::size_t> position_;
  TieBreak tie_ = TieBreak::standard;
};

}  // namespace fct
