#pragma once

#include <string>
#include <utility>

#include "fct/errors.hpp"
#include "fct/util.hpp"

namespace fct {

// A polynomial indeterminate: either an off-diagonal covariance entry
// s_<u>_<v> (unordered pair of observed labels, stored with u before v in
// shortlex order) or a loading l_<v>_<h> (observed label, latent label).
class Variable {
 public:
  enum class Kind { sigma, lambda };

  static Variable sigma(const std::string& u, const std::string& v) {
    if (u == v) throw DiagonalVariable("diagonal entry s_" + u + "_" + u);
    Variable x;
    x.kind_ = Kind::sigma;
    if (shortlex_less(u, v)) {
      x.a_ = u;
      x.b_ = v;
    } else {
      x.a_ = v;
      x.b_ = u;
    }
    return x;
  }

  static Variable lambda(const std::string& v, const std::string& h) {
    Variable x;
    x.kind_ = Kind::lambda;
    x.a_ = v;
    x.b_ = h;
    return x;
  }

  Kind kind() const { return kind_; }
  bool is_sigma() const { return kind_ == Kind::sigma; }
  const std::string& first() const { return a_; }
  const std::string& second() const { return b_; }

  std::string str() const {
    return (kind_ == Kind::sigma ? "s_" : "l_") + a_ + "_" + b_;
  }

  // Structural order: sigma variables before lambda variables, then both
  // label components in shortlex order. Used for canonical storage only;
  // monomial comparison in ideals goes through TermOrder.
  int cmp(const Variable& o) const {
    if (kind_ != o.kind_) return kind_ == Kind::sigma ? -1 : 1;
    if (int c = shortlex_cmp(a_, o.a_)) return c;
    return shortlex_cmp(b_, o.b_);
  }

  bool operator==(const Variable& o) const {
    return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_;
  }
  bool operator!=(const Variable& o) const { return !(*this == o); }
  bool operator<(const Variable& o) const { return cmp(o) < 0; }

 private:
  Kind kind_ = Kind::sigma;
  std::string a_, b_;
};

}  // namespace fct
