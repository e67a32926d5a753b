#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "fct/errors.hpp"

namespace fct {

// Exact arbitrary-precision rational. Thin wrapper over GMP's mpq_class that
// keeps values canonical and hides expression templates from the rest of the
// code.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw Error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpz_class& z) : v_(z) {}
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rational from_string(const std::string& s) {
    Rational r;
    if (mpq_set_str(r.v_.get_mpq_t(), s.c_str(), 10) != 0)
      throw ParseError("bad rational literal: " + s);
    if (mpz_sgn(mpq_denref(r.v_.get_mpq_t())) == 0)
      throw ParseError("rational with zero denominator: " + s);
    r.v_.canonicalize();
    return r;
  }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw Error("division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }

  std::string str() const { return v_.get_str(); }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

}  // namespace fct
