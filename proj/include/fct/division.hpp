#pragma once

#include <utility>
#include <vector>

#include "fct/polynomial.hpp"
#include "fct/term_order.hpp"

namespace fct {

inline std::pair<Monomial, Rational> leading_term(const Polynomial& f, const TermOrder& ord) {
  if (f.is_zero()) throw ZeroPolynomial("leading term of the zero polynomial");
  const auto* best = &f.terms().front();
  for (const auto& t : f.terms())
    if (ord.greater(t.first, best->first)) best = &t;
  return {best->first, best->second};
}

inline Monomial leading_monomial(const Polynomial& f, const TermOrder& ord) {
  return leading_term(f, ord).first;
}

// Multivariate division remainder. Deterministic: the leading monomial is
// always reduced first, divisors are tried in basis order.
inline Polynomial reduce(const Polynomial& f, const std::vector<Polynomial>& basis,
                         const TermOrder& ord) {
  std::vector<std::pair<Monomial, Rational>> leads;
  leads.reserve(basis.size());
  for (const auto& g : basis) leads.push_back(leading_term(g, ord));

  Polynomial h = f;
  std::vector<std::pair<Monomial, Rational>> tail;
  while (!h.is_zero()) {
    auto [lm, lc] = leading_term(h, ord);
    bool reduced = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (leads[i].first.divides(lm)) {
        h = h - basis[i].times_monomial(lm / leads[i].first, lc / leads[i].second);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      tail.emplace_back(lm, lc);
      h = h - Polynomial(lm, lc);
    }
  }
  return Polynomial::from_terms(std::move(tail));
}

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const TermOrder& ord) {
  auto [mf, cf] = leading_term(f, ord);
  auto [mg, cg] = leading_term(g, ord);
  Monomial l = mf.lcm(mg);
  return f.times_monomial(l / mf, Rational(1) / cf) -
         g.times_monomial(l / mg, Rational(1) / cg);
}

// Buchberger's criterion. S-pairs with coprime leading monomials are skipped
// (they always reduce to zero); every other S-polynomial must reduce to zero
// against the basis.
inline bool is_groebner_basis(const std::vector<Polynomial>& basis, const TermOrder& ord) {
  std::vector<Monomial> leads;
  leads.reserve(basis.size());
  for (const auto& g : basis) leads.push_back(leading_monomial(g, ord));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      if (leads[i].coprime_with(leads[j])) continue;
      Polynomial s = s_polynomial(basis[i], basis[j], ord);
      if (!reduce(s, basis, ord).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace fct
