#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fct/division.hpp"
#include "fct/graph.hpp"
#include "fct/invariants.hpp"
#include "fct/modular.hpp"
#include "fct/polynomial.hpp"
#include "fct/util.hpp"

namespace fct {

// One exact point of the parametrized covariance model: integer loadings and
// noise variances, with the implied off-diagonal and diagonal entries.
struct ModelSample {
  std::map<std::pair<std::string, std::string>, Rational> lambda;  // keyed by edge
  std::map<std::string, Rational> omega;
  std::map<PairLabel, Rational> sigma;
  std::map<std::string, Rational> diag;
};

// Loadings are drawn per edge in canonical edge order, then noise variances
// per observed node, all uniform on [1, 2^20]; the covariance entries follow
// exactly.
inline ModelSample sample_model_point(const FactorGraph& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ModelSample s;
  for (const auto& e : g.edges())
    s.lambda[e] = Rational(static_cast<long>(rng.next_coefficient()));
  for (const auto& v : g.observed())
    s.omega[v] = Rational(static_cast<long>(rng.next_coefficient()));

  auto loading = [&](int h, int v) {
    return s.lambda.at({g.latent()[h], g.observed()[v]});
  };
  for (auto [i, j] : g.all_pairs()) {
    Rational total(0);
    for (int h : g.joint_parents(i, j)) total += loading(h, i) * loading(h, j);
    s.sigma[make_pair_label(g.observed()[i], g.observed()[j])] = total;
  }
  for (int v = 0; v < g.p(); ++v) {
    Rational total = s.omega.at(g.observed()[v]);
    for (int h : g.parents_of(v)) total += loading(h, v) * loading(h, v);
    s.diag[g.observed()[v]] = total;
  }
  return s;
}

// Substitutes the parametrization symbolically: s_u_v becomes the sum of
// l_u_h * l_v_h over the joint parents h. The result must be identically zero
// as a polynomial in the loadings, which certifies membership in the
// vanishing ideal (one inclusion; no sampling involved).
inline bool verify_vanishes(const Polynomial& f, const FactorGraph& g) {
  std::map<Variable, Polynomial> assignment;
  for (auto [i, j] : g.all_pairs()) {
    Polynomial image;
    for (int h : g.joint_parents(i, j)) {
      image = image + Polynomial(Monomial(g.lambda_var(h, i)) * Monomial(g.lambda_var(h, j)));
    }
    assignment[g.sigma(i, j)] = std::move(image);
  }
  return substitute(f, assignment).is_zero();
}

struct VanishingBasisRequest {
  const FactorGraph* graph = nullptr;
  int degree = 1;
  std::optional<std::vector<Variable>> support;  // defaults to all pairs
  bool homogeneous_only = false;
  std::size_t cap = 50000;
};

namespace detail {

inline std::vector<Variable> default_support(const FactorGraph& g) {
  std::vector<Variable> out;
  for (auto [i, j] : g.all_pairs()) out.push_back(g.sigma(i, j));
  return out;
}

// Monomials over the support of degree exactly d (homogeneous) or up to d,
// as sorted index multisets, enumerated in a fixed lexicographic order.
inline std::vector<std::vector<int>> enumerate_monomials(std::size_t nvars, int degree,
                                                         bool homogeneous_only,
                                                         std::size_t cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!homogeneous_only || static_cast<int>(cur.size()) == degree) {
      if (out.size() >= cap)
        throw CapExceeded("monomial count exceeds cap of " + std::to_string(cap));
      out.push_back(cur);
    }
    if (static_cast<int>(cur.size()) == degree) return;
    for (std::size_t v = start; v < nvars; ++v) {
      cur.push_back(static_cast<int>(v));
      rec(v);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

struct BasisOutcome {
  std::vector<Polynomial> certified;
  std::size_t kernel_found = 0;
};

inline BasisOutcome vanishing_basis_detailed(const VanishingBasisRequest& req,
                                             std::uint64_t seed) {
  if (req.graph == nullptr) throw Error("request without a graph");
  const FactorGraph& g = *req.graph;
  std::vector<Variable> support = req.support ? *req.support : default_support(g);
  for (const auto& v : support) {
    if (!v.is_sigma()) throw Error("support must consist of covariance variables");
    g.observed_index(v.first());
    g.observed_index(v.second());
  }

  auto monomials =
      enumerate_monomials(support.size(), req.degree, req.homogeneous_only, req.cap);
  std::size_t cols = monomials.size();
  if (cols == 0) return {};
  std::size_t rows = (cols * 12 + 9) / 10;  // ceil(1.2 * cols)

  SplitMix64 prime_rng(stream_seed(seed, 0x5052494D45ull));  // dedicated prime stream
  modular::u64 p = modular::random_prime(prime_rng);

  // row i evaluates every monomial at the sample with stream index i
  std::vector<std::vector<modular::u64>> matrix(rows);
  parallel_for(rows, [&](std::size_t i) {
    ModelSample s = sample_model_point(g, stream_seed(seed, i));
    std::vector<modular::u64> var_value(support.size());
    for (std::size_t v = 0; v < support.size(); ++v) {
      const Variable& var = support[v];
      mpz_class num = s.sigma.at({var.first(), var.second()}).numerator();
      var_value[v] = mpz_fdiv_ui(num.get_mpz_t(), p);  // entries are integers
    }
    std::vector<modular::u64> row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      modular::u64 x = 1 % p;
      for (int idx : monomials[c]) x = modular::mulmod(x, var_value[idx], p);
      row[c] = x;
    }
    matrix[i] = std::move(row);
  });

  auto kernel = modular::nullspace(matrix, p);

  BasisOutcome out;
  out.kernel_found = kernel.size();
  for (const auto& vec : kernel) {
    std::vector<std::pair<Monomial, Rational>> terms;
    for (std::size_t c = 0; c < cols; ++c) {
      if (vec[c] == 0) continue;
      modular::LiftedRational lift{};
      if (!modular::rational_lift(vec[c], p, lift))
        throw LiftFailed("kernel coordinate " + std::to_string(vec[c]) +
                         " mod " + std::to_string(p) + " has no small rational lift");
      std::vector<std::pair<Variable, int>> factors;
      for (int idx : monomials[c]) factors.emplace_back(support[idx], 1);
      terms.emplace_back(Monomial::from_factors(std::move(factors)),
                         Rational(lift.num) * (Rational(1) / Rational(static_cast<long>(lift.den))));
    }
    Polynomial candidate = Polynomial::from_terms(std::move(terms));
    if (!candidate.is_zero() && verify_vanishes(candidate, g))
      out.certified.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace detail

// Certified elements of the vanishing ideal among polynomials over the
// requested support and degree window. Probabilistic search (modular
// evaluation at random model points, nullspace, rational lift) followed by
// exact symbolic certification; only certified elements are returned, and a
// kernel vector that fails to lift raises LiftFailed rather than being
// dropped.
inline std::vector<Polynomial> vanishing_basis(const VanishingBasisRequest& req,
                                               std::uint64_t seed = 0) {
  return detail::vanishing_basis_detailed(req, seed).certified;
}

struct ReductionReport {
  std::size_t found = 0;        // kernel vectors before certification
  std::size_t certified = 0;    // elements proven to vanish
  std::size_t reduced_to_zero = 0;
  std::vector<Polynomial> irreducible;  // certified, normal form nonzero
};

// Searches the vanishing ideal up to the given degree and reduces every
// certified element against the candidate generating set; elements with a
// nonzero normal form witness that the candidate set is incomplete.
inline ReductionReport reduction_evidence(const FactorGraph& g, const GeneratorSet& candidate,
                                          int degree,
                                          std::optional<std::vector<Variable>> support = {},
                                          std::uint64_t seed = 0) {
  VanishingBasisRequest req;
  req.graph = &g;
  req.degree = degree;
  req.support = std::move(support);
  detail::BasisOutcome outcome = detail::vanishing_basis_detailed(req, seed);

  ReductionReport rep;
  rep.found = outcome.kernel_found;
  rep.certified = outcome.certified.size();
  std::vector<Polynomial> basis = candidate.all();
  for (const auto& f : outcome.certified) {
    if (reduce(f, basis, candidate.order).is_zero())
      ++rep.reduced_to_zero;
    else
      rep.irreducible.push_back(f);
  }
  return rep;
}

inline nlohmann::ordered_json reduction_report_json(const ReductionReport& rep,
                                                    const TermOrder& ord) {
  nlohmann::ordered_json j;
  j["found"] = rep.found;
  j["certified"] = rep.certified;
  j["reduced_to_zero"] = rep.reduced_to_zero;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto cmp = ord.cmp_fn();
  for (const auto& f : rep.irreducible) arr.push_back(f.str(cmp));
  j["irreducible_examples"] = std::move(arr);
  return j;
}

}  // namespace fct
