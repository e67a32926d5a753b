#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fct/division.hpp"
#include "fct/graph.hpp"
#include "fct/polynomial.hpp"
#include "fct/term_order.hpp"

namespace fct {

// Two chords of a circular embedding cross when their endpoint arcs
// interleave; chords sharing an endpoint also count as crossing (they can
// never sit together in a planar matching).
inline bool crossing(const std::vector<std::string>& embedding,
                     const std::pair<std::string, std::string>& e1,
                     const std::pair<std::string, std::string>& e2) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < embedding.size(); ++i) pos[embedding[i]] = i;
  auto at = [&](const std::string& v) {
    auto it = pos.find(v);
    if (it == pos.end()) throw UnknownVertex("vertex not embedded: " + v);
    return it->second;
  };
  std::size_t a = at(e1.first), b = at(e1.second);
  std::size_t c = at(e2.first), d = at(e2.second);
  if (a == b || c == d) throw UnknownVertex("chord endpoints must be distinct");
  if (a == c || a == d || b == c || b == d) return true;
  if (a > b) std::swap(a, b);
  bool c_inside = a < c && c < b;
  bool d_inside = a < d && d < b;
  return c_inside != d_inside;
}

struct Generator {
  Polynomial poly;
  std::string provenance;
};

struct GeneratorSet {
  std::vector<Generator> monomials;
  std::vector<Generator> tetrads;
  std::vector<Generator> hexads;
  TermOrder order;

  std::vector<Polynomial> all() const {
    std::vector<Polynomial> out;
    for (const auto& v : {&monomials, &tetrads, &hexads})
      for (const auto& gen : *v) out.push_back(gen.poly);
    return out;
  }

  std::size_t size() const { return monomials.size() + tetrads.size() + hexads.size(); }
};

inline nlohmann::ordered_json generator_set_json(const GeneratorSet& gs) {
  nlohmann::ordered_json j;
  auto cmp = gs.order.cmp_fn();
  for (const auto& [key, list] :
       std::initializer_list<std::pair<const char*, const std::vector<Generator>*>>{
           {"monomials", &gs.monomials}, {"tetrads", &gs.tetrads}, {"hexads", &gs.hexads}}) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& gen : *list) arr.push_back(gen.poly.str(cmp));
    j[key] = std::move(arr);
  }
  return j;
}

// Structural zeros of the covariance: one variable per pair with no joint
// parent, in canonical order.
inline std::vector<Polynomial> degree_one_monomials(const FactorGraph& g) {
  std::vector<Polynomial> out;
  for (auto [i, j] : g.all_pairs())
    if (g.joint_parents(i, j).empty()) out.push_back(Polynomial(g.sigma(i, j)));
  return out;
}

namespace detail {

inline std::vector<std::string> sorted_labels(std::vector<std::string> v) {
  std::sort(v.begin(), v.end(), shortlex_less);
  return v;
}

// Subsequence of the global circle spanned by the given vertex set.
inline std::vector<std::string> induced_embedding(const std::vector<std::string>& embedding,
                                                  const std::set<std::string>& members) {
  std::vector<std::string> out;
  for (const auto& v : embedding)
    if (members.count(v)) out.push_back(v);
  return out;
}

// Both quadrilateral relations of every 4-subset of the clique, written as
// (noncrossing product) - (crossing product) in the clique's circular order.
// `skip` drops any relation mentioning one of those variables.
inline std::vector<Polynomial> clique_tetrads(const std::vector<std::string>& clique_circle,
                                              const std::set<Variable>& skip = {}) {
  std::vector<Polynomial> out;
  std::size_t n = clique_circle.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          const std::string &w1 = clique_circle[a], &w2 = clique_circle[b],
                            &w3 = clique_circle[c], &w4 = clique_circle[d];
          Variable s12 = Variable::sigma(w1, w2), s34 = Variable::sigma(w3, w4);
          Variable s13 = Variable::sigma(w1, w3), s24 = Variable::sigma(w2, w4);
          Variable s14 = Variable::sigma(w1, w4), s23 = Variable::sigma(w2, w3);
          Polynomial cross = Polynomial(Monomial(s13) * Monomial(s24));
          auto wanted = [&](std::initializer_list<Variable> vars) {
            for (const auto& v : vars)
              if (skip.count(v)) return false;
            return true;
          };
          if (wanted({s12, s34, s13, s24}))
            out.push_back(Polynomial(Monomial(s12) * Monomial(s34)) - cross);
          if (wanted({s14, s23, s13, s24}))
            out.push_back(Polynomial(Monomial(s14) * Monomial(s23)) - cross);
        }
  return out;
}

}  // namespace detail

// Generating set for a single factor whose children are `clique`, with the
// remaining vertices `rest` contributing only structural zeros. The order
// embeds the clique (sorted) followed by the rest (sorted).
inline GeneratorSet one_factor_groebner(const std::vector<std::string>& clique,
                                        const std::vector<std::string>& rest) {
  std::vector<std::string> embedding = detail::sorted_labels(clique);
  std::vector<std::string> tail = detail::sorted_labels(rest);
  embedding.insert(embedding.end(), tail.begin(), tail.end());

  GeneratorSet gs;
  gs.order = TermOrder(embedding);

  std::set<std::string> in_clique(clique.begin(), clique.end());
  std::vector<std::string> all = embedding;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (!in_clique.count(all[i]) || !in_clique.count(all[j]))
        gs.monomials.push_back({Polynomial(Variable::sigma(all[i], all[j])),
                                "one-factor-monomial"});

  for (auto& t : detail::clique_tetrads(detail::sorted_labels(clique)))
    gs.tetrads.push_back({std::move(t), "one-factor-tetrad"});
  return gs;
}

// Degree-one part plus every 2x2 off-diagonal minor whose row and column
// blocks see at most one common factor.
inline std::vector<Polynomial> m_leq1(const FactorGraph& g) {
  std::vector<Polynomial> out = degree_one_monomials(g);
  auto pairs = g.all_pairs();
  for (std::size_t x = 0; x < pairs.size(); ++x) {
    for (std::size_t y = x + 1; y < pairs.size(); ++y) {
      auto [a1, a2] = pairs[x];
      auto [b1, b2] = pairs[y];
      if (a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2) continue;  // diagonal entry
      std::set<int> pa_a, common;
      for (int h : g.parents_of(a1)) pa_a.insert(h);
      for (int h : g.parents_of(a2)) pa_a.insert(h);
      for (int v : {b1, b2})
        for (int h : g.parents_of(v))
          if (pa_a.count(h)) common.insert(h);
      if (common.size() > 1) continue;
      Polynomial minor = Polynomial(Monomial(g.sigma(a1, b1)) * Monomial(g.sigma(a2, b2))) -
                         Polynomial(Monomial(g.sigma(a2, b1)) * Monomial(g.sigma(a1, b2)));
      out.push_back(std::move(minor));
    }
  }
  return out;
}

// All size x size minors of a generic p x p symmetric matrix avoiding the
// diagonal: unordered pairs of disjoint index subsets {A, B}, expanded with
// s_i_j = s_j_i.
inline std::vector<Polynomial> off_diagonal_minors(int p, int size) {
  if (size != 2 && size != 3) throw BadSize("minor size must be 2 or 3");
  if (p < 2 * size) return {};
  std::vector<std::string> labels;
  for (int i = 1; i <= p; ++i) labels.push_back(std::to_string(i));

  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == size) {
      subsets.push_back(cur);
      return;
    }
    for (int i = start; i < p; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);

  std::vector<Polynomial> out;
  for (std::size_t x = 0; x < subsets.size(); ++x) {
    for (std::size_t y = x + 1; y < subsets.size(); ++y) {
      const auto& A = subsets[x];
      const auto& B = subsets[y];
      bool disjoint = true;
      for (int a : A)
        for (int b : B)
          if (a == b) disjoint = false;
      if (!disjoint) continue;
      // det over permutations of columns
      std::vector<int> perm(size);
      for (int i = 0; i < size; ++i) perm[i] = i;
      std::vector<std::pair<Monomial, Rational>> terms;
      do {
        int inversions = 0;
        for (int i = 0; i < size; ++i)
          for (int j = i + 1; j < size; ++j)
            if (perm[i] > perm[j]) ++inversions;
        Monomial m;
        for (int i = 0; i < size; ++i)
          m = m * Monomial(Variable::sigma(labels[A[i]], labels[B[perm[i]]]));
        terms.emplace_back(std::move(m), Rational(inversions % 2 == 0 ? 1 : -1));
      } while (std::next_permutation(perm.begin(), perm.end()));
      out.push_back(Polynomial::from_terms(std::move(terms)));
    }
  }
  return out;
}

struct TwoFactorSplit {
  std::vector<std::string> a1, b1;  // children of the first latent, complement
  std::vector<std::string> a2, b2;
  std::vector<std::string> overlap;
};

inline TwoFactorSplit two_factor_split(const FactorGraph& g) {
  if (g.m() != 2) throw NotTwoFactor("graph has " + std::to_string(g.m()) +
                                     " latent factors, need exactly 2");
  TwoFactorSplit s;
  std::set<int> c1(g.children_of(0).begin(), g.children_of(0).end());
  std::set<int> c2(g.children_of(1).begin(), g.children_of(1).end());
  for (int v = 0; v < g.p(); ++v) {
    const std::string& label = g.observed()[v];
    if (c1.count(v))
      s.a1.push_back(label);
    else
      s.b1.push_back(label);
    if (c2.count(v))
      s.a2.push_back(label);
    else
      s.b2.push_back(label);
    if (c1.count(v) && c2.count(v)) s.overlap.push_back(label);
  }
  return s;
}

// Circular embedding used by all two-factor constructions: first clique arc,
// then the overlap (so an overlap pair sits on adjacent positions, making its
// chord a side of both clique circles), then the second clique arc, then any
// remaining vertices.
inline std::vector<std::string> two_factor_embedding(const FactorGraph& g) {
  TwoFactorSplit s = two_factor_split(g);
  std::set<std::string> ov(s.overlap.begin(), s.overlap.end());
  std::vector<std::string> e;
  for (const auto& v : detail::sorted_labels(s.a1))
    if (!ov.count(v)) e.push_back(v);
  for (const auto& v : detail::sorted_labels(s.overlap)) e.push_back(v);
  for (const auto& v : detail::sorted_labels(s.a2))
    if (!ov.count(v)) e.push_back(v);
  std::set<std::string> placed(e.begin(), e.end());
  for (const auto& v : detail::sorted_labels(g.observed()))
    if (!placed.count(v)) e.push_back(v);
  return e;
}

namespace detail {

// 2-subsets of `pool` in canonical order, as shortlex-normalized pairs.
inline std::vector<std::pair<std::string, std::string>> pairs_of(
    const std::vector<std::string>& pool) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const std::string &x = pool[i], &y = pool[j];
      out.emplace_back(shortlex_less(x, y) ? std::make_pair(x, y) : std::make_pair(y, x));
    }
  return out;
}

}  // namespace detail

// Generating set of the vanishing ideal of a two-factor graph with overlap
// at most 2: structural-zero variables, per-clique quadrilateral relations
// (for overlap 2, those not involving the overlap variable), and for overlap
// exactly 2 the degree-3 relations coupling the two cliques through the
// overlap chord.
inline GeneratorSet two_factor_groebner(const FactorGraph& g) {
  TwoFactorSplit s = two_factor_split(g);
  if (s.overlap.size() > 2)
    throw OverlapTooLarge("clique overlap has size " + std::to_string(s.overlap.size()) +
                          ", supported only up to 2");

  GeneratorSet gs;
  std::vector<std::string> embedding = two_factor_embedding(g);
  gs.order = TermOrder(embedding);

  for (auto& mono : degree_one_monomials(g))
    gs.monomials.push_back({std::move(mono), "thm-two-factor-type-1"});

  std::set<std::string> a1(s.a1.begin(), s.a1.end());
  std::set<std::string> a2(s.a2.begin(), s.a2.end());
  std::vector<std::string> circle1 = detail::induced_embedding(embedding, a1);
  std::vector<std::string> circle2 = detail::induced_embedding(embedding, a2);

  std::set<Variable> skip;
  if (s.overlap.size() == 2) skip.insert(Variable::sigma(s.overlap[0], s.overlap[1]));

  for (const auto* circle : {&circle1, &circle2})
    for (auto& t : detail::clique_tetrads(*circle, skip))
      gs.tetrads.push_back({std::move(t), "thm-two-factor-type-2"});

  if (s.overlap.size() == 2) {
    const std::string& j1 = s.overlap[0];
    const std::string& j2 = s.overlap[1];
    auto jchord = std::make_pair(j1, j2);
    std::vector<std::string> inner1, inner2;
    for (const auto& v : s.a1)
      if (v != j1 && v != j2) inner1.push_back(v);
    for (const auto& v : s.a2)
      if (v != j1 && v != j2) inner2.push_back(v);
    for (const auto& ip : detail::pairs_of(inner1)) {
      if (crossing(circle1, ip, jchord)) continue;
      for (const auto& kp : detail::pairs_of(inner2)) {
        if (crossing(circle2, kp, jchord)) continue;
        const auto& [i1, i2] = ip;
        const auto& [k1, k2] = kp;
        Monomial t1 = Monomial(Variable::sigma(k1, k2)) * Monomial(Variable::sigma(i1, i2)) *
                      Monomial(Variable::sigma(j1, j2));
        Monomial t2 = Monomial(Variable::sigma(k1, k2)) * Monomial(Variable::sigma(j1, i2)) *
                      Monomial(Variable::sigma(j2, i1));
        Monomial t3 = Monomial(Variable::sigma(i1, i2)) * Monomial(Variable::sigma(j1, k2)) *
                      Monomial(Variable::sigma(j2, k1));
        gs.hexads.push_back({Polynomial::from_terms({{t1, Rational(1)},
                                                     {t2, Rational(-1)},
                                                     {t3, Rational(-1)}}),
                             "thm-two-factor-type-3"});
      }
    }
  }
  return gs;
}

namespace detail {

// Chain layout of the latents: an ordering where consecutive children sets
// may share up to two vertices and non-consecutive ones are disjoint.
struct ChainLayout {
  std::vector<int> order;                          // latent indices
  std::vector<std::vector<std::string>> overlaps;  // overlaps[t] between t and t+1
};

inline std::optional<ChainLayout> chain_layout(const FactorGraph& g) {
  int m = g.m();
  std::vector<std::set<int>> ch(m);
  for (int h = 0; h < m; ++h)
    ch[h] = std::set<int>(g.children_of(h).begin(), g.children_of(h).end());
  auto overlap_size = [&](int a, int b) {
    int n = 0;
    for (int v : ch[a])
      if (ch[b].count(v)) ++n;
    return n;
  };
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  do {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = i + 1; j < m && ok; ++j) {
        int ov = overlap_size(perm[i], perm[j]);
        if (j == i + 1 ? ov > 2 : ov > 0) ok = false;
      }
    if (ok) {
      ChainLayout layout;
      layout.order = perm;
      for (int t = 0; t + 1 < m; ++t) {
        std::vector<std::string> ov;
        for (int v : ch[perm[t]])
          if (ch[perm[t + 1]].count(v)) ov.push_back(g.observed()[v]);
        layout.overlaps.push_back(sorted_labels(ov));
      }
      return layout;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace detail

// Embedding for a chain of cliques: each clique arc in sorted order with each
// consecutive overlap placed between its two cliques, remaining vertices last.
inline std::vector<std::string> chain_embedding(const FactorGraph& g,
                                                const detail::ChainLayout& layout) {
  std::vector<std::string> e;
  std::set<std::string> placed;
  auto emit = [&](const std::vector<std::string>& vs) {
    for (const auto& v : vs)
      if (placed.insert(v).second) e.push_back(v);
  };
  int m = static_cast<int>(layout.order.size());
  for (int t = 0; t < m; ++t) {
    std::vector<std::string> arc;
    std::set<std::string> next_overlap;
    if (t < m - 1)
      next_overlap.insert(layout.overlaps[t].begin(), layout.overlaps[t].end());
    for (int v : g.children_of(layout.order[t])) {
      const std::string& label = g.observed()[v];
      if (!next_overlap.count(label)) arc.push_back(label);
    }
    emit(detail::sorted_labels(arc));
    if (t < m - 1) emit(layout.overlaps[t]);
  }
  emit(detail::sorted_labels(g.observed()));
  return e;
}

// Generating set for a chain of factors (consecutive overlaps of size at most
// 2, non-consecutive children disjoint): structural zeros, per-clique
// quadrilateral relations avoiding every overlap variable of that clique, and
// per-junction degree-3 relations whose outer pairs belong to exactly one
// factor.
inline GeneratorSet chain_groebner(const FactorGraph& g) {
  auto layout = detail::chain_layout(g);
  if (!layout) throw NotChain("latents do not form a chain with overlaps of size at most 2");

  GeneratorSet gs;
  std::vector<std::string> embedding = chain_embedding(g, *layout);
  gs.order = TermOrder(embedding);

  for (auto& mono : degree_one_monomials(g))
    gs.monomials.push_back({std::move(mono), "chain-monomial"});

  int m = static_cast<int>(layout->order.size());
  std::vector<std::vector<std::string>> circles(m);
  for (int t = 0; t < m; ++t) {
    std::set<std::string> members;
    for (int v : g.children_of(layout->order[t])) members.insert(g.observed()[v]);
    circles[t] = detail::induced_embedding(embedding, members);
  }

  for (int t = 0; t < m; ++t) {
    std::set<Variable> skip;
    if (t > 0 && layout->overlaps[t - 1].size() == 2)
      skip.insert(Variable::sigma(layout->overlaps[t - 1][0], layout->overlaps[t - 1][1]));
    if (t < m - 1 && layout->overlaps[t].size() == 2)
      skip.insert(Variable::sigma(layout->overlaps[t][0], layout->overlaps[t][1]));
    for (auto& tet : detail::clique_tetrads(circles[t], skip))
      gs.tetrads.push_back({std::move(tet), "chain-tetrad"});
  }

  auto exclusive_pairs = [&](int t, const std::set<std::string>& exclude) {
    // pairs inside clique t whose joint parent set is exactly that factor
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> pool;
    for (int v : g.children_of(layout->order[t])) {
      const std::string& label = g.observed()[v];
      if (!exclude.count(label)) pool.push_back(label);
    }
    pool = detail::sorted_labels(pool);
    for (const auto& pr : detail::pairs_of(pool)) {
      auto parents = jpa(g, pr.first, pr.second);
      if (parents.size() == 1 && parents[0] == g.latent()[layout->order[t]])
        out.push_back(pr);
    }
    return out;
  };

  for (int t = 0; t + 1 < m; ++t) {
    if (layout->overlaps[t].size() != 2) continue;
    const std::string& j1 = layout->overlaps[t][0];
    const std::string& j2 = layout->overlaps[t][1];
    auto jchord = std::make_pair(j1, j2);
    std::set<std::string> exclude{j1, j2};
    for (const auto& ip : exclusive_pairs(t, exclude)) {
      if (crossing(circles[t], ip, jchord)) continue;
      for (const auto& kp : exclusive_pairs(t + 1, exclude)) {
        if (crossing(circles[t + 1], kp, jchord)) continue;
        const auto& [i1, i2] = ip;
        const auto& [k1, k2] = kp;
        Monomial t1 = Monomial(Variable::sigma(k1, k2)) * Monomial(Variable::sigma(i1, i2)) *
                      Monomial(Variable::sigma(j1, j2));
        Monomial t2 = Monomial(Variable::sigma(i1, i2)) * Monomial(Variable::sigma(j1, k1)) *
                      Monomial(Variable::sigma(j2, k2));
        Monomial t3 = Monomial(Variable::sigma(k1, k2)) * Monomial(Variable::sigma(i1, j1)) *
                      Monomial(Variable::sigma(i2, j2));
        gs.hexads.push_back({Polynomial::from_terms({{t1, Rational(1)},
                                                     {t2, Rational(-1)},
                                                     {t3, Rational(-1)}}),
                             "chain-hexad"});
      }
    }
  }
  return gs;
}

// Combinatorial shadow of the two-factor generating set: vertices are the
// pair labels, 2-edges the per-clique planar chord pairs, 3-edges the
// junction triples through the overlap chord, and the isolated field the
// pairs covered by neither clique.
struct GluedHypergraph {
  std::vector<std::string> observed;
  std::pair<std::string, std::string> overlap_chord;
  std::set<PairLabel> vertices;
  std::set<std::array<PairLabel, 2>> edges2;
  std::set<std::array<PairLabel, 3>> edges3;
  std::set<PairLabel> isolated;
};

inline GluedHypergraph glued_hypergraph(const FactorGraph& g) {
  TwoFactorSplit s = two_factor_split(g);
  if (s.overlap.size() != 2)
    throw OverlapNotTwo("construction requires clique overlap exactly 2, got " +
                        std::to_string(s.overlap.size()));

  GluedHypergraph H;
  H.observed = g.observed();
  H.overlap_chord = make_pair_label(s.overlap[0], s.overlap[1]);

  std::vector<std::string> embedding = two_factor_embedding(g);
  std::set<std::string> a1(s.a1.begin(), s.a1.end());
  std::set<std::string> a2(s.a2.begin(), s.a2.end());
  std::vector<std::string> circle1 = detail::induced_embedding(embedding, a1);
  std::vector<std::string> circle2 = detail::induced_embedding(embedding, a2);

  // planar chord-pair edges per clique, and the chords they touch
  std::set<PairLabel> non_isolated;
  for (const auto* circle : {&circle1, &circle2}) {
    auto chords = detail::pairs_of(detail::sorted_labels(*circle));
    for (std::size_t x = 0; x < chords.size(); ++x) {
      for (std::size_t y = x + 1; y < chords.size(); ++y) {
        if (crossing(*circle, chords[x], chords[y])) continue;
        non_isolated.insert(chords[x]);
        non_isolated.insert(chords[y]);
        if (chords[x] == H.overlap_chord || chords[y] == H.overlap_chord) continue;
        std::array<PairLabel, 2> e{std::min(chords[x], chords[y]),
                                   std::max(chords[x], chords[y])};
        H.edges2.insert(std::move(e));
      }
    }
  }

  for (auto [i, j] : g.all_pairs()) {
    PairLabel v = make_pair_label(g.observed()[i], g.observed()[j]);
    const std::string &x = g.observed()[i], &y = g.observed()[j];
    bool chord1 = a1.count(x) && a1.count(y);
    bool chord2 = a2.count(x) && a2.count(y);
    if ((chord1 || chord2) && !non_isolated.count(v)) continue;  // pruned chord
    H.vertices.insert(v);
    if (!chord1 && !chord2) H.isolated.insert(v);
  }

  // junction triples: clique-1 chord, overlap chord, clique-2 chord, each
  // outer chord planar with the overlap chord
  std::vector<std::string> inner1, inner2;
  for (const auto& v : s.a1)
    if (v != s.overlap[0] && v != s.overlap[1]) inner1.push_back(v);
  for (const auto& v : s.a2)
    if (v != s.overlap[0] && v != s.overlap[1]) inner2.push_back(v);
  auto jchord = std::make_pair(s.overlap[0], s.overlap[1]);
  for (const auto& ip : detail::pairs_of(detail::sorted_labels(inner1))) {
    if (crossing(circle1, ip, jchord)) continue;
    for (const auto& kp : detail::pairs_of(detail::sorted_labels(inner2))) {
      if (crossing(circle2, kp, jchord)) continue;
      std::array<PairLabel, 3> e{ip, H.overlap_chord, kp};
      std::sort(e.begin(), e.end());
      H.edges3.insert(std::move(e));
    }
  }
  return H;
}

namespace detail {

inline std::vector<Monomial> minimal_monomials(const std::vector<Monomial>& ms) {
  std::vector<Monomial> keep;
  for (const auto& m : ms) {
    bool dominated = false;
    for (const auto& other : ms) {
      if (other == m) continue;  // equal values never dominate each other
      if (other.divides(m)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) keep.push_back(m);
  }
  std::sort(keep.begin(), keep.end(),
            [](const Monomial& a, const Monomial& b) { return a.cmp(b) < 0; });
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return keep;
}

}  // namespace detail

// The leading monomials of the generating set and the edge monomials of the
// glued hypergraph generate the same monomial ideal; compared after pruning
// both sides to their inclusion-minimal elements.
inline bool initial_ideal_check(const GeneratorSet& gens, const GluedHypergraph& H,
                                const TermOrder& ord) {
  std::set<std::string> obs(H.observed.begin(), H.observed.end());
  for (const auto* list : {&gens.monomials, &gens.tetrads, &gens.hexads})
    for (const auto& gen : *list)
      for (const auto& v : gen.poly.variables())
        if (!v.is_sigma() || !obs.count(v.first()) || !obs.count(v.second()))
          throw GraphMismatch("generator variable " + v.str() +
                              " does not belong to the hypergraph's vertex universe");

  std::vector<Monomial> lhs;
  for (const auto* list : {&gens.monomials, &gens.tetrads, &gens.hexads})
    for (const auto& gen : *list) lhs.push_back(leading_monomial(gen.poly, ord));

  std::vector<Monomial> rhs;
  for (const auto& v : H.isolated) rhs.push_back(Monomial(Variable::sigma(v.first, v.second)));
  for (const auto& e : H.edges2)
    rhs.push_back(Monomial(Variable::sigma(e[0].first, e[0].second)) *
                  Monomial(Variable::sigma(e[1].first, e[1].second)));
  for (const auto& e : H.edges3)
    rhs.push_back(Monomial(Variable::sigma(e[0].first, e[0].second)) *
                  Monomial(Variable::sigma(e[1].first, e[1].second)) *
                  Monomial(Variable::sigma(e[2].first, e[2].second)));

  return detail::minimal_monomials(lhs) == detail::minimal_monomials(rhs);
}

// Recognizes a degree-3 relation as a 3x3 off-diagonal minor of the
// covariance with the two structurally zero corner entries set to zero.
inline bool hexad_as_minor(const Polynomial& f, const FactorGraph& g) {
  const auto& terms = f.terms();
  if (terms.size() != 3) return false;

  // coefficients must be {+1, -1, -1} up to a global sign
  int pos = 0, neg = 0, pos_idx = -1, neg_idx = -1;
  for (std::size_t t = 0; t < 3; ++t) {
    if (terms[t].second == Rational(1)) {
      ++pos;
      pos_idx = static_cast<int>(t);
    } else if (terms[t].second == Rational(-1)) {
      ++neg;
      neg_idx = static_cast<int>(t);
    } else {
      return false;
    }
  }
  int plus;
  Polynomial target;
  if (pos == 1 && neg == 2) {
    plus = pos_idx;
    target = f;
  } else if (pos == 2 && neg == 1) {
    plus = neg_idx;
    target = -f;
  } else {
    return false;
  }

  std::array<std::set<std::string>, 3> vars;  // variable sets per term, as strings
  std::array<std::vector<Variable>, 3> term_vars;
  for (std::size_t t = 0; t < 3; ++t) {
    const Monomial& m = terms[t].first;
    if (m.degree() != 3) return false;
    for (const auto& [v, e] : m.factors()) {
      if (!v.is_sigma() || e != 1) return false;
      vars[t].insert(v.str());
      term_vars[t].push_back(v);
    }
    if (term_vars[t].size() != 3) return false;
  }

  auto shared = [&](int a, int b) {
    std::vector<Variable> out;
    for (const auto& v : term_vars[a])
      if (vars[b].count(v.str())) out.push_back(v);
    return out;
  };

  int o1 = (plus + 1) % 3, o2 = (plus + 2) % 3;
  auto s1 = shared(plus, o1);
  auto s2 = shared(plus, o2);
  if (s1.size() != 1 || s2.size() != 1) return false;
  Variable u = s1[0], w = s2[0];
  if (u == w) return false;
  std::optional<Variable> jvar;
  for (const auto& v : term_vars[plus])
    if (v != u && v != w) jvar = v;
  if (!jvar) return false;

  for (const auto& v : {u, w, *jvar})
    for (const auto& lbl : {v.first(), v.second()})
      if (!g.has_observed(lbl)) return false;

  auto try_roles = [&](const Variable& ivar, const Variable& kvar) {
    std::array<std::string, 2> is{ivar.first(), ivar.second()};
    std::array<std::string, 2> js{jvar->first(), jvar->second()};
    std::array<std::string, 2> ks{kvar.first(), kvar.second()};
    for (int fi = 0; fi < 2; ++fi) {
      for (int fj = 0; fj < 2; ++fj) {
        for (int fk = 0; fk < 2; ++fk) {
          std::string i1 = is[fi], i2 = is[1 - fi];
          std::string j1 = js[fj], j2 = js[1 - fj];
          std::string k1 = ks[fk], k2 = ks[1 - fk];
          // corner entries must be structural zeros
          if (!jpa(g, i1, k2).empty() || !jpa(g, k1, i2).empty()) continue;
          // det with rows (i1, j1, k1), cols (i2, j2, k2), corners zeroed
          Monomial t1 = Monomial(Variable::sigma(i1, i2)) * Monomial(Variable::sigma(j1, j2)) *
                        Monomial(Variable::sigma(k1, k2));
          Monomial t2 = Monomial(Variable::sigma(i1, i2)) * Monomial(Variable::sigma(j1, k2)) *
                        Monomial(Variable::sigma(k1, j2));
          Monomial t3 = Monomial(Variable::sigma(i1, j2)) * Monomial(Variable::sigma(j1, i2)) *
                        Monomial(Variable::sigma(k1, k2));
          Polynomial det = Polynomial::from_terms(
              {{t1, Rational(1)}, {t2, Rational(-1)}, {t3, Rational(-1)}});
          if (det == target) return true;
        }
      }
    }
    return false;
  };

  // the two outer variables can play either role
  std::set<std::string> endpoint_check;
  for (const auto& v : {u, w, *jvar}) {
    endpoint_check.insert(v.first());
    endpoint_check.insert(v.second());
  }
  if (endpoint_check.size() != 6) return false;  // pairs must be disjoint

  return try_roles(u, w) || try_roles(w, u);
}

}  // namespace fct
