#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fct/errors.hpp"
#include "fct/util.hpp"
#include "fct/variable.hpp"

namespace fct {

// Unordered pair of observed labels in canonical (shortlex) order.
using PairLabel = std::pair<std::string, std::string>;

inline PairLabel make_pair_label(const std::string& u, const std::string& v) {
  return shortlex_less(u, v) ? PairLabel{u, v} : PairLabel{v, u};
}

// Bipartite measurement structure: latent factors pointing at observed
// variables. List order in the input defines the canonical node order used
// everywhere (pair enumeration, Jacobian rows/columns, report output).
class FactorGraph {
 public:
  FactorGraph(std::vector<std::string> observed, std::vector<std::string> latent,
              std::vector<std::pair<std::string, std::string>> edges)
      : observed_(std::move(observed)), latent_(std::move(latent)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < observed_.size(); ++i) obs_index_[observed_[i]] = i;
    for (std::size_t i = 0; i < latent_.size(); ++i) lat_index_[latent_[i]] = i;
    children_.resize(latent_.size());
    parents_.resize(observed_.size());
    child_set_.resize(latent_.size());
    for (const auto& [h, v] : edges_) {
      int hi = lat_index_.at(h);
      int vi = obs_index_.at(v);
      children_[hi].push_back(vi);
      parents_[vi].push_back(hi);
      child_set_[hi].insert(vi);
    }
    for (auto& c : children_) std::sort(c.begin(), c.end());
    for (auto& p : parents_) std::sort(p.begin(), p.end());
  }

  int p() const { return static_cast<int>(observed_.size()); }
  int m() const { return static_cast<int>(latent_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& observed() const { return observed_; }
  const std::vector<std::string>& latent() const { return latent_; }
  const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }

  int observed_index(const std::string& label) const {
    auto it = obs_index_.find(label);
    if (it == obs_index_.end()) throw UnknownNode("unknown observed node: " + label);
    return static_cast<int>(it->second);
  }

  int latent_index(const std::string& label) const {
    auto it = lat_index_.find(label);
    if (it == lat_index_.end()) throw UnknownNode("unknown latent node: " + label);
    return static_cast<int>(it->second);
  }

  bool has_observed(const std::string& label) const { return obs_index_.count(label) > 0; }
  bool has_latent(const std::string& label) const { return lat_index_.count(label) > 0; }

  const std::vector<int>& children_of(int h) const { return children_[h]; }
  const std::vector<int>& parents_of(int v) const { return parents_[v]; }
  bool has_edge(int h, int v) const { return child_set_[h].count(v) > 0; }

  // Latent indices pointing at both u and v.
  std::vector<int> joint_parents(int u, int v) const {
    std::vector<int> out;
    for (int h : parents_[u])
      if (has_edge(h, v)) out.push_back(h);
    return out;
  }

  // All unordered pairs of observed nodes in canonical (row) order.
  std::vector<std::pair<int, int>> all_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < p(); ++i)
      for (int j = i + 1; j < p(); ++j) out.emplace_back(i, j);
    return out;
  }

  Variable sigma(int i, int j) const {
    return Variable::sigma(observed_[i], observed_[j]);
  }

  Variable lambda_var(int h, int v) const {
    return Variable::lambda(observed_[v], latent_[h]);
  }

 private:
  std::vector<std::string> observed_, latent_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::size_t> obs_index_, lat_index_;
  std::vector<std::vector<int>> children_, parents_;
  std::vector<std::set<int>> child_set_;
};

struct ParseResult {
  FactorGraph graph;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!label_char(c)) return false;
  return true;
}

}  // namespace detail

// Reads the JSON description {"observed": [...], "latent": [...],
// "edges": [[latent, observed], ...]}. Isolated latents are dropped with a
// warning; structural problems throw.
inline ParseResult parse_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("top level must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "observed" && key != "latent" && key != "edges")
      throw SchemaError("unknown key: " + key);
  for (const char* key : {"observed", "latent", "edges"}) {
    if (!j.contains(key)) throw SchemaError(std::string("missing key: ") + key);
    if (!j[key].is_array()) throw SchemaError(std::string(key) + " must be an array");
  }

  auto read_labels = [&](const char* key) {
    std::vector<std::string> out;
    for (const auto& item : j[key]) {
      if (!item.is_string()) throw SchemaError(std::string(key) + " entries must be strings");
      std::string label = item.get<std::string>();
      if (!detail::valid_label(label))
        throw SchemaError("label must match [A-Za-z0-9]+: \"" + label + "\"");
      out.push_back(std::move(label));
    }
    return out;
  };

  std::vector<std::string> observed = read_labels("observed");
  std::vector<std::string> latent = read_labels("latent");

  std::set<std::string> seen;
  for (const auto& l : observed)
    if (!seen.insert(l).second) throw DuplicateLabel("duplicate label: " + l);
  for (const auto& l : latent)
    if (!seen.insert(l).second) throw DuplicateLabel("duplicate label: " + l);

  std::set<std::string> obs_set(observed.begin(), observed.end());
  std::set<std::string> lat_set(latent.begin(), latent.end());

  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::pair<std::string, std::string>> edge_set;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw SchemaError("edges entries must be [latent, observed] string pairs");
    std::string h = e[0].get<std::string>();
    std::string v = e[1].get<std::string>();
    if (!lat_set.count(h)) throw DanglingEdge("edge from unknown latent: " + h);
    if (!obs_set.count(v)) throw DanglingEdge("edge to unknown observed: " + v);
    if (!edge_set.emplace(h, v).second)
      throw SchemaError("duplicate edge: [" + h + ", " + v + "]");
    edges.emplace_back(std::move(h), std::move(v));
  }

  std::vector<std::string> warnings;
  std::set<std::string> touched;
  for (const auto& [h, v] : edges) touched.insert(h);
  std::vector<std::string> kept;
  for (const auto& h : latent) {
    if (touched.count(h)) {
      kept.push_back(h);
    } else {
      warnings.push_back("dropping isolated latent: " + h);
    }
  }

  return ParseResult{FactorGraph(std::move(observed), std::move(kept), std::move(edges)),
                     std::move(warnings)};
}

// Joint parent set of a pair of distinct observed nodes, in canonical latent
// order.
inline std::vector<std::string> jpa(const FactorGraph& g, const std::string& u,
                                    const std::string& v) {
  if (u == v) throw DiagonalVariable("joint parents of a node with itself: " + u);
  int ui = g.observed_index(u);
  int vi = g.observed_index(v);
  std::vector<std::string> out;
  for (int h : g.joint_parents(ui, vi)) out.push_back(g.latent()[h]);
  return out;
}

// All pairs both of whose endpoints are children of h, in canonical order,
// each pair normalized to shortlex.
inline std::vector<std::pair<std::string, std::string>> pair_classes(const FactorGraph& g,
                                                                     const std::string& h) {
  int hi = g.latent_index(h);
  const auto& ch = g.children_of(hi);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t a = 0; a < ch.size(); ++a) {
    for (std::size_t b = a + 1; b < ch.size(); ++b) {
      std::string x = g.observed()[ch[a]];
      std::string y = g.observed()[ch[b]];
      if (!shortlex_less(x, y)) std::swap(x, y);
      out.emplace_back(std::move(x), std::move(y));
    }
  }
  return out;
}

// Ordering of the latents with one marked child ("witness") per latent such
// that the witness of the i-th latent is not a child of any later latent.
struct ZutaLabeling {
  std::vector<std::string> latent_order;
  std::vector<std::string> witnesses;
};

struct ZutaEnumeration {
  std::vector<ZutaLabeling> labelings;
  bool exhaustive = true;
};

namespace detail {

inline void zuta_dfs(const FactorGraph& g, std::vector<int>& order, std::vector<int>& witnesses,
                     std::vector<bool>& used, std::size_t limit, ZutaEnumeration& out) {
  if (!out.exhaustive) return;
  int m = g.m();
  if (static_cast<int>(order.size()) == m) {
    if (out.labelings.size() == limit) {
      out.exhaustive = false;
      return;
    }
    ZutaLabeling lab;
    for (std::size_t i = 0; i < order.size(); ++i) {
      lab.latent_order.push_back(g.latent()[order[i]]);
      lab.witnesses.push_back(g.observed()[witnesses[i]]);
    }
    out.labelings.push_back(std::move(lab));
    return;
  }
  // children of the still-unplaced latents other than the candidate
  for (int h = 0; h < m; ++h) {
    if (used[h]) continue;
    std::set<int> rest;
    for (int h2 = 0; h2 < m; ++h2)
      if (!used[h2] && h2 != h)
        for (int v : g.children_of(h2)) rest.insert(v);
    for (int v : g.children_of(h)) {
      if (rest.count(v)) continue;
      used[h] = true;
      order.push_back(h);
      witnesses.push_back(v);
      zuta_dfs(g, order, witnesses, used, limit, out);
      witnesses.pop_back();
      order.pop_back();
      used[h] = false;
      if (!out.exhaustive) return;
    }
  }
}

}  // namespace detail

// Up to `limit` labelings in a fixed DFS (canonical) order; `exhaustive` is
// true when no labeling was cut off by the limit.
inline ZutaEnumeration enumerate_zuta_labelings(const FactorGraph& g, std::size_t limit) {
  ZutaEnumeration out;
  std::vector<int> order, witnesses;
  std::vector<bool> used(g.m(), false);
  detail::zuta_dfs(g, order, witnesses, used, limit, out);
  return out;
}

inline std::optional<ZutaLabeling> zuta_labeling(const FactorGraph& g) {
  ZutaEnumeration one = enumerate_zuta_labelings(g, 1);
  if (one.labelings.empty()) return std::nullopt;
  return one.labelings.front();
}

// Parameter count of the parametrization: p diagonal entries plus one loading
// per edge, capped by the ambient dimension p(p+1)/2.
inline int expected_dimension(const FactorGraph& g) {
  int p = g.p();
  int ambient = p * (p + 1) / 2;
  return std::min(p + g.edge_count(), ambient);
}

}  // namespace fct
