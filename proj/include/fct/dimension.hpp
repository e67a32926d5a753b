#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fct/graph.hpp"
#include "fct/matrix_rank.hpp"
#include "fct/maxflow.hpp"
#include "fct/util.hpp"

namespace fct {

// Family of pairwise disjoint pair sets, one per latent, with A_h drawn from
// the pairs covered by h and |A_h| <= |ch(h)|.
struct ValidCollection {
  std::map<std::string, std::vector<PairLabel>> assignment;

  int total() const {
    int t = 0;
    for (const auto& [h, pairs] : assignment) t += static_cast<int>(pairs.size());
    return t;
  }
};

namespace detail {

// Shared flow-network shape: source -> latent (capacity-limited) -> pair
// (capacity 1) -> sink. Pair eligibility and latent capacity vary by caller.
struct CollectionNetwork {
  std::vector<std::pair<int, int>> pairs;                  // observed index pairs
  std::map<std::pair<int, int>, int> pair_node;            // pair -> node id
  std::vector<std::vector<MaxFlow::EdgeRef>> latent_edges; // per latent: edges to pairs
  std::vector<std::vector<std::pair<int, int>>> latent_pairs;
};

inline ValidCollection extract_collection(const FactorGraph& g, MaxFlow& flow,
                                          const CollectionNetwork& net) {
  ValidCollection out;
  for (int h = 0; h < g.m(); ++h) {
    std::vector<PairLabel> mine;
    for (std::size_t k = 0; k < net.latent_edges[h].size(); ++k) {
      if (flow.flow_on(net.latent_edges[h][k]) > 0) {
        auto [a, b] = net.latent_pairs[h][k];
        mine.push_back(make_pair_label(g.observed()[a], g.observed()[b]));
      }
    }
    std::sort(mine.begin(), mine.end());
    out.assignment[g.latent()[h]] = std::move(mine);
  }
  return out;
}

}  // namespace detail

// Largest total size of a valid collection, found as an integral maximum
// flow: each latent may take at most |ch(h)| pairs from the pairs it covers,
// and every pair may be used once.
inline ValidCollection max_valid_collection(const FactorGraph& g) {
  int m = g.m();
  detail::CollectionNetwork net;
  net.latent_edges.resize(m);
  net.latent_pairs.resize(m);

  std::set<std::pair<int, int>> eligible;
  for (int h = 0; h < m; ++h) {
    const auto& ch = g.children_of(h);
    for (std::size_t a = 0; a < ch.size(); ++a)
      for (std::size_t b = a + 1; b < ch.size(); ++b) eligible.emplace(ch[a], ch[b]);
  }

  int source = 0;
  int next = 1 + m;
  for (const auto& pr : eligible) net.pair_node[pr] = next++;
  int sink = next;
  MaxFlow flow(sink + 1);

  for (int h = 0; h < m; ++h) {
    flow.add_edge(source, 1 + h, static_cast<int>(g.children_of(h).size()));
    const auto& ch = g.children_of(h);
    for (std::size_t a = 0; a < ch.size(); ++a) {
      for (std::size_t b = a + 1; b < ch.size(); ++b) {
        std::pair<int, int> pr{ch[a], ch[b]};
        net.latent_edges[h].push_back(flow.add_edge(1 + h, net.pair_node[pr], 1));
        net.latent_pairs[h].push_back(pr);
      }
    }
  }
  for (const auto& [pr, node] : net.pair_node) flow.add_edge(node, sink, 1);

  flow.run(source, sink);
  return detail::extract_collection(g, flow, net);
}

inline int upper_bound(const FactorGraph& g) {
  return g.p() + max_valid_collection(g).total();
}

// Ambient dimension minus the number of structurally zero covariance entries.
inline int zero_pattern_bound(const FactorGraph& g) {
  int zeros = 0;
  for (auto [i, j] : g.all_pairs())
    if (g.joint_parents(i, j).empty()) ++zeros;
  return g.p() * (g.p() + 1) / 2 - zeros;
}

namespace detail {

inline void check_labeling(const FactorGraph& g, const ZutaLabeling& lab) {
  int m = g.m();
  if (static_cast<int>(lab.latent_order.size()) != m ||
      static_cast<int>(lab.witnesses.size()) != m)
    throw InvalidLabeling("labeling must list every latent exactly once with one witness each");
  std::set<std::string> seen;
  for (const auto& h : lab.latent_order) {
    if (!g.has_latent(h)) throw InvalidLabeling("unknown latent in labeling: " + h);
    if (!seen.insert(h).second) throw InvalidLabeling("repeated latent in labeling: " + h);
  }
  for (int i = 0; i < m; ++i) {
    int hi = g.latent_index(lab.latent_order[i]);
    int wi = g.observed_index(lab.witnesses[i]);
    if (!g.has_edge(hi, wi))
      throw InvalidLabeling("witness " + lab.witnesses[i] + " is not a child of " +
                            lab.latent_order[i]);
    for (int j = i + 1; j < m; ++j) {
      int hj = g.latent_index(lab.latent_order[j]);
      if (g.has_edge(hj, wi))
        throw InvalidLabeling("witness " + lab.witnesses[i] + " is a child of later latent " +
                              lab.latent_order[j]);
    }
  }
}

}  // namespace detail

// Best valid collection of the restricted shape induced by a labeling: the
// i-th latent takes every pair {witness_i, other child}, plus at most one
// extra pair per latent chosen by maximum bipartite matching among the still
// unused covered pairs.
inline ValidCollection max_zuta_collection(const FactorGraph& g, const ZutaLabeling& lab) {
  detail::check_labeling(g, lab);
  int m = g.m();

  ValidCollection out;
  std::set<std::pair<int, int>> used;
  for (int i = 0; i < m; ++i) {
    int hi = g.latent_index(lab.latent_order[i]);
    int wi = g.observed_index(lab.witnesses[i]);
    std::vector<PairLabel> mine;
    for (int v : g.children_of(hi)) {
      if (v == wi) continue;
      used.emplace(std::min(wi, v), std::max(wi, v));
      mine.push_back(make_pair_label(g.observed()[wi], g.observed()[v]));
    }
    std::sort(mine.begin(), mine.end());
    out.assignment[lab.latent_order[i]] = std::move(mine);
  }

  // one optional extra per latent: a covered pair not claimed by any forced set
  detail::CollectionNetwork net;
  net.latent_edges.resize(m);
  net.latent_pairs.resize(m);
  std::set<std::pair<int, int>> candidates;
  for (int h = 0; h < m; ++h) {
    const auto& ch = g.children_of(h);
    for (std::size_t a = 0; a < ch.size(); ++a)
      for (std::size_t b = a + 1; b < ch.size(); ++b) {
        std::pair<int, int> pr{ch[a], ch[b]};
        if (!used.count(pr)) candidates.insert(pr);
      }
  }

  int source = 0;
  int next = 1 + m;
  for (const auto& pr : candidates) net.pair_node[pr] = next++;
  int sink = next;
  MaxFlow flow(sink + 1);
  for (int h = 0; h < m; ++h) {
    flow.add_edge(source, 1 + h, 1);
    const auto& ch = g.children_of(h);
    for (std::size_t a = 0; a < ch.size(); ++a) {
      for (std::size_t b = a + 1; b < ch.size(); ++b) {
        std::pair<int, int> pr{ch[a], ch[b]};
        if (used.count(pr)) continue;
        net.latent_edges[h].push_back(flow.add_edge(1 + h, net.pair_node[pr], 1));
        net.latent_pairs[h].push_back(pr);
      }
    }
  }
  for (const auto& [pr, node] : net.pair_node) flow.add_edge(node, sink, 1);
  flow.run(source, sink);

  ValidCollection extras = detail::extract_collection(g, flow, net);
  for (auto& [h, pairs] : extras.assignment) {
    auto& mine = out.assignment[h];
    mine.insert(mine.end(), pairs.begin(), pairs.end());
    std::sort(mine.begin(), mine.end());
  }
  return out;
}

struct LowerBoundResult {
  std::optional<int> value;              // p + best restricted collection size
  bool exhaustive = true;                // labeling enumeration completed
  std::optional<ZutaLabeling> witness;   // labeling achieving the bound
  ValidCollection collection;
};

inline LowerBoundResult lower_bound(const FactorGraph& g, std::size_t labeling_budget = 10000) {
  ZutaEnumeration en = enumerate_zuta_labelings(g, labeling_budget);
  LowerBoundResult out;
  out.exhaustive = en.exhaustive;
  for (const auto& lab : en.labelings) {
    ValidCollection c = max_zuta_collection(g, lab);
    int value = g.p() + c.total();
    if (!out.value || value > *out.value) {
      out.value = value;
      out.witness = lab;
      out.collection = std::move(c);
    }
  }
  return out;
}

// Derivative structure of the covariance map at a loading vector, restricted
// to the off-diagonal rows. Rows are the observed pairs in canonical order,
// columns the edges in canonical order; the entry at ((u,v), (z,h)) is the
// loading of the opposite endpoint when z is one of u, v and h is a joint
// parent, zero otherwise.
inline std::vector<std::vector<Rational>> jacobian_block(
    const FactorGraph& g, const std::map<std::pair<std::string, std::string>, Rational>& lambda_values) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& [k, v] : lambda_values) keys.insert(k);
  std::set<std::pair<std::string, std::string>> edges(g.edges().begin(), g.edges().end());
  if (keys != edges)
    throw KeyMismatch("loading assignment must cover exactly the edges of the graph");

  auto value = [&](int h, int v) { return lambda_values.at({g.latent()[h], g.observed()[v]}); };

  std::map<std::pair<int, int>, std::size_t> column;
  for (std::size_t c = 0; c < g.edges().size(); ++c) {
    const auto& [eh, ez] = g.edges()[c];
    column[{g.latent_index(eh), g.observed_index(ez)}] = c;
  }

  auto pairs = g.all_pairs();
  std::vector<std::vector<Rational>> b(pairs.size(),
                                       std::vector<Rational>(g.edges().size(), Rational(0)));
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [u, v] = pairs[r];
    for (int h : g.joint_parents(u, v)) {
      b[r][column.at({h, u})] = value(h, v);
      b[r][column.at({h, v})] = value(h, u);
    }
  }
  return b;
}

namespace detail {

inline int jacobian_rank_trial(const FactorGraph& g, std::uint64_t trial_seed) {
  SplitMix64 rng(trial_seed);
  std::map<std::pair<std::string, std::string>, Rational> lambda_values;
  for (const auto& e : g.edges())
    lambda_values[e] = Rational(static_cast<long>(rng.next_coefficient()));
  return exact_rank(jacobian_block(g, lambda_values));
}

}  // namespace detail

// Dimension of the model: p diagonal parameters plus the generic rank of the
// off-diagonal Jacobian block, estimated as the maximum exact rank over
// `trials` random integer loading vectors. Trial i draws from the stream
// seeded with mix(seed ^ i), so results are reproducible and monotone in the
// number of trials.
inline int model_dimension(const FactorGraph& g, int trials = 3, std::uint64_t seed = 0) {
  if (trials < 1) throw Error("at least one trial required");
  std::vector<int> ranks(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
    ranks[i] = detail::jacobian_rank_trial(g, stream_seed(seed, i));
  });
  return g.p() + *std::max_element(ranks.begin(), ranks.end());
}

struct DimensionReport {
  int expected = 0;
  int zero_pattern = 0;
  int upper = 0;
  std::optional<int> lower;
  bool lower_exhaustive = true;
  int exact = 0;
  bool exact_is_probabilistic = true;
  int trials = 0;
  std::uint64_t seed = 0;
  bool defective = false;
  ValidCollection witness_upper;
  std::optional<ZutaLabeling> lower_labeling;
  ValidCollection witness_lower;
};

inline DimensionReport dimension_report(const FactorGraph& g, int trials = 3,
                                        std::uint64_t seed = 0,
                                        std::size_t labeling_budget = 10000) {
  DimensionReport rep;
  rep.expected = expected_dimension(g);
  rep.zero_pattern = zero_pattern_bound(g);
  rep.witness_upper = max_valid_collection(g);
  rep.upper = g.p() + rep.witness_upper.total();
  LowerBoundResult lb = lower_bound(g, labeling_budget);
  rep.lower = lb.value;
  rep.lower_exhaustive = lb.exhaustive;
  rep.lower_labeling = lb.witness;
  rep.witness_lower = lb.collection;
  rep.exact = model_dimension(g, trials, seed);
  rep.exact_is_probabilistic = true;
  rep.trials = trials;
  rep.seed = seed;
  rep.defective = rep.exact < rep.expected;
  return rep;
}

inline nlohmann::ordered_json collection_json(const ValidCollection& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [h, pairs] : c.assignment) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [u, v] : pairs) arr.push_back({u, v});
    j[h] = std::move(arr);
  }
  return j;
}

inline nlohmann::ordered_json report_json(const DimensionReport& rep) {
  nlohmann::ordered_json j;
  j["expected"] = rep.expected;
  j["zero_pattern_bound"] = rep.zero_pattern;
  j["upper"] = rep.upper;
  if (rep.lower)
    j["lower"] = *rep.lower;
  else
    j["lower"] = nullptr;
  j["lower_exhaustive"] = rep.lower_exhaustive;
  j["exact"] = rep.exact;
  j["exact_is_probabilistic"] = rep.exact_is_probabilistic;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  j["defective"] = rep.defective;
  j["witness_upper"] = collection_json(rep.witness_upper);
  if (rep.lower_labeling) {
    nlohmann::ordered_json lw;
    lw["latent_order"] = rep.lower_labeling->latent_order;
    lw["witnesses"] = rep.lower_labeling->witnesses;
    lw["collection"] = collection_json(rep.witness_lower);
    j["witness_lower"] = std::move(lw);
  } else {
    j["witness_lower"] = nullptr;
  }
  return j;
}

}  // namespace fct
