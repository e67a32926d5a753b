#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fct/dimension.hpp"
#include "fct/graph.hpp"
#include "helpers.hpp"

namespace {

using fct::FactorGraph;
using fct::PairLabel;
using fct::Rational;
using fct::ValidCollection;

// Largest valid collection by branch and bound: every covered pair is left
// out or granted to one eligible factor with spare capacity.
struct BruteCollection {
  const FactorGraph& g;
  std::vector<PairLabel> pairs;              // pairs with at least one eligible factor
  std::vector<std::vector<int>> eligible;    // factor indices per pair
  std::vector<int> capacity;
  int best = 0;

  explicit BruteCollection(const FactorGraph& g_) : g(g_) {
    for (auto [i, j] : g.all_pairs()) {
      std::vector<int> hs;
      for (int h = 0; h < g.m(); ++h)
        if (g.has_edge(h, i) && g.has_edge(h, j)) hs.push_back(h);
      if (!hs.empty()) {
        pairs.push_back(fct::make_pair_label(g.observed()[i], g.observed()[j]));
        eligible.push_back(std::move(hs));
      }
    }
    for (int h = 0; h < g.m(); ++h)
      capacity.push_back(static_cast<int>(g.children_of(h).size()));
    dfs(0, 0);
  }

  void dfs(std::size_t idx, int current) {
    if (current + static_cast<int>(pairs.size() - idx) <= best) return;
    if (idx == pairs.size()) {
      best = std::max(best, current);
      return;
    }
    for (int h : eligible[idx]) {
      if (capacity[h] == 0) continue;
      --capacity[h];
      dfs(idx + 1, current + 1);
      ++capacity[h];
    }
    dfs(idx + 1, current);
  }
};

// Structural validity of a collection: pairs disjoint, endpoints children of
// the assigned factor, per-factor count within the child count.
void check_valid(const FactorGraph& g, const ValidCollection& c) {
  std::set<PairLabel> seen;
  for (const auto& [h, pairs] : c.assignment) {
    int hi = g.latent_index(h);
    CHECK(pairs.size() <= g.children_of(hi).size());
    for (const auto& pr : pairs) {
      CHECK(seen.insert(pr).second);
      CHECK(g.has_edge(hi, g.observed_index(pr.first)));
      CHECK(g.has_edge(hi, g.observed_index(pr.second)));
    }
  }
}

Rational sigma_value(const FactorGraph& g, int u, int v,
                     const std::map<std::pair<std::string, std::string>, Rational>& lambda) {
  Rational acc(0);
  for (int h : g.joint_parents(u, v))
    acc += lambda.at({g.latent()[h], g.observed()[u]}) * lambda.at({g.latent()[h], g.observed()[v]});
  return acc;
}

}  // namespace

TEST_CASE("largest collection matches branch and bound") {
  fct::SplitMix64 rng(606);
  for (int iter = 0; iter < 60; ++iter) {
    FactorGraph g = random_graph(rng, 5, 3);
    ValidCollection c = fct::max_valid_collection(g);
    check_valid(g, c);
    CHECK(c.total() == BruteCollection(g).best);
    CHECK(fct::upper_bound(g) == g.p() + c.total());
  }
}

TEST_CASE("bounds on the worked examples") {
  FactorGraph tri6 = load_fixture("tri_p6.json");
  ValidCollection c = fct::max_valid_collection(tri6);
  CHECK(c.total() == 9);
  CHECK(fct::upper_bound(tri6) == 15);
  CHECK(fct::zero_pattern_bound(tri6) == 16);

  CHECK(fct::zero_pattern_bound(load_fixture("tri_p5.json")) == 12);
  CHECK(fct::upper_bound(load_fixture("pure1_p4.json")) == 9);
}

TEST_CASE("restricted collections for a fixed ordering") {
  FactorGraph g = load_fixture("bounds_gap_p9.json");
  fct::ZutaLabeling displayed{{"h1", "h2", "h3", "h4", "h5"}, {"1", "2", "3", "4", "5"}};
  ValidCollection c = fct::max_zuta_collection(g, displayed);
  check_valid(g, c);
  CHECK(c.total() == 23);

  fct::ZutaLabeling moved{{"h1", "h2", "h3", "h4", "h5"}, {"1", "2", "3", "4", "7"}};
  ValidCollection better = fct::max_zuta_collection(g, moved);
  check_valid(g, better);
  CHECK(better.total() == 24);

  SECTION("bad labelings are rejected") {
    using fct::InvalidLabeling;
    CHECK_THROWS_AS(fct::max_zuta_collection(g, {{"h1"}, {"1"}}), InvalidLabeling);
    CHECK_THROWS_AS(
        fct::max_zuta_collection(g, {{"h1", "h2", "h3", "h4", "hX"}, {"1", "2", "3", "4", "5"}}),
        InvalidLabeling);
    CHECK_THROWS_AS(
        fct::max_zuta_collection(g, {{"h1", "h2", "h3", "h4", "h4"}, {"1", "2", "3", "4", "5"}}),
        InvalidLabeling);
    // witness 9 is no child of h1
    CHECK_THROWS_AS(
        fct::max_zuta_collection(g, {{"h1", "h2", "h3", "h4", "h5"}, {"9", "2", "3", "4", "5"}}),
        InvalidLabeling);
    // witness 5 of h1 is a child of the later factor h2
    CHECK_THROWS_AS(
        fct::max_zuta_collection(g, {{"h1", "h2", "h3", "h4", "h5"}, {"5", "2", "3", "4", "6"}}),
        InvalidLabeling);
  }
}

TEST_CASE("lower bound scans every ordering") {
  FactorGraph g = load_fixture("bounds_gap_p9.json");
  fct::LowerBoundResult lb = fct::lower_bound(g);
  CHECK(lb.exhaustive);
  REQUIRE(lb.value.has_value());
  CHECK(*lb.value == 33);
  REQUIRE(lb.witness.has_value());
  CHECK(g.p() + lb.collection.total() == 33);

  // graphs without an admissible ordering have no lower bound
  FactorGraph twins({"1", "2"}, {"h1", "h2"},
                    {{"h1", "1"}, {"h1", "2"}, {"h2", "1"}, {"h2", "2"}});
  fct::LowerBoundResult none = fct::lower_bound(twins);
  CHECK_FALSE(none.value.has_value());
  CHECK(none.exhaustive);
}

TEST_CASE("bound sandwich on random graphs") {
  fct::SplitMix64 rng(4242);
  for (int iter = 0; iter < 25; ++iter) {
    FactorGraph g = random_graph(rng, 7, 3);
    int upper = fct::upper_bound(g);
    int exact = fct::model_dimension(g, 2, iter);
    CHECK(exact <= upper);
    CHECK(upper <= fct::zero_pattern_bound(g));
    CHECK(upper <= fct::expected_dimension(g));
    fct::LowerBoundResult lb = fct::lower_bound(g);
    if (lb.value) CHECK(*lb.value <= exact);
  }
}

TEST_CASE("derivative block") {
  SECTION("two children of one factor") {
    FactorGraph g({"1", "2"}, {"h"}, {{"h", "1"}, {"h", "2"}});
    std::map<std::pair<std::string, std::string>, Rational> lambda{
        {{"h", "1"}, Rational(2)}, {{"h", "2"}, Rational(3)}};
    auto b = fct::jacobian_block(g, lambda);
    REQUIRE(b.size() == 1);
    REQUIRE(b[0].size() == 2);
    CHECK(b[0][0] == Rational(3));
    CHECK(b[0][1] == Rational(2));
  }

  SECTION("zero loadings give the zero matrix") {
    FactorGraph g = load_fixture("metro.json");
    std::map<std::pair<std::string, std::string>, Rational> lambda;
    for (const auto& e : g.edges()) lambda[e] = Rational(0);
    for (const auto& row : fct::jacobian_block(g, lambda))
      for (const auto& e : row) CHECK(e.is_zero());
  }

  SECTION("keys must cover exactly the edges") {
    FactorGraph g = load_fixture("metro.json");
    std::map<std::pair<std::string, std::string>, Rational> lambda;
    for (const auto& e : g.edges()) lambda[e] = Rational(1);
    auto missing = lambda;
    missing.erase(missing.begin());
    CHECK_THROWS_AS(fct::jacobian_block(g, missing), fct::KeyMismatch);
    auto extra = lambda;
    extra[{"h1", "2"}] = Rational(1);  // h1 -> 2 is not an edge of this graph
    CHECK_THROWS_AS(fct::jacobian_block(g, extra), fct::KeyMismatch);
  }

  SECTION("entries are the per-variable increments of the covariance map") {
    // each off-diagonal entry is multilinear, so a unit step in one loading
    // changes it by exactly the matching derivative entry
    fct::SplitMix64 rng(11);
    for (int iter = 0; iter < 10; ++iter) {
      FactorGraph g = random_graph(rng, 5, 3);
      std::map<std::pair<std::string, std::string>, Rational> lambda;
      for (const auto& e : g.edges())
        lambda[e] = Rational(static_cast<long>(rng.next() % 9) - 4);
      auto b = fct::jacobian_block(g, lambda);
      auto pairs = g.all_pairs();
      for (std::size_t c = 0; c < g.edges().size(); ++c) {
        auto stepped = lambda;
        stepped[g.edges()[c]] += Rational(1);
        for (std::size_t r = 0; r < pairs.size(); ++r) {
          auto [u, v] = pairs[r];
          Rational diff = sigma_value(g, u, v, stepped) - sigma_value(g, u, v, lambda);
          CHECK(diff == b[r][c]);
        }
      }
    }
  }

  SECTION("published spot check with seven unit loadings") {
    FactorGraph g = load_fixture("tri_p6_swapped.json");
    std::map<std::pair<std::string, std::string>, Rational> lambda;
    for (const auto& e : g.edges()) lambda[e] = Rational(0);
    for (const auto& e : std::vector<std::pair<std::string, std::string>>{
             {"h1", "1"}, {"h2", "2"}, {"h3", "3"}, {"h2", "4"}, {"h2", "6"}, {"h3", "5"}, {"h3", "6"}})
      lambda[e] = Rational(1);

    auto b = fct::jacobian_block(g, lambda);
    REQUIRE(b.size() == 15);
    REQUIRE(b[0].size() == 10);
    int nonzero = 0;
    for (const auto& row : b)
      for (const auto& e : row)
        if (!e.is_zero()) ++nonzero;
    CHECK(nonzero == 17);
    CHECK(fct::exact_rank(b) == 9);
  }
}

TEST_CASE("model dimension") {
  FactorGraph metro = load_fixture("metro.json");
  CHECK(fct::model_dimension(metro, 3, 0) == 12);
  CHECK(fct::model_dimension(metro, 3, 0) == fct::model_dimension(metro, 3, 0));
  CHECK(fct::model_dimension(metro, 1, 5) <= fct::model_dimension(metro, 3, 5));
  CHECK_THROWS_AS(fct::model_dimension(metro, 0, 0), fct::Error);

  // two disjoint child pairs per factor pin the dimension without slack
  CHECK(fct::model_dimension(load_fixture("tri_p6_swapped.json"), 3, 0) == 15);
  CHECK(fct::model_dimension(load_fixture("tri_p6.json"), 3, 0) == 15);
  CHECK(fct::model_dimension(load_fixture("tri_p6_wide.json"), 3, 0) == 17);
  CHECK(fct::model_dimension(load_fixture("full2f_p5.json"), 3, 0) == 14);

  // a factor whose children all have one parent makes the bounds collapse
  FactorGraph pure = load_fixture("pure1_p4.json");
  fct::LowerBoundResult lb = fct::lower_bound(pure);
  REQUIRE(lb.value.has_value());
  CHECK(*lb.value == 9);
  CHECK(fct::upper_bound(pure) == 9);
  CHECK(fct::model_dimension(pure, 3, 0) == 9);
}

TEST_CASE("dimension report") {
  FactorGraph metro = load_fixture("metro.json");
  fct::DimensionReport rep = fct::dimension_report(metro, 3, 0);
  CHECK(rep.expected == 12);
  CHECK(rep.exact == 12);
  CHECK(rep.upper == 12);
  REQUIRE(rep.lower.has_value());
  CHECK(*rep.lower == 12);
  CHECK(rep.lower_exhaustive);
  CHECK_FALSE(rep.defective);
  CHECK(rep.exact_is_probabilistic);
  CHECK(rep.trials == 3);
  CHECK(rep.seed == 0);

  nlohmann::ordered_json j = fct::report_json(rep);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"expected", "zero_pattern_bound", "upper", "lower",
                                         "lower_exhaustive", "exact", "exact_is_probabilistic",
                                         "trials", "seed", "defective", "witness_upper",
                                         "witness_lower"});
  CHECK(j["lower"] == 12);
  CHECK(j["witness_lower"].contains("latent_order"));
  CHECK(j["witness_lower"].contains("witnesses"));
  CHECK(j["witness_lower"].contains("collection"));
  CHECK(nlohmann::ordered_json::parse(j.dump()).dump() == j.dump());

  // a graph without an admissible ordering reports null bounds
  FactorGraph twins({"1", "2"}, {"h1", "h2"},
                    {{"h1", "1"}, {"h1", "2"}, {"h2", "1"}, {"h2", "2"}});
  fct::DimensionReport rep2 = fct::dimension_report(twins, 2, 0);
  CHECK_FALSE(rep2.lower.has_value());
  nlohmann::ordered_json j2 = fct::report_json(rep2);
  CHECK(j2["lower"].is_null());
  CHECK(j2["witness_lower"].is_null());
}
