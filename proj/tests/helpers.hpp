#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fct/graph.hpp"
#include "fct/util.hpp"

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

inline fct::FactorGraph load_fixture(const std::string& name) {
  return fct::parse_graph(read_file(fixture_path(name))).graph;
}

// Random graph with 2..max_p observed nodes and 1..max_m latent factors; every
// factor keeps at least one child. With a private child per factor an
// ordering with witnesses always exists.
inline fct::FactorGraph random_graph(fct::SplitMix64& rng, int max_p, int max_m,
                                     bool private_child_each = false) {
  int p = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_p - 1));
  int m = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_m));
  std::vector<std::string> observed, latent;
  for (int v = 1; v <= p; ++v) observed.push_back(std::to_string(v));
  for (int h = 1; h <= m; ++h) latent.push_back("h" + std::to_string(h));

  std::vector<std::pair<std::string, std::string>> edges;
  for (int h = 0; h < m; ++h) {
    std::vector<int> children;
    for (int v = 0; v < p; ++v)
      if (rng.next() % 2 == 0) children.push_back(v);
    if (children.empty()) children.push_back(static_cast<int>(rng.next() % p));
    for (int v : children) edges.emplace_back(latent[h], observed[v]);
  }

  if (private_child_each) {
    // append one dedicated child per factor
    for (int h = 0; h < m; ++h) {
      std::string fresh = std::to_string(p + 1 + h);
      observed.push_back(fresh);
      edges.emplace_back(latent[h], fresh);
    }
  }
  return fct::FactorGraph(observed, latent, edges);
}
