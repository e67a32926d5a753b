#pragma once

#include <limits>
#include <queue>
#include <vector>

namespace fct {

// Dinic's algorithm on small integer-capacity networks. Integral capacities
// give an integral maximum flow, which is what the collection extraction
// relies on.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : adj_(n) {}

  struct EdgeRef {
    int from;
    int index;
  };

  EdgeRef add_edge(int u, int v, int cap) {
    EdgeRef ref{u, static_cast<int>(adj_[u].size())};
    adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap});
    adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, 0});
    return ref;
  }

  int run(int s, int t) {
    int total = 0;
    while (bfs(s, t)) {
      iter_.assign(adj_.size(), 0);
      while (int pushed = dfs(s, t, std::numeric_limits<int>::max())) total += pushed;
    }
    return total;
  }

  // Flow routed through a forward edge after run().
  int flow_on(const EdgeRef& ref) const {
    const Edge& e = adj_[ref.from][ref.index];
    return adj_[e.to][e.rev].cap;
  }

 private:
  struct Edge {
    int to, rev, cap;
  };

  bool bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Edge& e : adj_[u]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int u, int t, int limit) {
    if (u == t) return limit;
    for (int& i = iter_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      Edge& e = adj_[u][i];
      if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
      int pushed = dfs(e.to, t, std::min(limit, e.cap));
      if (pushed > 0) {
        e.cap -= pushed;
        adj_[e.to][e.rev].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace fct
