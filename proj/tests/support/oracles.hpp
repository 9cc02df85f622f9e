#pragma once

// Independent brute-force oracles. They only use Tree's raw accessors,
// never the analysis code they are checked against.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "rdv/tree.hpp"

namespace oracle {

using rdv::NodeId;
using rdv::Port;
using rdv::Tree;

inline std::vector<int> bfs(const Tree& t, NodeId s) {
  std::vector<int> d(t.size(), -1);
  std::queue<NodeId> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId w : t.neighbors(u)) {
      if (d[w] < 0) {
        d[w] = d[u] + 1;
        q.push(w);
      }
    }
  }
  return d;
}

// Nodes of minimum eccentricity, sorted.
inline std::vector<NodeId> eccentricity_center(const Tree& t) {
  std::vector<int> ecc(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    const auto d = bfs(t, u);
    ecc[u] = *std::max_element(d.begin(), d.end());
  }
  const int best = *std::min_element(ecc.begin(), ecc.end());
  std::vector<NodeId> out;
  for (NodeId u = 0; u < t.size(); ++u) {
    if (ecc[u] == best) out.push_back(u);
  }
  return out;
}

// The port-preserving automorphism with f(u) = image, if any. Such a map
// is pinned down by one image, so propagation along ports decides it.
inline std::optional<std::vector<NodeId>> port_automorphism(const Tree& t, NodeId u, NodeId image) {
  std::vector<NodeId> f(t.size(), -1);
  f[u] = image;
  std::vector<NodeId> stack{u};
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    if (t.degree(x) != t.degree(f[x])) return std::nullopt;
    for (Port p = 0; p < t.degree(x); ++p) {
      const NodeId y = t.neighbor(x, p);
      const NodeId fy = t.neighbor(f[x], p);
      if (t.back_port(x, p) != t.back_port(f[x], p)) return std::nullopt;
      if (f[y] < 0) {
        f[y] = fy;
        stack.push_back(y);
      } else if (f[y] != fy) {
        return std::nullopt;
      }
    }
  }
  std::vector<NodeId> sorted = f;
  std::sort(sorted.begin(), sorted.end());
  for (NodeId i = 0; i < t.size(); ++i) {
    if (sorted[i] != i) return std::nullopt;
  }
  return f;
}

inline bool has_nontrivial_port_automorphism(const Tree& t) {
  for (NodeId img = 1; img < t.size(); ++img) {
    if (port_automorphism(t, 0, img)) return true;
  }
  return false;
}

// Topological isomorphism of rooted trees by backtracking over child
// matchings.
inline bool rooted_isomorphic(const Tree& a, NodeId ra, NodeId pa, const Tree& b, NodeId rb, NodeId pb) {
  std::vector<NodeId> ca, cb;
  for (NodeId w : a.neighbors(ra)) {
    if (w != pa) ca.push_back(w);
  }
  for (NodeId w : b.neighbors(rb)) {
    if (w != pb) cb.push_back(w);
  }
  if (ca.size() != cb.size()) return false;
  std::vector<bool> used(cb.size(), false);
  std::function<bool(std::size_t)> match = [&](std::size_t i) {
    if (i == ca.size()) return true;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (used[j] || !rooted_isomorphic(a, ca[i], ra, b, cb[j], rb)) continue;
      used[j] = true;
      if (match(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return match(0);
}

inline bool free_isomorphic(const Tree& a, const Tree& b) {
  if (a.size() != b.size()) return false;
  for (NodeId r = 0; r < b.size(); ++r) {
    if (rooted_isomorphic(a, 0, -1, b, r, -1)) return true;
  }
  return false;
}

// States lying on a cycle of the functional graph `next`, by walking |S|
// steps from every state and then collecting the cycle reached.
inline std::vector<std::set<int>> functional_cycles(const std::vector<int>& next) {
  const int k = static_cast<int>(next.size());
  std::set<std::set<int>> cycles;
  for (int s = 0; s < k; ++s) {
    int x = s;
    for (int i = 0; i < k; ++i) x = next[x];
    std::set<int> cyc{x};
    for (int y = next[x]; y != x; y = next[y]) cyc.insert(y);
    cycles.insert(cyc);
  }
  return {cycles.begin(), cycles.end()};
}

// Random tree by attaching each node to an earlier one, then random node
// ids and ports. Independent from the library generator.
inline Tree random_tree(NodeId n, std::mt19937_64& rng) {
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId v = 1; v < n; ++v) {
    const NodeId u = std::uniform_int_distribution<NodeId>(0, v - 1)(rng);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<NodeId>> by_port(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w : adj[u]) by_port[perm[u]].push_back(perm[w]);
    std::shuffle(by_port[perm[u]].begin(), by_port[perm[u]].end(), rng);
  }
  return Tree::from_ports(by_port);
}

inline int leaves(const Tree& t) {
  int c = 0;
  for (NodeId u = 0; u < t.size(); ++u) c += t.degree(u) == 1;
  return c;
}

}  // namespace oracle
