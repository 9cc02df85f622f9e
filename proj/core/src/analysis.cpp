#include "rdv/analysis.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <tuple>

namespace rdv {

CenterInfo center(const Tree& t) {
  const NodeId n = t.size();
  if (n == 1) return {CenterInfo::Kind::CentralNode, 0, -1};
  std::vector<int> deg(n);
  std::vector<NodeId> layer;
  for (NodeId u = 0; u < n; ++u) {
    deg[u] = t.degree(u);
    if (deg[u] == 1) layer.push_back(u);
  }
  std::vector<char> removed(n, 0);
  NodeId remaining = n;
  while (remaining > 2) {
    std::vector<NodeId> next;
    for (NodeId leaf : layer) {
      removed[leaf] = 1;
      --remaining;
    }
    for (NodeId leaf : layer) {
      for (NodeId w : t.neighbors(leaf)) {
        if (!removed[w] && --deg[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::vector<NodeId> left;
  for (NodeId u = 0; u < n; ++u) {
    if (!removed[u]) left.push_back(u);
  }
  if (left.size() == 1) return {CenterInfo::Kind::CentralNode, left[0], -1};
  return {CenterInfo::Kind::CentralEdge, left[0], left[1]};
}

WalkPosition basic_walk_step(const Tree& t, WalkPosition pos) {
  const int d = t.degree(pos.node);
  const Port out = pos.entry == kNoPort ? 0 : (pos.entry + 1) % d;
  return depart(t, pos.node, out);
}

WalkPosition counter_basic_walk_step(const Tree& t, WalkPosition pos) {
  const int d = t.degree(pos.node);
  const Port out = pos.entry == kNoPort ? 0 : (pos.entry - 1 + d) % d;
  return depart(t, pos.node, out);
}

ContractionView contract(const Tree& t) {
  ContractionView view;
  view.original_size = t.size();
  view.inverse.assign(t.size(), -1);
  for (NodeId u = 0; u < t.size(); ++u) {
    if (t.degree(u) != 2) {
      view.inverse[u] = static_cast<NodeId>(view.node_map.size());
      view.node_map.push_back(u);
    }
  }
  const NodeId nu = static_cast<NodeId>(view.node_map.size());
  std::vector<std::vector<NodeId>> by_port(nu);
  view.edge_path.resize(nu);
  for (NodeId a = 0; a < nu; ++a) {
    const NodeId x = view.node_map[a];
    by_port[a].resize(t.degree(x));
    view.edge_path[a].resize(t.degree(x));
    for (Port p = 0; p < t.degree(x); ++p) {
      auto& hops = view.edge_path[a][p];
      hops.push_back({x, p});
      WalkPosition cur = depart(t, x, p);
      while (t.degree(cur.node) == 2) {
        const Port out = 1 - cur.entry;
        hops.push_back({cur.node, out});
        cur = depart(t, cur.node, out);
      }
      by_port[a][p] = view.inverse[cur.node];
    }
  }
  view.contracted = Tree::from_ports(by_port);
  return view;
}

Tree expand(const ContractionView& view) {
  std::vector<std::vector<NodeId>> by_port(view.original_size);
  const auto ensure = [&](NodeId u, Port p) {
    if (static_cast<Port>(by_port[u].size()) <= p) by_port[u].resize(p + 1, -1);
  };
  for (NodeId a = 0; a < view.nu(); ++a) {
    for (Port p = 0; p < view.contracted.degree(a); ++p) {
      const auto& hops = view.edge_path[a][p];
      const NodeId end = view.node_map[view.contracted.neighbor(a, p)];
      for (std::size_t k = 0; k < hops.size(); ++k) {
        const NodeId next = k + 1 < hops.size() ? hops[k + 1].node : end;
        ensure(hops[k].node, hops[k].out);
        by_port[hops[k].node][hops[k].out] = next;
      }
    }
  }
  return Tree::from_ports(by_port);
}

namespace {

constexpr NodeId kNone = -1;

// Level-wise AHU encoding. Signatures of one height are sorted and numbered
// so class ids do not depend on node numbering; the code lists the distinct
// signatures per height, which determines the tree from the root down.
std::string encode(const Tree& t, NodeId root, NodeId away, std::optional<NodeId> marked,
                   CodeMode mode) {
  const NodeId n = t.size();
  std::vector<NodeId> order;
  std::vector<NodeId> parent(n, kNone);
  std::vector<Port> up_port(n, kNoPort);
  order.reserve(n);
  order.push_back(root);
  parent[root] = away;
  if (away != kNone) up_port[root] = t.port_to(root, away);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId u = order[head];
    for (Port p = 0; p < t.degree(u); ++p) {
      const NodeId w = t.neighbor(u, p);
      if (w == parent[u]) continue;
      parent[w] = u;
      up_port[w] = t.back_port(u, p);
      order.push_back(w);
    }
  }

  std::vector<int> height(n, 0);
  int max_height = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId u = *it;
    if (u != root) height[parent[u]] = std::max(height[parent[u]], height[u] + 1);
    max_height = std::max(max_height, height[u]);
  }
  std::vector<std::vector<NodeId>> levels(max_height + 1);
  for (NodeId u : order) levels[height[u]].push_back(u);

  const bool ports = mode == CodeMode::PortPreserving;
  std::vector<std::int64_t> cls(n, -1);
  std::int64_t next_class = 0;
  std::string code;
  std::vector<std::pair<std::vector<std::int64_t>, NodeId>> sigs;
  for (int h = 0; h <= max_height; ++h) {
    sigs.clear();
    for (NodeId u : levels[h]) {
      std::vector<std::int64_t> sig;
      sig.push_back(marked && *marked == u ? 1 : 0);
      if (ports) sig.push_back(up_port[u]);
      const std::size_t head = sig.size();
      for (Port p = 0; p < t.degree(u); ++p) {
        const NodeId w = t.neighbor(u, p);
        if (w == parent[u]) continue;
        if (ports) sig.push_back(p);
        sig.push_back(cls[w]);
      }
      if (!ports) std::sort(sig.begin() + static_cast<std::ptrdiff_t>(head), sig.end());
      sigs.emplace_back(std::move(sig), u);
    }
    std::sort(sigs.begin(), sigs.end());
    code += '[';
    const std::vector<std::int64_t>* prev = nullptr;
    for (const auto& [sig, u] : sigs) {
      if (!prev || *prev != sig) {
        if (prev) code += ';';
        for (std::size_t k = 0; k < sig.size(); ++k) {
          if (k) code += ',';
          code += std::to_string(sig[k]);
        }
        ++next_class;
        prev = &sig;
      }
      cls[u] = next_class - 1;
    }
    code += ']';
  }
  return code;
}

}  // namespace

std::string canonical_code(const Tree& t, NodeId root, std::optional<NodeId> marked,
                           CodeMode mode) {
  return encode(t, root, kNone, marked, mode);
}

std::string half_code(const Tree& t, NodeId root, NodeId away, std::optional<NodeId> marked,
                      CodeMode mode) {
  return encode(t, root, away, marked, mode);
}

std::string free_tree_code(const Tree& t) {
  const CenterInfo c = center(t);
  if (!c.is_edge()) return "N" + canonical_code(t, c.x, std::nullopt, CodeMode::Topological);
  std::string a = half_code(t, c.x, c.y, std::nullopt, CodeMode::Topological);
  std::string b = half_code(t, c.y, c.x, std::nullopt, CodeMode::Topological);
  if (b < a) std::swap(a, b);
  return "E" + a + "/" + b;
}

bool is_symmetric(const Tree& t) {
  if (t.size() < 2) return false;
  const CenterInfo c = center(t);
  if (!c.is_edge()) return false;
  return half_code(t, c.x, c.y, std::nullopt, CodeMode::PortPreserving) ==
         half_code(t, c.y, c.x, std::nullopt, CodeMode::PortPreserving);
}

bool perfectly_symmetrizable(const Tree& t, NodeId u, NodeId v) {
  if (u == v) throw InvalidInput("perfectly_symmetrizable needs two distinct nodes");
  const CenterInfo c = center(t);
  if (!c.is_edge()) return false;
  std::vector<char> x_side(t.size(), 0);
  std::vector<NodeId> stack{c.x};
  x_side[c.x] = 1;
  while (!stack.empty()) {
    const NodeId w = stack.back();
    stack.pop_back();
    for (NodeId z : t.neighbors(w)) {
      if (z != c.y && !x_side[z]) {
        x_side[z] = 1;
        stack.push_back(z);
      }
    }
  }
  if (x_side[u] == x_side[v]) return false;
  const NodeId a = x_side[u] ? u : v;
  const NodeId b = x_side[u] ? v : u;
  return half_code(t, c.x, c.y, a, CodeMode::Topological) ==
         half_code(t, c.y, c.x, b, CodeMode::Topological);
}

std::optional<std::vector<NodeId>> label_preserving_automorphism(const Tree& t, NodeId u,
                                                                  NodeId v) {
  const NodeId n = t.size();
  std::vector<NodeId> f(n, kNone);
  std::vector<char> used(n, 0);
  f[u] = v;
  used[v] = 1;
  std::vector<NodeId> queue{u};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId w = queue[head];
    const NodeId fw = f[w];
    if (t.degree(w) != t.degree(fw)) return std::nullopt;
    for (Port p = 0; p < t.degree(w); ++p) {
      const NodeId a = t.neighbor(w, p);
      const NodeId b = t.neighbor(fw, p);
      if (t.back_port(w, p) != t.back_port(fw, p)) return std::nullopt;
      if (f[a] == kNone) {
        if (used[b]) return std::nullopt;
        f[a] = b;
        used[b] = 1;
        queue.push_back(a);
      } else if (f[a] != b) {
        return std::nullopt;
      }
    }
  }
  return f;
}

std::uint64_t labeling_count(const Tree& t) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (NodeId u = 0; u < t.size(); ++u) {
    for (int k = 2; k <= t.degree(u); ++k) {
      if (total > kMax / static_cast<std::uint64_t>(k)) return kMax;
      total *= static_cast<std::uint64_t>(k);
    }
  }
  return total;
}

namespace detail {

bool next_labeling(std::vector<std::vector<Port>>& perms) {
  for (auto& p : perms) {
    if (std::next_permutation(p.begin(), p.end())) return true;
  }
  return false;
}

}  // namespace detail

SymmetrizabilityWitness perfectly_symmetrizable_bruteforce(const Tree& t, NodeId u, NodeId v,
                                                           std::uint64_t budget) {
  if (u == v) throw InvalidInput("perfectly_symmetrizable needs two distinct nodes");
  SymmetrizabilityWitness w;
  for_each_labeling(t, budget, [&](const Tree& labeled) {
    ++w.labelings_examined;
    if (auto f = label_preserving_automorphism(labeled, u, v)) {
      w.symmetrizable = true;
      w.labeling = labeled;
      w.automorphism = std::move(*f);
      return false;
    }
    return true;
  });
  return w;
}

std::vector<int> bfs_distances(const Tree& t, NodeId source) {
  std::vector<int> dist(t.size(), -1);
  std::vector<NodeId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId w : t.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

TreeDistance::TreeDistance(const Tree& t) : depth_(t.size(), 0) {
  const NodeId n = t.size();
  int levels = 1;
  while ((NodeId{1} << levels) < n) ++levels;
  up_.assign(levels, std::vector<NodeId>(n, 0));
  std::vector<NodeId> queue{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId w : t.neighbors(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        depth_[w] = depth_[u] + 1;
        up_[0][w] = u;
        queue.push_back(w);
      }
    }
  }
  for (int k = 1; k < levels; ++k) {
    for (NodeId u = 0; u < n; ++u) up_[k][u] = up_[k - 1][up_[k - 1][u]];
  }
}

int TreeDistance::operator()(NodeId a, NodeId b) const {
  int da = depth_[a];
  int db = depth_[b];
  const int total = da + db;
  if (da < db) {
    std::swap(a, b);
    std::swap(da, db);
  }
  int diff = da - db;
  for (int k = 0; diff; ++k, diff >>= 1) {
    if (diff & 1) a = up_[k][a];
  }
  if (a == b) return total - 2 * depth_[a];
  for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k) {
    if (up_[k][a] != up_[k][b]) {
      a = up_[k][a];
      b = up_[k][b];
    }
  }
  return total - 2 * depth_[up_[0][a]];
}

}  // namespace rdv

namespace rdv {

std::optional<Tree> symmetrizing_labeling(const Tree& t, NodeId u, NodeId v) {
  if (!perfectly_symmetrizable(t, u, v)) return std::nullopt;
  const CenterInfo c = center(t);
  const NodeId n = t.size();
  // Rooted halves: parent pointers and a BFS order per side.
  std::vector<NodeId> parent(n, kNone);
  std::vector<int> side(n, -1);
  std::vector<NodeId> order;
  for (const auto& [root, away, s] : {std::tuple{c.x, c.y, 0}, std::tuple{c.y, c.x, 1}}) {
    side[root] = s;
    parent[root] = away;
    const std::size_t first = order.size();
    order.push_back(root);
    for (std::size_t h = first; h < order.size(); ++h) {
      const NodeId w = order[h];
      for (NodeId z : t.neighbors(w)) {
        if (z != parent[w] && side[z] < 0) {
          side[z] = s;
          parent[z] = w;
          order.push_back(z);
        }
      }
    }
  }
  // Marked topological subtree codes, children first.
  std::vector<std::string> code(n);
  std::vector<std::vector<NodeId>> kids(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId w = *it;
    for (NodeId z : t.neighbors(w)) {
      if (z != parent[w]) kids[w].push_back(z);
    }
    std::sort(kids[w].begin(), kids[w].end(), [&](NodeId a, NodeId b) { return code[a] < code[b]; });
    std::string s = (w == u || w == v) ? "*(" : "(";
    for (NodeId z : kids[w]) s += code[z];
    s += ')';
    code[w] = std::move(s);
  }
  if (code[c.x] != code[c.y]) return std::nullopt;
  // Involution pairing the halves child by child in code order.
  std::vector<NodeId> phi(n, kNone);
  std::vector<NodeId> stack{c.x};
  phi[c.x] = c.y;
  phi[c.y] = c.x;
  while (!stack.empty()) {
    const NodeId w = stack.back();
    stack.pop_back();
    const auto& a = kids[w];
    const auto& b = kids[phi[w]];
    for (std::size_t k = 0; k < a.size(); ++k) {
      phi[a[k]] = b[k];
      phi[b[k]] = a[k];
      stack.push_back(a[k]);
    }
  }
  const NodeId keep = side[u] == 0 ? 0 : 1;
  std::vector<std::vector<NodeId>> by_port = t.by_port();
  for (NodeId w = 0; w < n; ++w) {
    if (side[w] != keep) continue;
    auto& mirror = by_port[phi[w]];
    for (Port p = 0; p < t.degree(w); ++p) mirror[p] = phi[t.neighbor(w, p)];
  }
  return Tree::from_ports(by_port);
}

}  // namespace rdv
