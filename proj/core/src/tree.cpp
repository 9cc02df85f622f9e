#include "rdv/tree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rdv/error.hpp"

namespace rdv {

bool ValidationReport::has(Violation::Kind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

std::string ValidationReport::to_string() const {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += '\n';
    s += v.message;
  }
  return s;
}

namespace {

void add(ValidationReport& r, Violation::Kind kind, NodeId node, NodeId other, Port port,
         std::string msg) {
  r.violations.push_back(Violation{kind, node, other, port, std::move(msg)});
}

}  // namespace

ValidationReport validate(const RawTree& raw) {
  using K = Violation::Kind;
  ValidationReport r;
  const NodeId n = raw.node_count;
  if (n <= 0) {
    add(r, K::EmptyTree, -1, -1, kNoPort, "tree has no nodes");
    return r;
  }
  if (static_cast<NodeId>(raw.entries.size()) != n) {
    add(r, K::NodeOutOfRange, -1, -1, kNoPort,
        "adjacency lists " + std::to_string(raw.entries.size()) + " nodes, header says " +
            std::to_string(n));
    return r;
  }

  long long degree_sum = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto& es = raw.entries[u];
    const int d = static_cast<int>(es.size());
    degree_sum += d;
    std::vector<int> port_seen(d, 0);
    std::vector<NodeId> seen_nbrs;
    for (const auto& e : es) {
      const std::string at = "node " + std::to_string(u) + ": ";
      if (e.port < 0 || e.port >= d) {
        add(r, K::PortOutOfRange, u, e.neighbor, e.port,
            at + "port " + std::to_string(e.port) + " out of range [0," + std::to_string(d - 1) +
                "]");
      } else if (port_seen[e.port]++ == 1) {
        add(r, K::DuplicatePort, u, e.neighbor, e.port,
            at + "duplicate port " + std::to_string(e.port));
      }
      if (e.neighbor < 0 || e.neighbor >= n) {
        add(r, K::NodeOutOfRange, u, e.neighbor, e.port,
            at + "neighbor " + std::to_string(e.neighbor) + " does not exist");
        continue;
      }
      if (e.neighbor == u) {
        add(r, K::SelfLoop, u, u, e.port, at + "self-loop on port " + std::to_string(e.port));
        continue;
      }
      if (std::find(seen_nbrs.begin(), seen_nbrs.end(), e.neighbor) != seen_nbrs.end()) {
        add(r, K::ParallelEdge, u, e.neighbor, e.port,
            at + "second edge to node " + std::to_string(e.neighbor));
        continue;
      }
      seen_nbrs.push_back(e.neighbor);
      const auto& back = raw.entries[e.neighbor];
      const bool mirrored = std::any_of(back.begin(), back.end(),
                                        [u](const RawTree::Entry& b) { return b.neighbor == u; });
      if (!mirrored) {
        add(r, K::Asymmetric, u, e.neighbor, e.port,
            "edge {" + std::to_string(u) + "," + std::to_string(e.neighbor) +
                "}: listed at node " + std::to_string(u) + " but not at node " +
                std::to_string(e.neighbor));
      }
    }
  }
  if (!r.ok()) return r;

  const long long edges = degree_sum / 2;
  if (edges != n - 1) {
    add(r, K::WrongEdgeCount, -1, -1, kNoPort,
        std::to_string(edges) + " edges for " + std::to_string(n) + " nodes (" +
            (edges > n - 1 ? "contains a cycle" : "disconnected") + ")");
  }
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  NodeId reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& e : raw.entries[u]) {
      if (!seen[e.neighbor]) {
        seen[e.neighbor] = 1;
        ++reached;
        stack.push_back(e.neighbor);
      }
    }
  }
  if (reached != n) {
    const auto it = std::find(seen.begin(), seen.end(), 0);
    const NodeId first = static_cast<NodeId>(it - seen.begin());
    add(r, K::Disconnected, first, -1, kNoPort,
        "node " + std::to_string(first) + " unreachable from node 0 (" +
            std::to_string(n - reached) + " unreachable nodes)");
  }
  return r;
}

Tree Tree::from_raw(const RawTree& raw) {
  const ValidationReport report = validate(raw);
  if (!report.ok()) throw InvalidInput("invalid tree: " + report.to_string());
  std::vector<std::vector<NodeId>> by_port(raw.node_count);
  for (NodeId u = 0; u < raw.node_count; ++u) {
    by_port[u].resize(raw.entries[u].size());
    for (const auto& e : raw.entries[u]) by_port[u][e.port] = e.neighbor;
  }
  Tree t;
  t.offset_.assign(raw.node_count + 1, 0);
  for (NodeId u = 0; u < raw.node_count; ++u) {
    t.offset_[u + 1] = t.offset_[u] + static_cast<std::int32_t>(by_port[u].size());
  }
  t.nbr_.reserve(t.offset_.back());
  for (const auto& row : by_port) t.nbr_.insert(t.nbr_.end(), row.begin(), row.end());
  t.back_.resize(t.nbr_.size());
  for (NodeId u = 0; u < raw.node_count; ++u) {
    for (Port p = 0; p < t.degree(u); ++p) t.back_[t.offset_[u] + p] = t.port_to(t.neighbor(u, p), u);
  }
  return t;
}

Tree Tree::from_ports(const std::vector<std::vector<NodeId>>& by_port) {
  RawTree raw;
  raw.node_count = static_cast<NodeId>(by_port.size());
  raw.entries.resize(by_port.size());
  for (std::size_t u = 0; u < by_port.size(); ++u) {
    for (std::size_t p = 0; p < by_port[u].size(); ++p) {
      raw.entries[u].push_back({static_cast<Port>(p), by_port[u][p]});
    }
  }
  return from_raw(raw);
}

Port Tree::port_to(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  const auto it = std::find(nb.begin(), nb.end(), v);
  return it == nb.end() ? kNoPort : static_cast<Port>(it - nb.begin());
}

int Tree::leaf_count() const {
  int c = 0;
  for (NodeId u = 0; u < size(); ++u) c += degree(u) == 1;
  return c;
}

int Tree::max_degree() const {
  int m = 0;
  for (NodeId u = 0; u < size(); ++u) m = std::max(m, degree(u));
  return m;
}

std::vector<std::vector<NodeId>> Tree::by_port() const {
  std::vector<std::vector<NodeId>> out(size());
  for (NodeId u = 0; u < size(); ++u) out[u].assign(neighbors(u).begin(), neighbors(u).end());
  return out;
}

RawTree parse_tree(std::istream& in) {
  RawTree raw;
  bool have_header = false;
  std::vector<char> defined;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (word == "tree") {
      if (have_header) throw ParseError(where + "second 'tree' header");
      long long n = -1;
      if (!(ls >> n) || n < 1 || n > (1LL << 30)) throw ParseError(where + "expected 'tree <n>' with n >= 1");
      raw.node_count = static_cast<NodeId>(n);
      raw.entries.resize(n);
      defined.assign(n, 0);
      have_header = true;
    } else if (word == "node") {
      if (!have_header) throw ParseError(where + "'node' before 'tree' header");
      long long id = -1;
      if (!(ls >> id)) throw ParseError(where + "expected node id");
      if (id < 0 || id >= raw.node_count) {
        throw ParseError(where + "node id " + std::to_string(id) + " out of range");
      }
      if (defined[id]++) throw ParseError(where + "node " + std::to_string(id) + " defined twice");
      std::string tok;
      while (ls >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw ParseError(where + "expected <port>:<neighbor>, got '" + tok + "'");
        try {
          std::size_t used = 0;
          const long long p = std::stoll(tok.substr(0, colon), &used);
          if (used != colon) throw std::invalid_argument(tok);
          const std::string rhs = tok.substr(colon + 1);
          const long long v = std::stoll(rhs, &used);
          if (used != rhs.size()) throw std::invalid_argument(tok);
          raw.entries[id].push_back({static_cast<Port>(p), static_cast<NodeId>(v)});
        } catch (const std::logic_error&) {
          throw ParseError(where + "bad port entry '" + tok + "'");
        }
      }
    } else {
      throw ParseError(where + "unknown directive '" + word + "'");
    }
  }
  if (!have_header) throw ParseError("missing 'tree <n>' header");
  return raw;
}

Tree read_tree(std::istream& in) { return Tree::from_raw(parse_tree(in)); }

Tree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tree file '" + path + "'");
  return read_tree(in);
}

void write_tree(std::ostream& out, const Tree& t) {
  out << "tree " << t.size() << '\n';
  for (NodeId u = 0; u < t.size(); ++u) {
    out << "node " << u;
    for (Port p = 0; p < t.degree(u); ++p) out << ' ' << p << ':' << t.neighbor(u, p);
    out << '\n';
  }
}

void save_tree(const std::string& path, const Tree& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_tree(out, t);
}

std::string tree_to_string(const Tree& t) {
  std::ostringstream os;
  write_tree(os, t);
  return os.str();
}

Tree single_node() { return Tree::from_ports({{}}); }

Tree make_path(NodeId n) {
  if (n < 1) throw InvalidInput("path needs at least one node");
  std::vector<std::vector<NodeId>> by_port(n);
  for (NodeId k = 0; k < n; ++k) {
    if (k > 0) by_port[k].push_back(k - 1);
    if (k + 1 < n) by_port[k].push_back(k + 1);
  }
  return Tree::from_ports(by_port);
}

Tree make_colored_line(const std::vector<int>& colors) {
  const NodeId n = static_cast<NodeId>(colors.size()) + 1;
  std::vector<std::vector<NodeId>> by_port(n);
  for (NodeId k = 0; k < n; ++k) {
    const bool left = k > 0;
    const bool right = k + 1 < n;
    if (left && right) {
      const int cl = colors[k - 1];
      const int cr = colors[k];
      if (cl == cr || (cl != 0 && cl != 1) || (cr != 0 && cr != 1)) {
        throw InvalidInput("line coloring not proper at node " + std::to_string(k));
      }
      by_port[k].assign(2, 0);
      by_port[k][cl] = k - 1;
      by_port[k][cr] = k + 1;
    } else if (left) {
      by_port[k] = {k - 1};
    } else if (right) {
      by_port[k] = {k + 1};
    }
  }
  return Tree::from_ports(by_port);
}

Tree make_alternating_line(NodeId edges, int shift) {
  std::vector<int> colors(edges);
  for (NodeId k = 0; k < edges; ++k) colors[k] = ((k + shift) % 2 + 2) % 2;
  return make_colored_line(colors);
}

Tree make_spider(const std::vector<int>& legs) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId next = 1;
  for (int len : legs) {
    NodeId prev = 0;
    for (int k = 0; k < len; ++k) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
  }
  return from_edges(next, edges);
}

Tree from_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  RawTree raw;
  raw.node_count = n;
  raw.entries.resize(n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw InvalidInput("edge endpoint out of range");
    raw.entries[a].push_back({static_cast<Port>(raw.entries[a].size()), b});
    raw.entries[b].push_back({static_cast<Port>(raw.entries[b].size()), a});
  }
  return Tree::from_raw(raw);
}

Tree relabel_nodes(const Tree& t, const std::vector<NodeId>& perm) {
  std::vector<std::vector<NodeId>> by_port(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    auto& row = by_port[perm[u]];
    for (NodeId v : t.neighbors(u)) row.push_back(perm[v]);
  }
  return Tree::from_ports(by_port);
}

Tree permute_ports(const Tree& t, const std::vector<std::vector<Port>>& perms) {
  std::vector<std::vector<NodeId>> by_port(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    by_port[u].assign(t.degree(u), -1);
    for (Port p = 0; p < t.degree(u); ++p) by_port[u][perms[u][p]] = t.neighbor(u, p);
  }
  return Tree::from_ports(by_port);
}

}  // namespace rdv
