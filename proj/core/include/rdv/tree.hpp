#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rdv {

using NodeId = std::int32_t;
using Port = std::int32_t;

inline constexpr Port kNoPort = -1;

// Unvalidated adjacency as read from a file or built by hand.
struct RawTree {
  struct Entry {
    Port port;
    NodeId neighbor;
  };
  NodeId node_count = 0;
  std::vector<std::vector<Entry>> entries;  // entries[u] in file order
};

struct Violation {
  enum class Kind {
    EmptyTree,
    NodeOutOfRange,
    DuplicatePort,
    PortOutOfRange,
    SelfLoop,
    ParallelEdge,
    Asymmetric,
    WrongEdgeCount,
    Disconnected,
  };
  Kind kind;
  NodeId node = -1;
  NodeId other = -1;
  Port port = kNoPort;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind k) const;
  std::string to_string() const;
};

ValidationReport validate(const RawTree& raw);

// Immutable anonymous port-labeled tree. Node ids are dense 0..n-1 and
// carry no meaning for agents; they exist for the simulator and tests.
class Tree {
 public:
  Tree() = default;

  // Throws InvalidInput carrying the validator report.
  static Tree from_raw(const RawTree& raw);
  // by_port[u][p] is the neighbor of u behind port p.
  static Tree from_ports(const std::vector<std::vector<NodeId>>& by_port);

  NodeId size() const { return static_cast<NodeId>(offset_.empty() ? 0 : offset_.size() - 1); }
  int degree(NodeId u) const { return offset_[u + 1] - offset_[u]; }
  NodeId neighbor(NodeId u, Port p) const { return nbr_[offset_[u] + p]; }
  // Port at neighbor(u, p) leading back to u.
  Port back_port(NodeId u, Port p) const { return back_[offset_[u] + p]; }
  Port port_to(NodeId u, NodeId v) const;  // kNoPort if not adjacent
  std::span<const NodeId> neighbors(NodeId u) const {
    return {nbr_.data() + offset_[u], static_cast<std::size_t>(degree(u))};
  }

  int leaf_count() const;
  int max_degree() const;
  std::vector<std::vector<NodeId>> by_port() const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.offset_ == b.offset_ && a.nbr_ == b.nbr_;
  }

 private:
  std::vector<std::int32_t> offset_;
  std::vector<NodeId> nbr_;
  std::vector<Port> back_;
};

RawTree parse_tree(std::istream& in);
Tree read_tree(std::istream& in);
Tree load_tree(const std::string& path);
void write_tree(std::ostream& out, const Tree& t);
void save_tree(const std::string& path, const Tree& t);
std::string tree_to_string(const Tree& t);

// Builders. Ports not otherwise specified follow insertion order.
Tree single_node();
// Path 0-1-...-(n-1); at interior nodes port 0 leads towards node 0.
Tree make_path(NodeId n);
// Line with edge k = {k, k+1} colored colors[k]: both endpoints of the edge
// use that port. Adjacent colors must differ (proper 2-edge-coloring).
Tree make_colored_line(const std::vector<int>& colors);
// Line of `edges` edges whose edge {k, k+1} has color (k + shift) mod 2.
Tree make_alternating_line(NodeId edges, int shift);
// Star with a center and legs of the given lengths (spider).
Tree make_spider(const std::vector<int>& legs);
// Tree from an undirected edge list, ports in order of appearance.
Tree from_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges);

// Same labeled tree with node u renamed perm[u].
Tree relabel_nodes(const Tree& t, const std::vector<NodeId>& perm);
// Same topology; at node u the neighbor formerly behind port p is now
// behind port perms[u][p].
Tree permute_ports(const Tree& t, const std::vector<std::vector<Port>>& perms);

}  // namespace rdv
