#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdv/error.hpp"
#include "rdv/tree.hpp"

namespace rdv {

struct CenterInfo {
  enum class Kind { CentralNode, CentralEdge };
  Kind kind = Kind::CentralNode;
  NodeId x = 0;
  NodeId y = -1;  // second extremity for CentralEdge, -1 otherwise

  bool is_edge() const { return kind == Kind::CentralEdge; }
};

// Iterated leaf removal. A single node is its own central node.
CenterInfo center(const Tree& t);

struct WalkPosition {
  NodeId node = 0;
  Port entry = kNoPort;

  friend bool operator==(const WalkPosition&, const WalkPosition&) = default;
};

// Moves along port p and records the port of arrival.
inline WalkPosition depart(const Tree& t, NodeId u, Port p) {
  return WalkPosition{t.neighbor(u, p), t.back_port(u, p)};
}

// Leaves by (entry+1) mod d, or by port 0 when there is no entry.
WalkPosition basic_walk_step(const Tree& t, WalkPosition pos);
// Leaves by (entry-1) mod d, or by port 0 when there is no entry.
WalkPosition counter_basic_walk_step(const Tree& t, WalkPosition pos);

struct ContractionView {
  struct Hop {
    NodeId node;  // T node
    Port out;     // port at `node` towards the next node of the path
  };
  Tree contracted;                            // T'
  std::vector<NodeId> node_map;               // T' node -> T node
  std::vector<NodeId> inverse;                // T node -> T' node, -1 on degree-2 nodes
  // edge_path[a][p]: T walk from node_map[a] leaving by port p until the next
  // T' node, one Hop per traversed edge.
  std::vector<std::vector<std::vector<Hop>>> edge_path;
  NodeId original_size = 0;

  NodeId nu() const { return contracted.size(); }
};

// Replaces maximal chains of degree-2 nodes by single edges. T' ports are
// the T ports at the chain extremities. A path contracts to one edge.
ContractionView contract(const Tree& t);
// Rebuilds T from the view; T node ids are restored exactly.
Tree expand(const ContractionView& view);

enum class CodeMode { Topological, PortPreserving };

// Canonical code of `t` rooted at `root`, optionally marking one node.
// Equal codes iff a rooted (marked, port-respecting in PortPreserving
// mode) isomorphism exists.
std::string canonical_code(const Tree& t, NodeId root, std::optional<NodeId> marked,
                           CodeMode mode);

// Code of the component of `root` after deleting the edge {root, away}.
// In PortPreserving mode the root's port towards `away` is part of the code.
std::string half_code(const Tree& t, NodeId root, NodeId away, std::optional<NodeId> marked,
                      CodeMode mode);

// Code of the unrooted, unlabeled tree (identifies a topology).
std::string free_tree_code(const Tree& t);

// True iff T has a central edge whose two halves are port-preserving
// isomorphic. The 2-node tree is symmetric under any labeling.
bool is_symmetric(const Tree& t);

// Throws InvalidInput when u == v.
bool perfectly_symmetrizable(const Tree& t, NodeId u, NodeId v);

// Port-preserving automorphism of the given labeling carrying u to v, if any.
std::optional<std::vector<NodeId>> label_preserving_automorphism(const Tree& t, NodeId u,
                                                                  NodeId v);

struct SymmetrizabilityWitness {
  bool symmetrizable = false;
  std::optional<Tree> labeling;                // labeling that admits the automorphism
  std::vector<NodeId> automorphism;            // f with f(u) = v under that labeling
  std::uint64_t labelings_examined = 0;
};

// Number of port labelings of t's topology, saturating at UINT64_MAX.
std::uint64_t labeling_count(const Tree& t);

// Calls f(labeled_tree) for every port labeling of t's topology, in a
// fixed order. Stops early when f returns false. Throws BudgetExceeded if
// labeling_count(t) > budget.
template <class F>
void for_each_labeling(const Tree& t, std::uint64_t budget, F&& f);

// Relabeling of t (same node ids) under which a label-preserving
// automorphism carries u to v; empty when the pair is not perfectly
// symmetrizable. Ports on the u side are kept.
std::optional<Tree> symmetrizing_labeling(const Tree& t, NodeId u, NodeId v);

// Direct enumeration over all labelings and automorphisms.
SymmetrizabilityWitness perfectly_symmetrizable_bruteforce(const Tree& t, NodeId u, NodeId v,
                                                           std::uint64_t budget = 5'000'000);

// All distances from one source.
std::vector<int> bfs_distances(const Tree& t, NodeId source);

// Constant-time distance queries after O(n log n) preprocessing.
class TreeDistance {
 public:
  explicit TreeDistance(const Tree& t);
  int operator()(NodeId a, NodeId b) const;

 private:
  std::vector<int> depth_;
  std::vector<std::vector<NodeId>> up_;
};

namespace detail {
bool next_labeling(std::vector<std::vector<Port>>& perms);
}

template <class F>
void for_each_labeling(const Tree& t, std::uint64_t budget, F&& f) {
  if (labeling_count(t) > budget) {
    throw BudgetExceeded("labeling enumeration needs " + std::to_string(labeling_count(t)) +
                         " labelings, budget is " + std::to_string(budget));
  }
  std::vector<std::vector<Port>> perms(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    perms[u].resize(t.degree(u));
    for (Port p = 0; p < t.degree(u); ++p) perms[u][p] = p;
  }
  do {
    if (!f(permute_ports(t, perms))) return;
  } while (detail::next_labeling(perms));
}

}  // namespace rdv
