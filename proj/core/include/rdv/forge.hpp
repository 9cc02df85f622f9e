#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdv/agent.hpp"
#include "rdv/error.hpp"
#include "rdv/sim.hpp"
#include "rdv/tree.hpp"

namespace rdv {

// Degree-2 transition digraph of an automaton on a properly 2-edge-colored
// line, where the entry port always equals the color just used.
struct DigraphAnalysis {
  std::vector<State> reduced;               // pi'(s)
  std::vector<std::vector<State>> circuits;  // one per weakly connected component
  std::vector<int> circuit_of;               // component (= circuit index) of each state
  std::vector<bool> on_circuit;
  std::uint64_t gamma = 1;                   // lcm of circuit lengths
  // Largest displacement from the start on the infinite line, when bounded.
  std::optional<std::int64_t> range_bound;
};

DigraphAnalysis analyze_digraph(const AgentAutomaton& a);

enum class ForgeKind { Theorem1Line, Theorem3Line, Theorem4TwoSidedTree };

std::string to_string(ForgeKind k);

struct ForgeInstance {
  ForgeKind kind = ForgeKind::Theorem1Line;
  std::shared_ptr<const AgentAutomaton> agent;
  std::shared_ptr<const Tree> tree;
  NodeId start_a = 0;
  NodeId start_b = 1;
  std::uint64_t delay = 0;
  DelayedAgent delayed = DelayedAgent::B;
  // Construction parameters, in emission order.
  std::vector<std::pair<std::string, std::string>> provenance;
  CertifiedNeverMeet certificate{0, 0};

  Scenario scenario(Horizon h = Horizon::unbounded()) const;
  // Throws InvalidInput if the key is missing or not an integer.
  std::int64_t param(const std::string& key) const;
};

// Re-checks an instance: starts not perfectly symmetrizable and the
// certificate replays. Throws VerificationFailure otherwise.
void verify_instance(const ForgeInstance& inst);

// Instance directories hold instance.tree, instance.scenario, agent.aut,
// provenance.txt and certificate.txt.
void write_instance(const std::string& dir, const ForgeInstance& inst);
ForgeInstance load_instance(const std::string& dir);

// Arbitrary-delay line instance of length 8(K+1)+1.
ForgeInstance forge_theorem1(const AgentAutomaton& a);
// Simultaneous-start line instance.
ForgeInstance forge_theorem3(const AgentAutomaton& a);

// Rounds <= the synchronization time in which the agents stood on
// opposite sides of the central edge (Theorem-1 instances).
bool theorem1_sides_hold(const ForgeInstance& inst, std::span<const TraceRecord> trace);
// Smallest inter-agent distance over rounds in which some agent is in a
// bouncing period; empty if no bouncing round appears in the trace.
std::optional<std::int64_t> theorem3_min_bouncing_distance(const ForgeInstance& inst,
                                                           std::span<const TraceRecord> trace);

// Side trees: an (i+1)-node spine whose i-1 internal nodes each carry a
// leaf (mask bit 0) or a two-node chain (bit 1). Ports: root 0 towards
// the joining path and 1 down the spine; internal spine nodes 0 up,
// 1 down, 2 to the attachment; chain nodes 0 up, 1 down.
struct TwoSidedTree {
  Tree tree;
  NodeId u = 0;  // path node next to the first root
  NodeId v = 0;  // path node next to the second root
  NodeId root1 = 0;
  NodeId root2 = 0;
};

// m >= 2 even: the joining path has m nodes of degree 2 and m + 1 edges,
// 2-edge-colored with ports 0/0 on the central edge.
TwoSidedTree two_sided_tree(int i, std::uint64_t mask1, std::uint64_t mask2, int m = 2);
// Port at the anchor leading to the root: (m/2) mod 2.
inline int anchor_port(int m) { return (m / 2) % 2; }

struct BehaviorFunction {
  struct Entry {
    bool divergent = false;
    State next = 0;
    std::uint64_t duration = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> q;
  std::uint64_t max_duration = 0;  // D over returning tours

  friend bool operator==(const BehaviorFunction& a, const BehaviorFunction& b) { return a.q == b.q; }
};

// Tours from the anchor into side tree `mask`, one per start state.
BehaviorFunction behavior_function(const AgentAutomaton& a, int i, std::uint64_t mask, int m = 2);

struct Theorem4Options {
  int m = 2;
  std::uint64_t budget = std::uint64_t{1} << 20;  // side trees examined
  std::uint64_t seed = 1;                         // sampling beyond i = 20
};

class NoCollisionFound : public Error {
 public:
  NoCollisionFound(std::string what, std::uint64_t examined)
      : Error(std::move(what)), examined_(examined) {}
  std::uint64_t examined() const { return examined_; }

 private:
  std::uint64_t examined_;
};

ForgeInstance forge_theorem4(const AgentAutomaton& a, int i, const Theorem4Options& options = {});

}  // namespace rdv
