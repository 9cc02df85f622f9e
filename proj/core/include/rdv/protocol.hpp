#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rdv/agent.hpp"
#include "rdv/analysis.hpp"
#include "rdv/sim.hpp"
#include "rdv/tree.hpp"

namespace rdv {

enum class ExploVerdict { CentralNode, CentralEdgeAsymmetric, CentralEdgeSymmetric };

std::string to_string(ExploVerdict v);

struct ExploReport {
  NodeId nu = 0;          // nodes of the contraction
  int leaf_count = 0;
  ExploVerdict verdict = ExploVerdict::CentralNode;
  int steps_to_target = 0;     // contraction steps of the port-0 basic walk
  Port central_port = kNoPort;  // at the target, towards the central path

  friend bool operator==(const ExploReport&, const ExploReport&) = default;
};

// Ground-truth stand-in for the exploration subroutine. Everything an
// agent learns from it is a function of the contraction and the start.
class ExploOracle {
 public:
  explicit ExploOracle(std::shared_ptr<const Tree> tree);

  // Throws InvalidInput if start has degree 2.
  ExploReport query(NodeId start) const;
  // Contraction node the report's walk ends at.
  NodeId target(NodeId start) const;

  const Tree& tree() const { return *tree_; }
  std::shared_ptr<const Tree> tree_ptr() const { return tree_; }
  const ContractionView& contraction() const { return view_; }
  const CenterInfo& contraction_center() const { return center_; }
  ExploVerdict verdict() const { return verdict_; }
  // T length of the central path (central-edge cases), 0 otherwise.
  int central_path_length() const { return central_path_length_; }

 private:
  std::shared_ptr<const Tree> tree_;
  ContractionView view_;
  CenterInfo center_;
  ExploVerdict verdict_;
  NodeId canonical_extremity_ = -1;  // contraction id, asymmetric case
  int central_path_length_ = 0;
};

// Bits charged for one exploration: factor * ceil(log2 nu).
inline constexpr unsigned kExploBitsPerLogNu = 3;

struct PhaseEvent {
  enum class Kind {
    LeafReached,   // end of the leaf search (round L; 0 when not needed)
    ExploBisEnd,
    WaitBegin,     // waiting at the common target (non-symmetric cases)
    SynchroEnd,
    AtFar,         // arrival at the farthest central extremity
    OuterBegin,    // i
    PrimeBegin,    // i, j
    ResetBegin,    // i
  };
  Kind kind;
  std::uint64_t round;  // rounds this agent had executed when it happened
  int i = 0;
  int j = 0;
};

std::string to_string(PhaseEvent::Kind k);

struct ProtocolOptions {
  bool log_events = true;
};

// The tree protocol as a structured program with declared counters.
class RendezvousAgent final : public AgentProgram {
 public:
  RendezvousAgent(std::shared_ptr<const ExploOracle> oracle, ProtocolOptions options = {});
  ~RendezvousAgent() override;
  RendezvousAgent(const RendezvousAgent&) = delete;
  RendezvousAgent& operator=(const RendezvousAgent&) = delete;

  Action begin(int degree) override;
  Action step(Observation obs) override;
  const MemoryMeter& meter() const override;
  void bind_environment(const Tree& tree, NodeId start) override;

  const std::vector<PhaseEvent>& events() const;
  // Report obtained at the end of the first exploration, if reached.
  std::optional<ExploReport> report() const;
  // Current values of all persistent registers (for state comparisons).
  std::vector<std::int64_t> registers() const;
  std::uint64_t rounds_executed() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

AgentFactory rendezvous_factory(std::shared_ptr<const ExploOracle> oracle,
                                ProtocolOptions options = {});

// |P| in edges: 5l(2W + 2|C|) + 2W + |C| with W = 2(n-1).
std::uint64_t rendezvous_path_length(const ExploOracle& oracle);
// Largest j with p_1 * ... * p_j <= m^2.
int prime_bound_index(std::uint64_t m);
// j-th prime, 1-based.
std::uint64_t nth_prime(int j);
std::uint64_t next_prime(std::uint64_t p);

// Round bound after which two agents started together have met, if they
// ever meet: the full schedule through `outer` outer iterations plus the
// largest possible lag. With outer = 0 the iteration count is derived
// from the prime bound of the rendezvous path.
std::uint64_t protocol_horizon(const ExploOracle& oracle, int outer = 0);

// Line protocol for blind agents on the path v_1..v_m.
enum class LineDirection { TowardsFirst, TowardsLast };

class PrimeLineAgent final : public AgentProgram {
 public:
  // initial_port: the port leading in the chosen direction, kNoPort when
  // the agent already stands at the extremity in that direction.
  explicit PrimeLineAgent(Port initial_port, int max_index = 0);
  ~PrimeLineAgent() override;
  PrimeLineAgent(const PrimeLineAgent&) = delete;
  PrimeLineAgent& operator=(const PrimeLineAgent&) = delete;

  Action begin(int degree) override;
  Action step(Observation obs) override;
  const MemoryMeter& meter() const override;

  // Index of the prime loop iteration in progress (0 = initial run).
  int iteration() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct PrimeLineResult {
  bool met = false;
  std::uint64_t round = 0;
  NodeId node = 0;      // 1-based path position
  int prime_index = 0;  // loop iteration in progress at the meeting (larger of the two)
  int bound_index = 0;  // prime_bound_index(m)
  unsigned bits = 0;    // max meter bits of the two agents
};

// Runs both agents from a and b (1-based, a < b) through max_index loop
// iterations (default: the prime bound).
PrimeLineResult prime_line(int m, int a, int b, LineDirection dir_a, LineDirection dir_b,
                           std::optional<int> max_index = std::nullopt);

}  // namespace rdv
