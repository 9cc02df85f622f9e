#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rdv/agent.hpp"
#include "rdv/analysis.hpp"
#include "rdv/tree.hpp"

namespace rdv {

enum class DelayedAgent { A, B };

struct Horizon {
  std::optional<std::uint64_t> rounds;  // empty: run until met or certified

  static Horizon unbounded() { return {}; }
  static Horizon of(std::uint64_t r) { return Horizon{r}; }
  bool bounded() const { return rounds.has_value(); }
};

struct Scenario {
  std::shared_ptr<const Tree> tree;
  NodeId start_a = 0;
  NodeId start_b = 1;
  std::uint64_t delay = 0;  // theta, applied to `delayed`
  DelayedAgent delayed = DelayedAgent::B;
  Horizon horizon = Horizon::unbounded();
  bool record_trace = false;
  // When false a bounded run continues after the first meeting; the outcome
  // still reports that first meeting.
  bool stop_at_meeting = true;

  // First round in which agent k (0 = A, 1 = B) acts.
  std::uint64_t start_round(int k) const {
    const bool late = (k == 0) == (delayed == DelayedAgent::A);
    return late ? delay + 1 : 1;
  }
};

struct Met {
  std::uint64_t round;
  NodeId node;
  friend bool operator==(const Met&, const Met&) = default;
};
struct CertifiedNeverMeet {
  std::uint64_t cycle_start;   // round whose end configuration opens the cycle
  std::uint64_t cycle_length;
  friend bool operator==(const CertifiedNeverMeet&, const CertifiedNeverMeet&) = default;
};
struct Timeout {
  std::uint64_t horizon;
  friend bool operator==(const Timeout&, const Timeout&) = default;
};
using Outcome = std::variant<Met, CertifiedNeverMeet, Timeout>;

std::string describe(const Outcome& o);

// Configuration at the end of a round (round 0 = initial placement).
struct TraceRecord {
  std::uint64_t round = 0;
  NodeId pos_a = 0;
  std::int64_t state_a = -1;  // -1 when the agent exposes no state
  NodeId pos_b = 0;
  std::int64_t state_b = -1;
  bool moved_a = false;
  bool moved_b = false;
  bool started_a = false;
  bool started_b = false;
};

struct AgentReport {
  unsigned bits = 0;
  std::vector<MemoryMeter::Reading> counters;
  std::uint64_t idle_rounds = 0;  // rounds without a move, including before the start
  std::uint64_t moves = 0;
};

struct RunResult {
  Outcome outcome = Timeout{0};
  std::vector<TraceRecord> trace;          // filled when record_trace
  std::vector<std::uint64_t> crossings;    // rounds in which the agents swapped nodes
  std::array<AgentReport, 2> agents;
  std::uint64_t rounds = 0;                // rounds simulated

  bool met() const { return std::holds_alternative<Met>(outcome); }
  const Met* meeting() const { return std::get_if<Met>(&outcome); }
  const CertifiedNeverMeet* certificate() const { return std::get_if<CertifiedNeverMeet>(&outcome); }
};

// Runs two fresh agents from the factory. An unbounded horizon needs
// agents with state_key() and clone(); otherwise Refused is thrown.
RunResult run(const Scenario& scenario, const AgentFactory& factory);
// Runs caller-owned agents, which keep their final state for inspection.
// The horizon must be bounded.
RunResult run(const Scenario& scenario, AgentProgram& a, AgentProgram& b);

// Replays a certificate from scratch: no meeting up to the end of the
// cycle, and the configuration after cycle_start + cycle_length equals the
// one after cycle_start.
bool verify_certificate(const Scenario& scenario, const AgentFactory& factory,
                        const CertifiedNeverMeet& cert);

// Cumulative idle counts: result[r] = idle rounds of the agent in rounds 1..r.
std::vector<std::uint64_t> idle_prefix(std::span<const TraceRecord> trace, int agent);

// For the trace segment trace[0..t]: with q, q' the idle counts over rounds
// 1..t and an odd initial distance, |q - q'| even implies an odd distance
// at t. Throws InvalidInput when the initial distance is even or an agent
// is not started at the beginning of the segment.
bool check_parity_lemma(const TreeDistance& dist, std::span<const TraceRecord> trace,
                        std::size_t t);

// Walk of one automaton on an infinite line where edge {x, x+1} has
// color x mod 2 at both ends. Step k holds the position after k moves and
// the state in which the agent leaves that position.
struct LineProbe {
  struct Step {
    std::int64_t position;
    State state;
  };
  std::vector<Step> steps;  // steps[0] = {0, s0}
  // First repetition of (state, position parity): steps[mu] and
  // steps[mu + period] match, after which displacement grows by `drift`
  // every period.
  std::optional<std::size_t> mu;
  std::size_t period = 0;
  std::int64_t drift = 0;
  bool partial = false;  // max_steps reached before the repetition appeared
};

LineProbe infinite_line_probe(const AgentAutomaton& a, std::size_t max_steps);
// Color of edge {x, x+1} on the probe line.
inline int probe_color(std::int64_t x) { return static_cast<int>(((x % 2) + 2) % 2); }

// Scenario files: scenario <tree-file> a=<id> b=<id> delay=<theta>
// horizon=<H|auto> [delayed=a|b]. The tree path is relative to the file.
struct ScenarioFile {
  std::string tree_path;
  NodeId a = 0;
  NodeId b = 1;
  std::uint64_t delay = 0;
  DelayedAgent delayed = DelayedAgent::B;
  std::optional<std::uint64_t> horizon;  // empty = auto
};

ScenarioFile parse_scenario(std::istream& in);
ScenarioFile load_scenario_file(const std::string& path);
void write_scenario(std::ostream& out, const ScenarioFile& s);
// Loads the referenced tree and checks the starts. `auto` maps to
// `auto_horizon`.
Scenario materialize(const ScenarioFile& file, const std::string& scenario_path,
                     Horizon auto_horizon);

void write_trace(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace rdv
