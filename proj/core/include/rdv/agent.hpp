#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rdv/tree.hpp"

namespace rdv {

// What an agent sees after a round: the port it arrived by (kNoPort after
// a null move or at the start) and the degree of its node.
struct Observation {
  Port entry = kNoPort;
  int degree = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

class Action {
 public:
  static constexpr Action stay() { return Action(kNoPort); }
  static constexpr Action depart(Port p) { return Action(p); }

  constexpr bool is_stay() const { return port_ == kNoPort; }
  constexpr Port port() const { return port_; }

  friend bool operator==(const Action&, const Action&) = default;

 private:
  constexpr explicit Action(Port p) : port_(p) {}
  Port port_;
};

// Persistent memory accounting. A counter costs the bit width of the
// largest value it ever held, or an explicit charge if larger. Readings
// only grow.
class MemoryMeter {
 public:
  using Handle = std::size_t;

  struct Reading {
    std::string name;
    std::uint64_t max_value = 0;
    unsigned charged_bits = 0;
    unsigned bits() const;
  };

  Handle declare(std::string name);
  void observe(Handle h, std::uint64_t value) {
    if (value > counters_[h].max_value) counters_[h].max_value = value;
  }
  void charge(Handle h, unsigned bits);

  unsigned bits() const;
  const std::vector<Reading>& readings() const { return counters_; }

 private:
  std::vector<Reading> counters_;
};

// Bits needed to distinguish k states.
unsigned state_bits(std::uint64_t k);

class AgentProgram {
 public:
  virtual ~AgentProgram() = default;

  // First action, taken at the start node of the given degree.
  virtual Action begin(int degree) = 0;
  // Transition on the observation of the previous round, then act.
  virtual Action step(Observation obs) = 0;
  virtual const MemoryMeter& meter() const = 0;

  // Finite-state agents expose their state for cycle detection.
  virtual std::optional<std::uint64_t> state_key() const { return std::nullopt; }
  // Independent copy in the same state; null when unsupported.
  virtual std::unique_ptr<AgentProgram> clone() const { return nullptr; }
  // Ground-truth hook for oracle-backed subroutines. Agents that do not
  // emulate an oracle ignore it.
  virtual void bind_environment(const Tree& /*tree*/, NodeId /*start*/) {}
};

using AgentFactory = std::function<std::unique_ptr<AgentProgram>()>;

using State = std::int32_t;

// Explicit finite automaton (S, pi, lambda, s0).
class AgentAutomaton {
 public:
  static constexpr int kAny = -2;

  struct Rule {
    State from;
    int entry;   // kAny, -1, or a port
    int degree;  // kAny or a degree >= 1
    State to;

    friend bool operator==(const Rule&, const Rule&) = default;
  };

  AgentAutomaton() = default;
  // Throws InvalidInput if the table is not total or has bad ranges.
  AgentAutomaton(State states, State initial, std::vector<int> output, std::vector<Rule> rules,
                 std::optional<int> max_degree = std::nullopt);

  State size() const { return states_; }
  State initial() const { return initial_; }
  int output(State s) const { return output_[s]; }
  const std::vector<int>& outputs() const { return output_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::optional<int> max_degree() const { return max_degree_; }

  // pi(s, obs). Throws InvalidInput for observations outside the declared
  // degree range.
  State next(State s, Observation obs) const;
  // lambda(s) applied at a node of the given degree.
  Action act(State s, int degree) const;

  friend bool operator==(const AgentAutomaton& a, const AgentAutomaton& b) {
    return a.states_ == b.states_ && a.initial_ == b.initial_ && a.output_ == b.output_ &&
           a.rules_ == b.rules_ && a.max_degree_ == b.max_degree_;
  }

 private:
  std::optional<State> lookup_rules(State s, int entry, int degree) const;
  std::size_t cell(State s, int entry, int degree) const;

  State states_ = 0;
  State initial_ = 0;
  std::vector<int> output_;
  std::vector<Rule> rules_;
  std::optional<int> max_degree_;
  int table_degree_ = 0;  // degrees above this behave like table_degree_
  int last_specific_entry_ = -1;
  std::vector<State> table_;
};

AgentAutomaton parse_automaton(std::istream& in);
AgentAutomaton load_automaton(const std::string& path);
void write_automaton(std::ostream& out, const AgentAutomaton& a);
void save_automaton(const std::string& path, const AgentAutomaton& a);

class AutomatonAgent final : public AgentProgram {
 public:
  explicit AutomatonAgent(std::shared_ptr<const AgentAutomaton> automaton);

  Action begin(int degree) override;
  Action step(Observation obs) override;
  const MemoryMeter& meter() const override { return meter_; }
  std::optional<std::uint64_t> state_key() const override {
    return static_cast<std::uint64_t>(state_);
  }
  std::unique_ptr<AgentProgram> clone() const override {
    return std::make_unique<AutomatonAgent>(*this);
  }
  State state() const { return state_; }

 private:
  std::shared_ptr<const AgentAutomaton> automaton_;
  State state_;
  MemoryMeter meter_;
};

AgentFactory automaton_factory(std::shared_ptr<const AgentAutomaton> automaton);

// Basic walk as a structured program with one declared counter.
class BasicWalkProgram final : public AgentProgram {
 public:
  BasicWalkProgram();
  Action begin(int degree) override;
  Action step(Observation obs) override;
  const MemoryMeter& meter() const override { return meter_; }

 private:
  MemoryMeter meter_;
  MemoryMeter::Handle port_counter_;
};

// Behaviour on a properly 2-edge-colored line away from its endpoints:
// the degree-2 successor map and the color of each move (-1 for a null move).
struct ColoredLineReduction {
  std::vector<State> next;
  std::vector<int> move_color;
};

ColoredLineReduction reduce_for_colored_line(const AgentAutomaton& a);

// Ready-made automata.
AgentAutomaton basic_walk_automaton(int max_degree);
AgentAutomaton constant_port_automaton(int port);  // one state, lambda = port
AgentAutomaton stay_automaton();
AgentAutomaton alternator_automaton();              // lambda 0, 1, 0, 1, ...
// Uniform random table over degrees <= max_degree.
AgentAutomaton random_automaton(State states, int max_degree, std::mt19937_64& rng,
                                double stay_probability = 0.1);

}  // namespace rdv
