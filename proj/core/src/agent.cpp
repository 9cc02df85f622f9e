#include "rdv/agent.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "rdv/error.hpp"

namespace rdv {

unsigned MemoryMeter::Reading::bits() const {
  return std::max(static_cast<unsigned>(std::bit_width(max_value)), charged_bits);
}

MemoryMeter::Handle MemoryMeter::declare(std::string name) {
  counters_.push_back(Reading{std::move(name), 0, 0});
  return counters_.size() - 1;
}

void MemoryMeter::charge(Handle h, unsigned bits) {
  counters_[h].charged_bits = std::max(counters_[h].charged_bits, bits);
}

unsigned MemoryMeter::bits() const {
  unsigned total = 0;
  for (const auto& r : counters_) total += r.bits();
  return total;
}

unsigned state_bits(std::uint64_t k) {
  return k <= 1 ? 0 : static_cast<unsigned>(std::bit_width(k - 1));
}

namespace {

std::size_t degree_offset(int d) { return static_cast<std::size_t>(d - 1) * (d + 2) / 2; }

std::string cell_name(int entry, int degree) {
  return "entry " + std::to_string(entry) + " degree " + std::to_string(degree);
}

}  // namespace

AgentAutomaton::AgentAutomaton(State states, State initial, std::vector<int> output,
                               std::vector<Rule> rules, std::optional<int> max_degree)
    : states_(states),
      initial_(initial),
      output_(std::move(output)),
      rules_(std::move(rules)),
      max_degree_(max_degree) {
  if (states_ < 1) throw InvalidInput("automaton needs at least one state");
  if (initial_ < 0 || initial_ >= states_) {
    throw InvalidInput("initial state " + std::to_string(initial_) + " out of range");
  }
  if (static_cast<State>(output_.size()) != states_) {
    throw InvalidInput("output table has " + std::to_string(output_.size()) + " entries for " +
                       std::to_string(states_) + " states");
  }
  for (State s = 0; s < states_; ++s) {
    if (output_[s] < -1) {
      throw InvalidInput("state " + std::to_string(s) + ": output " + std::to_string(output_[s]) +
                         " out of range (must be >= -1)");
    }
  }
  if (max_degree_ && *max_degree_ < 1) throw InvalidInput("maxdeg must be >= 1");
  int mentioned = -1;
  for (const auto& r : rules_) {
    const std::string where = "rule for state " + std::to_string(r.from) + ": ";
    if (r.from != kAny && (r.from < 0 || r.from >= states_)) {
      throw InvalidInput("rule source state " + std::to_string(r.from) + " out of range");
    }
    if (r.to < 0 || r.to >= states_) {
      throw InvalidInput(where + "target state " + std::to_string(r.to) + " out of range");
    }
    if (r.degree != kAny && r.degree < 1) {
      throw InvalidInput(where + "degree " + std::to_string(r.degree) + " out of range");
    }
    if (r.entry != kAny && r.entry < -1) {
      throw InvalidInput(where + "entry " + std::to_string(r.entry) + " out of range");
    }
    if (r.entry != kAny && r.degree != kAny && r.entry >= r.degree) {
      throw InvalidInput(where + "entry " + std::to_string(r.entry) + " not below degree " +
                         std::to_string(r.degree));
    }
    if (r.entry != kAny) mentioned = std::max(mentioned, r.entry);
    if (r.degree != kAny) mentioned = std::max(mentioned, r.degree);
  }
  last_specific_entry_ = mentioned;
  // Degrees above mentioned+1 and entries above mentioned only match
  // wildcards, so a table up to mentioned+2 describes every observation.
  table_degree_ = max_degree_ ? *max_degree_ : std::max(mentioned + 2, 2);
  const std::size_t per_state = degree_offset(table_degree_ + 1);
  table_.assign(per_state * static_cast<std::size_t>(states_), -1);
  for (State s = 0; s < states_; ++s) {
    for (int d = 1; d <= table_degree_; ++d) {
      for (int e = -1; e < d; ++e) {
        const auto target = lookup_rules(s, e, d);
        if (!target) {
          throw InvalidInput("state " + std::to_string(s) + ": no transition for " +
                             cell_name(e, d));
        }
        table_[cell(s, e, d)] = *target;
      }
    }
  }
}

std::optional<State> AgentAutomaton::lookup_rules(State s, int entry, int degree) const {
  for (auto it = rules_.rbegin(); it != rules_.rend(); ++it) {
    if ((it->from == kAny || it->from == s) && (it->entry == kAny || it->entry == entry) &&
        (it->degree == kAny || it->degree == degree)) {
      return it->to;
    }
  }
  return std::nullopt;
}

std::size_t AgentAutomaton::cell(State s, int entry, int degree) const {
  return static_cast<std::size_t>(s) * degree_offset(table_degree_ + 1) + degree_offset(degree) +
         static_cast<std::size_t>(entry + 1);
}

State AgentAutomaton::next(State s, Observation obs) const {
  int d = obs.degree;
  int e = obs.entry;
  if (d < 1 || e < -1 || e >= d) {
    throw InvalidInput("observation " + cell_name(e, d) + " is not realizable");
  }
  if (d > table_degree_) {
    if (max_degree_) {
      throw InvalidInput("automaton declared for degree <= " + std::to_string(*max_degree_) +
                         " observed degree " + std::to_string(d));
    }
    e = std::min(e, last_specific_entry_ + 1);
    d = table_degree_;
  }
  return table_[cell(s, e, d)];
}

Action AgentAutomaton::act(State s, int degree) const {
  const int out = output_[s];
  if (out < 0 || degree < 1) return Action::stay();
  return Action::depart(out % degree);
}

AgentAutomaton parse_automaton(std::istream& in) {
  std::optional<State> states;
  std::optional<State> initial;
  std::optional<int> max_degree;
  std::vector<std::optional<int>> outputs;
  std::vector<AgentAutomaton::Rule> rules;
  std::string line;
  int lineno = 0;
  const auto field = [](const std::string& tok, const std::string& where, bool wildcard) {
    if (wildcard && tok == "*") return AgentAutomaton::kAny;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size() || v < -1 || v > (1 << 30)) throw std::invalid_argument(tok);
      return static_cast<int>(v);
    } catch (const std::logic_error&) {
      throw ParseError(where + "bad number '" + tok + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    const auto need = [&](std::size_t k) {
      if (tok.size() != k) throw ParseError(where + "'" + tok[0] + "' takes " + std::to_string(k - 1) + " fields");
    };
    if (tok[0] == "states") {
      need(2);
      if (states) throw ParseError(where + "second 'states' line");
      const int k = field(tok[1], where, false);
      if (k < 1) throw ParseError(where + "states must be >= 1");
      states = k;
      outputs.assign(k, std::nullopt);
    } else if (tok[0] == "initial") {
      need(2);
      initial = field(tok[1], where, false);
    } else if (tok[0] == "maxdeg") {
      need(2);
      max_degree = field(tok[1], where, false);
    } else if (tok[0] == "out") {
      need(3);
      if (!states) throw ParseError(where + "'out' before 'states'");
      const int s = field(tok[1], where, false);
      if (s < 0 || s >= *states) throw ParseError(where + "state " + tok[1] + " out of range");
      long long lambda = 0;
      try {
        std::size_t used = 0;
        lambda = std::stoll(tok[2], &used);
        if (used != tok[2].size()) throw std::invalid_argument(tok[2]);
      } catch (const std::logic_error&) {
        throw ParseError(where + "state " + std::to_string(s) + ": bad output '" + tok[2] + "'");
      }
      if (lambda < -1 || lambda > (1 << 30)) {
        throw ParseError(where + "state " + std::to_string(s) + ": output " + tok[2] +
                         " out of range (must be >= -1)");
      }
      outputs[s] = static_cast<int>(lambda);
    } else if (tok[0] == "trans") {
      need(5);
      rules.push_back({field(tok[1], where, true), field(tok[2], where, true),
                       field(tok[3], where, true), field(tok[4], where, false)});
    } else {
      throw ParseError(where + "unknown directive '" + tok[0] + "'");
    }
  }
  if (!states) throw ParseError("missing 'states' line");
  if (!initial) throw ParseError("missing 'initial' line");
  std::vector<int> out(*states);
  for (State s = 0; s < *states; ++s) {
    if (!outputs[s]) throw InvalidInput("state " + std::to_string(s) + ": missing 'out' line");
    out[s] = *outputs[s];
  }
  return AgentAutomaton(*states, *initial, std::move(out), std::move(rules), max_degree);
}

AgentAutomaton load_automaton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open automaton file '" + path + "'");
  return parse_automaton(in);
}

void write_automaton(std::ostream& out, const AgentAutomaton& a) {
  const auto w = [](int v) { return v == AgentAutomaton::kAny ? std::string("*") : std::to_string(v); };
  out << "states " << a.size() << '\n' << "initial " << a.initial() << '\n';
  if (a.max_degree()) out << "maxdeg " << *a.max_degree() << '\n';
  for (State s = 0; s < a.size(); ++s) out << "out " << s << ' ' << a.output(s) << '\n';
  for (const auto& r : a.rules()) {
    out << "trans " << w(r.from) << ' ' << w(r.entry) << ' ' << w(r.degree) << ' ' << r.to << '\n';
  }
}

void save_automaton(const std::string& path, const AgentAutomaton& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_automaton(out, a);
}

AutomatonAgent::AutomatonAgent(std::shared_ptr<const AgentAutomaton> automaton)
    : automaton_(std::move(automaton)), state_(automaton_->initial()) {
  meter_.charge(meter_.declare("state"), state_bits(static_cast<std::uint64_t>(automaton_->size())));
}

Action AutomatonAgent::begin(int degree) { return automaton_->act(state_, degree); }

Action AutomatonAgent::step(Observation obs) {
  state_ = automaton_->next(state_, obs);
  return automaton_->act(state_, obs.degree);
}

AgentFactory automaton_factory(std::shared_ptr<const AgentAutomaton> automaton) {
  return [automaton] { return std::make_unique<AutomatonAgent>(automaton); };
}

BasicWalkProgram::BasicWalkProgram() : port_counter_(meter_.declare("port")) {}

Action BasicWalkProgram::begin(int degree) {
  if (degree < 1) return Action::stay();
  meter_.observe(port_counter_, 0);
  return Action::depart(0);
}

Action BasicWalkProgram::step(Observation obs) {
  const Port out = obs.entry == kNoPort ? 0 : (obs.entry + 1) % obs.degree;
  meter_.observe(port_counter_, static_cast<std::uint64_t>(out));
  return Action::depart(out);
}

ColoredLineReduction reduce_for_colored_line(const AgentAutomaton& a) {
  ColoredLineReduction r;
  r.next.resize(a.size());
  r.move_color.resize(a.size());
  for (State s = 0; s < a.size(); ++s) {
    const int out = a.output(s);
    const int color = out < 0 ? -1 : out % 2;
    r.move_color[s] = color;
    r.next[s] = a.next(s, Observation{color, 2});
  }
  return r;
}

AgentAutomaton basic_walk_automaton(int max_degree) {
  // State k departs by port k; entering by e leads to state e+1.
  const State k = max_degree + 1;
  std::vector<int> out(k);
  for (State s = 0; s < k; ++s) out[s] = s;
  std::vector<AgentAutomaton::Rule> rules;
  rules.push_back({AgentAutomaton::kAny, -1, AgentAutomaton::kAny, 0});
  for (int e = 0; e < max_degree; ++e) rules.push_back({AgentAutomaton::kAny, e, AgentAutomaton::kAny, e + 1});
  return AgentAutomaton(k, 0, std::move(out), std::move(rules), max_degree);
}

AgentAutomaton constant_port_automaton(int port) {
  return AgentAutomaton(1, 0, {port}, {{0, AgentAutomaton::kAny, AgentAutomaton::kAny, 0}});
}

AgentAutomaton stay_automaton() { return constant_port_automaton(-1); }

AgentAutomaton alternator_automaton() {
  return AgentAutomaton(2, 0, {0, 1},
                        {{0, AgentAutomaton::kAny, AgentAutomaton::kAny, 1},
                         {1, AgentAutomaton::kAny, AgentAutomaton::kAny, 0}});
}

AgentAutomaton random_automaton(State states, int max_degree, std::mt19937_64& rng,
                                double stay_probability) {
  std::uniform_int_distribution<State> pick_state(0, states - 1);
  std::uniform_int_distribution<int> pick_port(0, std::max(0, max_degree - 1));
  std::bernoulli_distribution stays(stay_probability);
  std::vector<int> out(states);
  for (State s = 0; s < states; ++s) out[s] = stays(rng) ? -1 : pick_port(rng);
  std::vector<AgentAutomaton::Rule> rules;
  for (State s = 0; s < states; ++s) {
    for (int d = 1; d <= max_degree; ++d) {
      for (int e = -1; e < d; ++e) rules.push_back({s, e, d, pick_state(rng)});
    }
  }
  return AgentAutomaton(states, 0, std::move(out), std::move(rules), max_degree);
}

}  // namespace rdv
