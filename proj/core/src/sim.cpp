#include "rdv/sim.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rdv/error.hpp"

namespace rdv {

std::string describe(const Outcome& o) {
  if (const auto* m = std::get_if<Met>(&o)) {
    return "met round=" + std::to_string(m->round) + " node=" + std::to_string(m->node);
  }
  if (const auto* c = std::get_if<CertifiedNeverMeet>(&o)) {
    return "never-meet cycle_start=" + std::to_string(c->cycle_start) +
           " cycle_length=" + std::to_string(c->cycle_length);
  }
  return "timeout horizon=" + std::to_string(std::get<Timeout>(o).horizon);
}

namespace {

struct Config {
  std::array<NodeId, 2> pos{};
  std::array<Port, 2> entry{kNoPort, kNoPort};
  std::array<std::uint64_t, 2> key{};
  std::array<bool, 2> started{};
  friend bool operator==(const Config&, const Config&) = default;
};

// Round engine over borrowed agents.
class Engine {
 public:
  Engine(const Scenario& sc, std::array<AgentProgram*, 2> agents)
      : tree_(*sc.tree), agents_(agents) {
    cfg_.pos = {sc.start_a, sc.start_b};
    start_round_ = {sc.start_round(0), sc.start_round(1)};
  }

  // Advances one round; returns true if the agents are co-located after it.
  bool step() {
    ++round_;
    const Config before = cfg_;
    moved_ = {false, false};
    for (int k = 0; k < 2; ++k) {
      if (round_ < start_round_[k]) continue;
      const int deg = tree_.degree(cfg_.pos[k]);
      Action act = Action::stay();
      if (!cfg_.started[k]) {
        act = agents_[k]->begin(deg);
        cfg_.started[k] = true;
      } else {
        act = agents_[k]->step(Observation{cfg_.entry[k], deg});
      }
      if (act.is_stay()) {
        cfg_.entry[k] = kNoPort;
      } else {
        const Port p = act.port();
        if (p < 0 || p >= deg) {
          throw InvalidInput("agent chose port " + std::to_string(p) + " at a node of degree " +
                             std::to_string(deg));
        }
        const WalkPosition next = depart(tree_, cfg_.pos[k], p);
        cfg_.pos[k] = next.node;
        cfg_.entry[k] = next.entry;
        moved_[k] = true;
      }
      if (const auto key = agents_[k]->state_key()) cfg_.key[k] = *key;
    }
    for (int k = 0; k < 2; ++k) {
      if (moved_[k]) ++moves_[k];
      else ++idle_[k];
    }
    crossed_ = moved_[0] && moved_[1] && cfg_.pos[0] == before.pos[1] && cfg_.pos[1] == before.pos[0];
    return cfg_.pos[0] == cfg_.pos[1];
  }

  TraceRecord record() const {
    TraceRecord r;
    r.round = round_;
    r.pos_a = cfg_.pos[0];
    r.pos_b = cfg_.pos[1];
    const auto ka = agents_[0]->state_key();
    const auto kb = agents_[1]->state_key();
    r.state_a = ka ? static_cast<std::int64_t>(*ka) : -1;
    r.state_b = kb ? static_cast<std::int64_t>(*kb) : -1;
    r.moved_a = moved_[0];
    r.moved_b = moved_[1];
    r.started_a = cfg_.started[0];
    r.started_b = cfg_.started[1];
    return r;
  }

  bool both_started() const { return cfg_.started[0] && cfg_.started[1]; }
  const Config& config() const { return cfg_; }
  std::uint64_t round() const { return round_; }
  bool crossed() const { return crossed_; }
  std::array<std::uint64_t, 2> idle() const { return idle_; }
  std::array<std::uint64_t, 2> moves() const { return moves_; }

  // Jumps to a configuration reached earlier with agents in matching states.
  void restore(const Config& cfg, std::uint64_t round) {
    cfg_ = cfg;
    round_ = round;
  }

 private:
  const Tree& tree_;
  std::array<AgentProgram*, 2> agents_;
  Config cfg_;
  std::array<std::uint64_t, 2> start_round_{};
  std::uint64_t round_ = 0;
  std::array<bool, 2> moved_{};
  std::array<std::uint64_t, 2> idle_{};
  std::array<std::uint64_t, 2> moves_{};
  bool crossed_ = false;
};

void check_scenario(const Scenario& sc) {
  if (!sc.tree) throw InvalidInput("scenario has no tree");
  const NodeId n = sc.tree->size();
  if (sc.start_a < 0 || sc.start_a >= n || sc.start_b < 0 || sc.start_b >= n) {
    throw InvalidInput("start node out of range");
  }
  if (sc.start_a == sc.start_b) throw InvalidInput("start nodes must differ");
}

void fill_reports(RunResult& r, const Engine& e, std::array<AgentProgram*, 2> agents) {
  for (int k = 0; k < 2; ++k) {
    r.agents[k].bits = agents[k]->meter().bits();
    r.agents[k].counters = agents[k]->meter().readings();
    r.agents[k].idle_rounds = e.idle()[k];
    r.agents[k].moves = e.moves()[k];
  }
  r.rounds = e.round();
}

RunResult run_bounded(const Scenario& sc, std::array<AgentProgram*, 2> agents) {
  const std::uint64_t horizon = *sc.horizon.rounds;
  RunResult r;
  Engine e(sc, agents);
  if (sc.record_trace) r.trace.push_back(e.record());
  std::optional<Met> first;
  while (e.round() < horizon) {
    const bool together = e.step();
    if (sc.record_trace) r.trace.push_back(e.record());
    if (e.crossed()) r.crossings.push_back(e.round());
    if (together && !first) {
      first = Met{e.round(), e.config().pos[0]};
      if (sc.stop_at_meeting) break;
    }
  }
  r.outcome = first ? Outcome{*first} : Outcome{Timeout{horizon}};
  fill_reports(r, e, agents);
  return r;
}

}  // namespace

RunResult run(const Scenario& scenario, AgentProgram& a, AgentProgram& b) {
  check_scenario(scenario);
  if (!scenario.horizon.bounded()) {
    throw Refused("caller-owned agents need a bounded horizon");
  }
  a.bind_environment(*scenario.tree, scenario.start_a);
  b.bind_environment(*scenario.tree, scenario.start_b);
  return run_bounded(scenario, {&a, &b});
}

RunResult run(const Scenario& scenario, const AgentFactory& factory) {
  check_scenario(scenario);
  auto a = factory();
  auto b = factory();
  a->bind_environment(*scenario.tree, scenario.start_a);
  b->bind_environment(*scenario.tree, scenario.start_b);
  if (scenario.horizon.bounded()) return run_bounded(scenario, {a.get(), b.get()});

  if (!a->state_key() || !a->clone()) {
    throw Refused("unbounded horizon needs finite-state agents; give a round horizon");
  }
  RunResult r;
  std::array<AgentProgram*, 2> agents{a.get(), b.get()};
  Engine e(scenario, agents);
  if (scenario.record_trace) r.trace.push_back(e.record());
  const auto advance = [&]() -> bool {
    const bool together = e.step();
    if (scenario.record_trace) r.trace.push_back(e.record());
    if (e.crossed()) r.crossings.push_back(e.round());
    if (together) {
      r.outcome = Met{e.round(), e.config().pos[0]};
      fill_reports(r, e, agents);
      return true;
    }
    return false;
  };
  while (!e.both_started()) {
    if (advance()) return r;
  }

  // Brent's cycle search on configurations. The hare passes every
  // configuration of the tail and of one full cycle, so a meeting, if any,
  // is found by the loop.
  const std::uint64_t origin_round = e.round();
  const Config origin = e.config();
  std::array<std::unique_ptr<AgentProgram>, 2> origin_agents{a->clone(), b->clone()};
  Config tortoise = origin;
  std::uint64_t power = 1;
  std::uint64_t lambda = 1;
  if (advance()) return r;
  while (!(e.config() == tortoise)) {
    if (power == lambda) {
      tortoise = e.config();
      power *= 2;
      lambda = 0;
    }
    if (advance()) return r;
    ++lambda;
  }

  // Tail length: two replays from the origin, lambda rounds apart.
  Scenario replay = scenario;
  replay.record_trace = false;
  std::array<std::unique_ptr<AgentProgram>, 2> s1{origin_agents[0]->clone(), origin_agents[1]->clone()};
  std::array<std::unique_ptr<AgentProgram>, 2> s2{origin_agents[0]->clone(), origin_agents[1]->clone()};
  Engine e1(replay, {s1[0].get(), s1[1].get()});
  Engine e2(replay, {s2[0].get(), s2[1].get()});
  e1.restore(origin, origin_round);
  e2.restore(origin, origin_round);
  for (std::uint64_t k = 0; k < lambda; ++k) e2.step();
  std::uint64_t mu = 0;
  while (!(e1.config() == e2.config())) {
    e1.step();
    e2.step();
    ++mu;
  }
  r.outcome = CertifiedNeverMeet{origin_round + mu, lambda};
  fill_reports(r, e, agents);
  return r;
}

bool verify_certificate(const Scenario& scenario, const AgentFactory& factory,
                        const CertifiedNeverMeet& cert) {
  check_scenario(scenario);
  auto a = factory();
  auto b = factory();
  a->bind_environment(*scenario.tree, scenario.start_a);
  b->bind_environment(*scenario.tree, scenario.start_b);
  if (!a->state_key()) return false;
  Engine e(scenario, {a.get(), b.get()});
  while (e.round() < cert.cycle_start) {
    if (e.step()) return false;
  }
  if (!e.both_started() || cert.cycle_length == 0) return false;
  const Config opening = e.config();
  for (std::uint64_t k = 0; k < cert.cycle_length; ++k) {
    if (e.step()) return false;
  }
  return e.config() == opening;
}

std::vector<std::uint64_t> idle_prefix(std::span<const TraceRecord> trace, int agent) {
  std::vector<std::uint64_t> out(trace.size(), 0);
  for (std::size_t r = 1; r < trace.size(); ++r) {
    const bool moved = agent == 0 ? trace[r].moved_a : trace[r].moved_b;
    out[r] = out[r - 1] + (moved ? 0 : 1);
  }
  return out;
}

bool check_parity_lemma(const TreeDistance& dist, std::span<const TraceRecord> trace,
                        std::size_t t) {
  if (trace.empty() || t >= trace.size()) throw InvalidInput("parity check outside the trace");
  const auto& first = trace[0];
  const int d0 = dist(first.pos_a, first.pos_b);
  if (d0 % 2 == 0) throw InvalidInput("parity lemma needs an odd initial distance");
  if (t > 0 && !(trace[1].started_a && trace[1].started_b)) {
    throw InvalidInput("parity lemma needs both agents active from the first round");
  }
  std::uint64_t q = 0;
  std::uint64_t q2 = 0;
  for (std::size_t r = 1; r <= t; ++r) {
    q += trace[r].moved_a ? 0 : 1;
    q2 += trace[r].moved_b ? 0 : 1;
  }
  const bool even_gap = (q > q2 ? q - q2 : q2 - q) % 2 == 0;
  const bool odd_now = dist(trace[t].pos_a, trace[t].pos_b) % 2 == 1;
  return !even_gap || odd_now;
}

LineProbe infinite_line_probe(const AgentAutomaton& a, std::size_t max_steps) {
  LineProbe probe;
  probe.steps.reserve(max_steps + 1);
  State s = a.initial();
  std::int64_t x = 0;
  probe.steps.push_back({x, s});
  std::map<std::pair<State, int>, std::size_t> seen;
  seen[{s, 0}] = 0;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    const int out = a.output(s);
    Observation obs{kNoPort, 2};
    if (out >= 0) {
      const int c = out % 2;
      x += c == probe_color(x) ? 1 : -1;
      obs.entry = c;
    }
    s = a.next(s, obs);
    probe.steps.push_back({x, s});
    if (!probe.mu) {
      const auto key = std::make_pair(s, probe_color(x));
      if (const auto it = seen.find(key); it != seen.end()) {
        probe.mu = it->second;
        probe.period = k - it->second;
        probe.drift = x - probe.steps[it->second].position;
      } else {
        seen.emplace(key, k);
      }
    }
  }
  probe.partial = !probe.mu.has_value();
  return probe;
}

ScenarioFile parse_scenario(std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (word != "scenario") throw ParseError(where + "expected 'scenario'");
    ScenarioFile s;
    if (!(ls >> s.tree_path)) throw ParseError(where + "missing tree file");
    bool have_a = false;
    bool have_b = false;
    for (std::string kv; ls >> kv;) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError(where + "expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      const auto number = [&]() -> std::uint64_t {
        try {
          std::size_t used = 0;
          const unsigned long long v = std::stoull(val, &used);
          if (used != val.size() || val.front() == '-') throw std::invalid_argument(val);
          return v;
        } catch (const std::logic_error&) {
          throw ParseError(where + "bad value for " + key + ": '" + val + "'");
        }
      };
      if (key == "a") {
        s.a = static_cast<NodeId>(number());
        have_a = true;
      } else if (key == "b") {
        s.b = static_cast<NodeId>(number());
        have_b = true;
      } else if (key == "delay") {
        s.delay = number();
      } else if (key == "horizon") {
        if (val == "auto") s.horizon.reset();
        else s.horizon = number();
      } else if (key == "delayed") {
        if (val == "a") s.delayed = DelayedAgent::A;
        else if (val == "b") s.delayed = DelayedAgent::B;
        else throw ParseError(where + "delayed must be a or b");
      } else {
        throw ParseError(where + "unknown key '" + key + "'");
      }
    }
    if (!have_a || !have_b) throw ParseError(where + "scenario needs a= and b=");
    return s;
  }
  throw ParseError("no 'scenario' line");
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const ScenarioFile& s) {
  out << "scenario " << s.tree_path << " a=" << s.a << " b=" << s.b << " delay=" << s.delay
      << " horizon=" << (s.horizon ? std::to_string(*s.horizon) : std::string("auto"));
  if (s.delay > 0 || s.delayed == DelayedAgent::A) {
    out << " delayed=" << (s.delayed == DelayedAgent::A ? 'a' : 'b');
  }
  out << '\n';
}

Scenario materialize(const ScenarioFile& file, const std::string& scenario_path,
                     Horizon auto_horizon) {
  namespace fs = std::filesystem;
  fs::path tree_path(file.tree_path);
  if (tree_path.is_relative()) tree_path = fs::path(scenario_path).parent_path() / tree_path;
  Scenario sc;
  sc.tree = std::make_shared<const Tree>(load_tree(tree_path.string()));
  sc.start_a = file.a;
  sc.start_b = file.b;
  sc.delay = file.delay;
  sc.delayed = file.delayed;
  sc.horizon = file.horizon ? Horizon::of(*file.horizon) : auto_horizon;
  check_scenario(sc);
  return sc;
}

void write_trace(std::ostream& out, std::span<const TraceRecord> trace) {
  for (const auto& r : trace) {
    out << r.round << ' ' << r.pos_a << ' ' << r.state_a << ' ' << r.pos_b << ' ' << r.state_b
        << '\n';
  }
}

}  // namespace rdv
