#include "rdv/forge.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "rdv/analysis.hpp"

namespace rdv {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// The probe grows until it holds at least `steps` rounds.
LineProbe probe_at_least(const AgentAutomaton& a, std::size_t steps) {
  return infinite_line_probe(a, std::max<std::size_t>(steps, 4 * static_cast<std::size_t>(a.size()) + 8));
}

void add(ForgeInstance& inst, const std::string& key, std::int64_t value) {
  inst.provenance.emplace_back(key, std::to_string(value));
}

// Runs the instance to a certificate and checks the starts.
void certify(ForgeInstance& inst) {
  if (perfectly_symmetrizable(*inst.tree, inst.start_a, inst.start_b)) {
    throw VerificationFailure(to_string(inst.kind) + ": forged starts are perfectly symmetrizable");
  }
  const RunResult r = run(inst.scenario(), automaton_factory(inst.agent));
  if (const Met* met = r.meeting()) {
    throw VerificationFailure(to_string(inst.kind) + ": forged agents met at round " +
                              std::to_string(met->round) + ", node " + std::to_string(met->node));
  }
  const CertifiedNeverMeet* cert = r.certificate();
  if (!cert) throw VerificationFailure(to_string(inst.kind) + ": no certificate produced");
  inst.certificate = *cert;
  if (!verify_certificate(inst.scenario(), automaton_factory(inst.agent), inst.certificate)) {
    throw VerificationFailure(to_string(inst.kind) + ": certificate does not replay");
  }
}

std::uint64_t saturating_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 0; k < e; ++k) {
    if (r > UINT64_MAX / b) return UINT64_MAX;
    r *= b;
  }
  return r;
}

}  // namespace

std::string to_string(ForgeKind k) {
  switch (k) {
    case ForgeKind::Theorem1Line: return "theorem1";
    case ForgeKind::Theorem3Line: return "theorem3";
    case ForgeKind::Theorem4TwoSidedTree: return "theorem4";
  }
  return "?";
}

DigraphAnalysis analyze_digraph(const AgentAutomaton& a) {
  DigraphAnalysis d;
  const State k = a.size();
  d.reduced = reduce_for_colored_line(a).next;
  d.circuit_of.assign(k, -1);
  d.on_circuit.assign(k, false);
  // 0 = unseen, 1 = on the current path, 2 = resolved.
  std::vector<int> mark(k, 0);
  for (State s = 0; s < k; ++s) {
    if (mark[s]) continue;
    std::vector<State> path;
    State x = s;
    while (mark[x] == 0) {
      mark[x] = 1;
      path.push_back(x);
      x = d.reduced[x];
    }
    int circuit = d.circuit_of[x];
    if (mark[x] == 1) {
      circuit = static_cast<int>(d.circuits.size());
      std::vector<State> cyc;
      State y = x;
      do {
        cyc.push_back(y);
        d.on_circuit[y] = true;
        y = d.reduced[y];
      } while (y != x);
      d.circuits.push_back(std::move(cyc));
    }
    for (State p : path) {
      mark[p] = 2;
      d.circuit_of[p] = circuit;
    }
  }
  for (const auto& c : d.circuits) d.gamma = std::lcm(d.gamma, static_cast<std::uint64_t>(c.size()));

  const LineProbe probe = probe_at_least(a, 0);
  if (probe.mu && probe.drift == 0) {
    std::int64_t far = 0;
    for (std::size_t t = 0; t <= *probe.mu + probe.period; ++t) {
      far = std::max(far, std::abs(probe.steps[t].position));
    }
    d.range_bound = far;
  }
  return d;
}

Scenario ForgeInstance::scenario(Horizon h) const {
  Scenario sc;
  sc.tree = tree;
  sc.start_a = start_a;
  sc.start_b = start_b;
  sc.delay = delay;
  sc.delayed = delayed;
  sc.horizon = h;
  return sc;
}

std::int64_t ForgeInstance::param(const std::string& key) const {
  for (const auto& [k, v] : provenance) {
    if (k != key) continue;
    try {
      std::size_t used = 0;
      const long long x = std::stoll(v, &used);
      if (used == v.size()) return x;
    } catch (const std::logic_error&) {
    }
    throw InvalidInput("provenance '" + key + "' is not an integer: " + v);
  }
  throw InvalidInput("provenance has no '" + key + "'");
}

void verify_instance(const ForgeInstance& inst) {
  if (perfectly_symmetrizable(*inst.tree, inst.start_a, inst.start_b)) {
    throw VerificationFailure("instance starts are perfectly symmetrizable");
  }
  if (!verify_certificate(inst.scenario(), automaton_factory(inst.agent), inst.certificate)) {
    throw VerificationFailure("instance certificate does not replay");
  }
}

void write_instance(const std::string& dir, const ForgeInstance& inst) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  save_tree((base / "instance.tree").string(), *inst.tree);
  save_automaton((base / "agent.aut").string(), *inst.agent);
  {
    std::ofstream out(base / "instance.scenario");
    ScenarioFile sf;
    sf.tree_path = "instance.tree";
    sf.a = inst.start_a;
    sf.b = inst.start_b;
    sf.delay = inst.delay;
    sf.delayed = inst.delayed;
    write_scenario(out, sf);
  }
  {
    std::ofstream out(base / "provenance.txt");
    out << "kind=" << to_string(inst.kind) << '\n';
    for (const auto& [k, v] : inst.provenance) out << k << '=' << v << '\n';
  }
  {
    std::ofstream out(base / "certificate.txt");
    out << "cycle_start=" << inst.certificate.cycle_start << '\n';
    out << "cycle_length=" << inst.certificate.cycle_length << '\n';
  }
  if (!fs::exists(base / "certificate.txt")) throw Error("cannot write instance to " + dir);
}

ForgeInstance load_instance(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  ForgeInstance inst;
  const std::string scenario_path = (base / "instance.scenario").string();
  const ScenarioFile sf = load_scenario_file(scenario_path);
  inst.tree = std::make_shared<const Tree>(load_tree((base / sf.tree_path).string()));
  inst.start_a = sf.a;
  inst.start_b = sf.b;
  inst.delay = sf.delay;
  inst.delayed = sf.delayed;
  inst.agent = std::make_shared<const AgentAutomaton>(load_automaton((base / "agent.aut").string()));

  const auto read_kv = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error("cannot read " + p.string());
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError(p.string() + ": line " + std::to_string(lineno) + ": expected key=value");
      }
      kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
  };
  bool have_kind = false;
  for (auto& [k, v] : read_kv(base / "provenance.txt")) {
    if (k == "kind") {
      have_kind = true;
      if (v == "theorem1") inst.kind = ForgeKind::Theorem1Line;
      else if (v == "theorem3") inst.kind = ForgeKind::Theorem3Line;
      else if (v == "theorem4") inst.kind = ForgeKind::Theorem4TwoSidedTree;
      else throw ParseError("unknown instance kind '" + v + "'");
    } else {
      inst.provenance.emplace_back(k, v);
    }
  }
  if (!have_kind) throw ParseError("provenance.txt lacks kind");
  for (const auto& [k, v] : read_kv(base / "certificate.txt")) {
    const std::uint64_t x = std::stoull(v);
    if (k == "cycle_start") inst.certificate.cycle_start = x;
    else if (k == "cycle_length") inst.certificate.cycle_length = x;
  }
  return inst;
}

// ---------------------------------------------------------------------------

ForgeInstance forge_theorem1(const AgentAutomaton& a) {
  const std::int64_t K = a.size();
  const std::int64_t N = 8 * (K + 1) + 1;  // edges
  const std::int64_t M = 4 * (K + 1);      // central edge {M, M+1}
  std::vector<int> colors(N);
  for (std::int64_t k = 0; k < N; ++k) colors[k] = static_cast<int>(floor_mod(k - M, 2));

  ForgeInstance inst;
  inst.kind = ForgeKind::Theorem1Line;
  inst.agent = std::make_shared<const AgentAutomaton>(a);
  inst.tree = std::make_shared<const Tree>(make_colored_line(colors));
  add(inst, "states", K);
  add(inst, "line_edges", N);
  add(inst, "central_left", M);

  // A state held at two distinct nodes: t2 is the earliest round closing
  // such a pair, t1 the earliest partner. Both appear within one period of
  // the (state, parity) recurrence, which the probe covers.
  const LineProbe probe = probe_at_least(a, 0);
  const auto& st = probe.steps;
  std::optional<std::size_t> t1;
  std::optional<std::size_t> t2;
  for (std::size_t j = 1; j < st.size() && !t2; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (st[i].state == st[j].state && st[i].position != st[j].position) {
        t1 = i;
        t2 = j;
        break;
      }
    }
  }

  if (!t2) {
    // Every state is held at one node only, so each agent stays within K
    // nodes of its start.
    inst.start_a = static_cast<NodeId>(K + 1);
    inst.start_b = static_cast<NodeId>(7 * K + 7);
    inst.delay = 0;
    inst.provenance.emplace_back("branch", "bounded");
    add(inst, "sync_round", 0);
    certify(inst);
    return inst;
  }

  const std::int64_t x1 = st[*t1].position;
  const std::int64_t x2 = st[*t2].position;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (std::size_t k = 0; k <= *t2; ++k) {
    lo = std::min(lo, st[k].position);
    hi = std::max(hi, st[k].position);
  }
  // Frame of the undelayed copy: translation keeping colors (shift = M mod 2),
  // x1 near the middle of the left half.
  std::int64_t shift = 2 * K + 2 - x1;
  if (floor_mod(shift - M, 2) != 0) ++shift;
  const std::int64_t fx1 = x1 + shift;
  const std::int64_t y1 = N - fx1;
  const std::int64_t d = x2 - x1;
  // Frame of the other copy, carrying x2 onto y1.
  std::int64_t v = 0;
  std::int64_t glo = 0;
  std::int64_t ghi = 0;
  if (floor_mod(d, 2) == 1) {
    const std::int64_t s2 = y1 - x2;
    if (floor_mod(s2 - M, 2) != 0) throw VerificationFailure("theorem1: translation parity");
    v = s2;
    glo = lo + s2;
    ghi = hi + s2;
  } else {
    const std::int64_t r = y1 + x2;
    if (floor_mod(r - M - 1, 2) != 0) throw VerificationFailure("theorem1: reflection parity");
    v = r;
    glo = r - hi;
    ghi = r - lo;
  }
  if (lo + shift < 1 || hi + shift > M || glo < M + 1 || ghi > N - 1) {
    throw VerificationFailure("theorem1: trajectories do not fit their halves");
  }
  // The copy started at u runs T1 rounds to (x1, s); the one at v runs T2
  // rounds to (y1, s). Delaying u's agent aligns them.
  inst.start_a = static_cast<NodeId>(shift);
  inst.start_b = static_cast<NodeId>(v);
  inst.delay = *t2 - *t1;
  inst.delayed = DelayedAgent::A;
  inst.provenance.emplace_back("branch", "mirror");
  add(inst, "x1", x1);
  add(inst, "x2", x2);
  add(inst, "delta", std::abs(x1));
  add(inst, "d", std::abs(d));
  add(inst, "t1", static_cast<std::int64_t>(*t1));
  add(inst, "t2", static_cast<std::int64_t>(*t2));
  add(inst, "s", st[*t1].state);
  add(inst, "u", shift);
  add(inst, "v", v);
  add(inst, "y1", y1);
  add(inst, "sync_round", static_cast<std::int64_t>(*t2));
  certify(inst);
  return inst;
}

bool theorem1_sides_hold(const ForgeInstance& inst, std::span<const TraceRecord> trace) {
  const std::int64_t m = inst.param("central_left");
  const std::uint64_t t = static_cast<std::uint64_t>(inst.param("sync_round"));
  for (const TraceRecord& r : trace) {
    if (r.round > t) break;
    if (r.pos_a > m || r.pos_b < m + 1) return false;
  }
  return true;
}

ForgeInstance forge_theorem3(const AgentAutomaton& a) {
  const DigraphAnalysis dg = analyze_digraph(a);
  const std::int64_t S = a.size();
  ForgeInstance inst;
  inst.kind = ForgeKind::Theorem3Line;
  inst.agent = std::make_shared<const AgentAutomaton>(a);
  add(inst, "states", S);
  add(inst, "gamma", static_cast<std::int64_t>(dg.gamma));

  if (dg.range_bound) {
    const std::int64_t D = *dg.range_bound;
    inst.tree = std::make_shared<const Tree>(make_alternating_line(static_cast<NodeId>(4 * D + 4), 0));
    inst.start_a = static_cast<NodeId>(D + 1);
    inst.start_b = static_cast<NodeId>(3 * D + 2);
    inst.provenance.emplace_back("branch", "bounded");
    add(inst, "D", D);
    add(inst, "line_edges", 4 * D + 4);
    certify(inst);
    return inst;
  }

  const std::int64_t gamma = static_cast<std::int64_t>(dg.gamma);
  const std::int64_t target = 2 * gamma + S;
  LineProbe probe = probe_at_least(a, 0);
  const std::int64_t sigma = probe.drift > 0 ? 1 : -1;
  // t0: first round >= |S| at distance >= 2 gamma + |S|, on the drift side.
  std::size_t t0 = 0;
  for (std::size_t want = 64;; want *= 2) {
    probe = probe_at_least(a, want);
    bool found = false;
    for (std::size_t t = static_cast<std::size_t>(S); t < probe.steps.size(); ++t) {
      if (sigma * probe.steps[t].position >= target) {
        t0 = t;
        found = true;
        break;
      }
    }
    if (found && t0 + static_cast<std::size_t>(S + 2 * gamma) + 1 < probe.steps.size()) break;
    if (want > (std::size_t{1} << 30)) throw VerificationFailure("theorem3: drift never reaches target");
  }
  const auto& st = probe.steps;
  const State si = st[t0].state;
  if (!dg.on_circuit[si]) throw VerificationFailure("theorem3: state at t0 is not on a circuit");
  const std::size_t clen = dg.circuits[dg.circuit_of[si]].size();
  // Extreme position of the circuit run from t0: first round of the
  // farthest advance in the drift direction.
  std::size_t tau = t0;
  for (std::size_t j = 0; j <= clen; ++j) {
    if (sigma * st[t0 + j].position > sigma * st[tau].position) tau = t0 + j;
  }
  const std::int64_t x = sigma * st[tau].position;
  const std::size_t tau2 = tau + 2 * static_cast<std::size_t>(gamma);
  const std::int64_t x2 = sigma * st[tau2].position;
  if (x2 <= x) throw VerificationFailure("theorem3: x' does not exceed x");

  // Line of x + x' + 1 edges; A starts at x and heads for node 0, A' at x+1.
  const std::int64_t N = x + x2 + 1;
  std::vector<int> colors(N);
  for (std::int64_t k = 0; k < N; ++k) {
    const std::int64_t q1 = sigma * (x - k);
    const std::int64_t q2 = sigma * (x - k - 1);
    colors[k] = probe_color(std::min(q1, q2));
  }
  inst.tree = std::make_shared<const Tree>(make_colored_line(colors));
  inst.start_a = static_cast<NodeId>(x);
  inst.start_b = static_cast<NodeId>(x + 1);
  const std::uint64_t envelope = saturating_pow(static_cast<std::uint64_t>(S), static_cast<std::uint64_t>(S));
  if (envelope < UINT64_MAX / 8 &&
      static_cast<std::uint64_t>(N) > 6 * envelope + 8 * static_cast<std::uint64_t>(S) + 4) {
    throw VerificationFailure("theorem3: line exceeds its size envelope");
  }
  inst.provenance.emplace_back("branch", "drift");
  add(inst, "t0", static_cast<std::int64_t>(t0));
  add(inst, "circuit_length", static_cast<std::int64_t>(clen));
  add(inst, "extreme", st[tau].position);
  add(inst, "tau", static_cast<std::int64_t>(tau));
  add(inst, "tau_prime", static_cast<std::int64_t>(tau2));
  add(inst, "x", x);
  add(inst, "x_prime", x2);
  add(inst, "line_edges", N);
  certify(inst);
  return inst;
}

std::optional<std::int64_t> theorem3_min_bouncing_distance(const ForgeInstance& inst,
                                                           std::span<const TraceRecord> trace) {
  const NodeId end = static_cast<NodeId>(inst.param("line_edges"));
  std::vector<bool> bouncing(trace.size(), false);
  for (int agent = 0; agent < 2; ++agent) {
    // Runs of consecutive hits at one extremity.
    std::optional<std::size_t> run_first;
    std::optional<std::size_t> run_last;
    NodeId run_end = -1;
    const auto close = [&] {
      if (run_first) {
        for (std::size_t k = *run_first; k <= *run_last; ++k) bouncing[k] = true;
      }
    };
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const NodeId p = agent == 0 ? trace[k].pos_a : trace[k].pos_b;
      if (p != 0 && p != end) continue;
      if (run_first && p == run_end) {
        run_last = k;
      } else {
        close();
        run_first = k;
        run_last = k;
        run_end = p;
      }
    }
    close();
  }
  std::optional<std::int64_t> best;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (!bouncing[k]) continue;
    const std::int64_t dist = std::abs(static_cast<std::int64_t>(trace[k].pos_a) - trace[k].pos_b);
    best = best ? std::min(*best, dist) : dist;
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

// Appends a side tree hanging from `anchor`; returns the root id.
NodeId append_side_tree(std::vector<std::vector<NodeId>>& by_port, int i, std::uint64_t mask,
                        NodeId anchor) {
  const auto fresh = [&] {
    by_port.emplace_back();
    return static_cast<NodeId>(by_port.size() - 1);
  };
  const NodeId root = fresh();
  std::vector<NodeId> spine{root};
  for (int k = 1; k <= i; ++k) spine.push_back(fresh());
  by_port[root] = {anchor, spine[1]};
  for (int k = 1; k < i; ++k) {
    const NodeId attach = fresh();
    by_port[spine[k]] = {spine[k - 1], spine[k + 1], attach};
    if ((mask >> (k - 1)) & 1U) {
      const NodeId tip = fresh();
      by_port[attach] = {spine[k], tip};
      by_port[tip] = {attach};
    } else {
      by_port[attach] = {spine[k]};
    }
  }
  by_port[spine[i]] = {spine[i - 1]};
  return root;
}

void check_side_params(int i, std::uint64_t mask) {
  if (i < 2 || i > 62) throw InvalidInput("side tree size i must be in [2, 62]");
  if (mask >> (i - 1)) throw InvalidInput("side tree mask has bits beyond i - 1");
}

std::string behavior_key(const BehaviorFunction& f) {
  std::string key;
  for (const auto& e : f.q) {
    key += e.divergent ? "d" : std::to_string(e.next) + ":" + std::to_string(e.duration);
    key += ',';
  }
  return key;
}

}  // namespace

TwoSidedTree two_sided_tree(int i, std::uint64_t mask1, std::uint64_t mask2, int m) {
  check_side_params(i, mask1);
  check_side_params(i, mask2);
  if (m < 2 || m % 2 != 0) throw InvalidInput("joining path needs an even m >= 2");
  std::vector<std::vector<NodeId>> by_port(m);
  TwoSidedTree out;
  out.u = 0;
  out.v = static_cast<NodeId>(m - 1);
  out.root1 = append_side_tree(by_port, i, mask1, out.u);
  out.root2 = append_side_tree(by_port, i, mask2, out.v);
  // Path edges: root1-p0, p0-p1, ..., p(m-1)-root2; edge k has color
  // (k - m/2) mod 2 so the central edge carries 0 at both ends.
  const auto color = [m](int k) { return static_cast<int>(floor_mod(k - m / 2, 2)); };
  for (int j = 0; j < m; ++j) {
    by_port[j].assign(2, -1);
    const NodeId left = j == 0 ? out.root1 : static_cast<NodeId>(j - 1);
    const NodeId right = j == m - 1 ? out.root2 : static_cast<NodeId>(j + 1);
    by_port[j][color(j)] = left;
    by_port[j][color(j + 1)] = right;
  }
  out.tree = Tree::from_ports(by_port);
  return out;
}

BehaviorFunction behavior_function(const AgentAutomaton& a, int i, std::uint64_t mask, int m) {
  check_side_params(i, mask);
  // Side tree alone, with node 0 standing in for the anchor.
  std::vector<std::vector<NodeId>> by_port(1);
  const NodeId root = append_side_tree(by_port, i, mask, 0);
  by_port[0] = {root};
  const Tree side = Tree::from_ports(by_port);
  const int entry_at_anchor = anchor_port(m);

  BehaviorFunction f;
  f.q.resize(a.size());
  const std::size_t nodes = static_cast<std::size_t>(side.size());
  std::vector<std::uint32_t> seen(nodes * a.size(), 0);
  std::uint32_t epoch = 0;
  for (State s = 0; s < a.size(); ++s) {
    ++epoch;
    // The tour starts with the move from the anchor into the root.
    NodeId at = root;
    State state = a.next(s, Observation{0, side.degree(root)});
    std::uint64_t rounds = 1;
    BehaviorFunction::Entry e;
    for (;;) {
      std::uint32_t& mark = seen[static_cast<std::size_t>(state) * nodes + at];
      if (mark == epoch) {
        e.divergent = true;
        break;
      }
      mark = epoch;
      const Action act = a.act(state, side.degree(at));
      ++rounds;
      if (act.is_stay()) {
        state = a.next(state, Observation{kNoPort, side.degree(at)});
        continue;
      }
      const NodeId nb = side.neighbor(at, act.port());
      if (nb == 0) {
        e.next = a.next(state, Observation{entry_at_anchor, 2});
        e.duration = rounds;
        f.max_duration = std::max(f.max_duration, rounds);
        break;
      }
      state = a.next(state, Observation{side.back_port(at, act.port()), side.degree(nb)});
      at = nb;
    }
    f.q[s] = e;
  }
  return f;
}

ForgeInstance forge_theorem4(const AgentAutomaton& a, int i, const Theorem4Options& options) {
  if (i < 2 || i > 62) throw InvalidInput("theorem4 needs 2 <= i <= 62");
  const std::uint64_t space = std::uint64_t{1} << (i - 1);
  std::unordered_map<std::string, std::uint64_t> by_key;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> pair;
  std::uint64_t examined = 0;
  const auto consider = [&](std::uint64_t mask) {
    ++examined;
    const auto [it, inserted] = by_key.emplace(behavior_key(behavior_function(a, i, mask, options.m)), mask);
    if (!inserted && it->second != mask) pair = std::make_pair(it->second, mask);
  };
  const bool exhaustive = i <= 20;
  if (exhaustive) {
    for (std::uint64_t mask = 0; mask < space && !pair && examined < options.budget; ++mask) consider(mask);
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, space - 1);
    while (!pair && examined < options.budget) consider(pick(rng));
  }
  if (!pair) {
    throw NoCollisionFound("no two side trees with equal behavior functions among " +
                               std::to_string(examined) + " examined",
                           examined);
  }

  const TwoSidedTree two = two_sided_tree(i, pair->first, pair->second, options.m);
  ForgeInstance inst;
  inst.kind = ForgeKind::Theorem4TwoSidedTree;
  inst.agent = std::make_shared<const AgentAutomaton>(a);
  inst.tree = std::make_shared<const Tree>(two.tree);
  inst.start_a = two.u;
  inst.start_b = two.v;
  if (inst.tree->leaf_count() != 2 * i || inst.tree->max_degree() != 3) {
    throw VerificationFailure("theorem4: emitted tree breaks the leaf or degree shape");
  }
  const BehaviorFunction f = behavior_function(a, i, pair->first, options.m);
  const std::uint64_t K = static_cast<std::uint64_t>(a.size());
  const std::uint64_t D = std::max<std::uint64_t>(f.max_duration, 1);
  add(inst, "states", static_cast<std::int64_t>(K));
  add(inst, "i", i);
  add(inst, "leaves", 2 * i);
  add(inst, "m", options.m);
  add(inst, "mask1", static_cast<std::int64_t>(pair->first));
  add(inst, "mask2", static_cast<std::int64_t>(pair->second));
  add(inst, "D", static_cast<std::int64_t>(f.max_duration));
  add(inst, "examined", static_cast<std::int64_t>(examined));
  inst.provenance.emplace_back("search", exhaustive ? "exhaustive" : "sampled");
  // Pigeonhole count F = (K D)^K, reported only.
  inst.provenance.emplace_back("F", std::to_string(saturating_pow(K * D, K)));
  inst.provenance.emplace_back("behavior", behavior_key(f));
  certify(inst);
  return inst;
}

}  // namespace rdv
