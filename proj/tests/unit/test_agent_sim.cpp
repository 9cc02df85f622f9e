#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rdv/agent.hpp"
#include "rdv/analysis.hpp"
#include "rdv/error.hpp"
#include "rdv/sim.hpp"
#include "rdv/tree.hpp"

using namespace rdv;

namespace {

std::shared_ptr<const AgentAutomaton> shared(AgentAutomaton a) {
  return std::make_shared<const AgentAutomaton>(std::move(a));
}

Scenario make_scenario(const Tree& t, NodeId a, NodeId b, std::uint64_t delay = 0,
                       Horizon h = Horizon::unbounded()) {
  Scenario s;
  s.tree = std::make_shared<const Tree>(t);
  s.start_a = a;
  s.start_b = b;
  s.delay = delay;
  s.horizon = h;
  return s;
}

// Two-state cycle whose moves both use port 0: on the probe line it
// bounces on one edge.
AgentAutomaton bouncing_pair() {
  return AgentAutomaton(2, 0, {0, 0},
                        {{0, AgentAutomaton::kAny, AgentAutomaton::kAny, 1},
                         {1, AgentAutomaton::kAny, AgentAutomaton::kAny, 0}});
}

}  // namespace

TEST_CASE("automaton basics") {
  AutomatonAgent stay(shared(stay_automaton()));
  CHECK(stay.begin(3).is_stay());
  for (int k = 0; k < 5; ++k) CHECK(stay.step({kNoPort, 3}).is_stay());

  AutomatonAgent walker(shared(basic_walk_automaton(3)));
  CHECK(walker.meter().bits() == 2);
  CHECK(state_bits(1) == 0);
  CHECK(state_bits(2) == 1);
  CHECK(state_bits(5) == 3);
}

TEST_CASE("basic-walk automaton reproduces the tree walk") {
  std::mt19937_64 rng(21);
  const auto bw = shared(basic_walk_automaton(8));
  for (int k = 0; k < 100; ++k) {
    Tree t;
    do {
      t = oracle::random_tree(std::uniform_int_distribution<NodeId>(2, 30)(rng), rng);
    } while (t.max_degree() > 8);
    AutomatonAgent agent(bw);
    BasicWalkProgram program;
    WalkPosition ref{0, kNoPort};
    NodeId at = 0, at2 = 0;
    Action act = agent.begin(t.degree(0));
    Action act2 = program.begin(t.degree(0));
    for (int step = 0; step < 3 * t.size(); ++step) {
      ref = basic_walk_step(t, ref);
      const Port p = act.port() % t.degree(at);
      const Port p2 = act2.port() % t.degree(at2);
      const WalkPosition mine = depart(t, at, p);
      const WalkPosition mine2 = depart(t, at2, p2);
      CHECK(mine == ref);
      CHECK(mine2 == ref);
      at = mine.node;
      at2 = mine2.node;
      act = agent.step({mine.entry, t.degree(at)});
      act2 = program.step({mine2.entry, t.degree(at2)});
    }
  }
}

TEST_CASE("identical agents act identically") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 20; ++k) {
    const auto a = shared(random_automaton(6, 4, rng));
    AutomatonAgent x(a), y(a);
    CHECK(x.begin(3) == y.begin(3));
    for (int r = 0; r < 50; ++r) {
      const int d = std::uniform_int_distribution<int>(1, 4)(rng);
      const Observation obs{std::uniform_int_distribution<int>(-1, d - 1)(rng), d};
      CHECK(x.step(obs) == y.step(obs));
      CHECK(x.state() == y.state());
    }
    CHECK(x.meter().bits() == y.meter().bits());
  }
}

TEST_CASE("colored-line reduction") {
  const auto one = reduce_for_colored_line(constant_port_automaton(0));
  CHECK(one.next == std::vector<State>{0});
  const auto alt = reduce_for_colored_line(alternator_automaton());
  CHECK(alt.next == std::vector<State>{1, 0});
}

TEST_CASE("colored-line reduction matches a full line simulation") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_automaton(8, 2, rng, 0.0);
    const auto red = reduce_for_colored_line(a);
    // Long alternating line, agent in the middle; compare while away from
    // the endpoints.
    const NodeId edges = 400;
    const Tree line = make_alternating_line(edges, 0);
    AutomatonAgent agent(shared(a));
    NodeId at = edges / 2;
    State expect = a.initial();
    Action act = agent.begin(line.degree(at));
    for (int r = 0; r < 150; ++r) {
      CHECK(agent.state() == expect);
      Observation obs{kNoPort, line.degree(at)};
      if (!act.is_stay()) {
        const WalkPosition w = depart(line, at, act.port() % line.degree(at));
        at = w.node;
        obs = {w.entry, line.degree(at)};
      }
      REQUIRE(line.degree(at) == 2);
      expect = red.next[expect];
      act = agent.step(obs);
    }
  }
}

TEST_CASE("automaton files") {
  const AgentAutomaton bw = basic_walk_automaton(3);
  std::ostringstream out;
  write_automaton(out, bw);
  std::istringstream in(out.str());
  CHECK(parse_automaton(in) == bw);

  std::mt19937_64 rng(24);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_automaton(1 + k, 5, rng);
    std::ostringstream o;
    write_automaton(o, a);
    std::istringstream i(o.str());
    CHECK(parse_automaton(i) == a);
  }

  std::istringstream bad("states 2\ninitial 0\nout 0 0\nout 1 -7\ntrans * * * 0\n");
  try {
    parse_automaton(bad);
    FAIL("bad output accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("state 1") != std::string::npos);
  }
  std::istringstream partial("states 2\ninitial 0\nout 0 0\nout 1 0\ntrans 0 * * 1\n");
  CHECK_THROWS_AS(parse_automaton(partial), InvalidInput);
}

TEST_CASE("shipped basic-walk file") {
  const AgentAutomaton a = load_automaton(RDV_DATA_DIR "/agents/basic_walk.aut");
  CHECK(a.size() == 4);
  CHECK(a == basic_walk_automaton(3));
}

TEST_CASE("memory meter") {
  MemoryMeter m;
  const auto h = m.declare("x");
  m.observe(h, 5);
  CHECK(m.bits() == 3);
  m.observe(h, 2);
  CHECK(m.bits() == 3);
  m.observe(h, 8);
  CHECK(m.bits() == 4);
  m.charge(m.declare("y"), 2);
  CHECK(m.bits() == 6);
}

TEST_CASE("run examples") {
  const auto mover = automaton_factory(shared(constant_port_automaton(0)));
  const RunResult swap = run(make_scenario(make_path(2), 0, 1), mover);
  REQUIRE(swap.certificate() != nullptr);
  CHECK(swap.certificate()->cycle_length == 2);
  CHECK_FALSE(swap.crossings.empty());

  // Leaves of the 3-node path both step to the centre in round 1.
  const Tree p3 = make_path(3);
  const auto bw = automaton_factory(shared(basic_walk_automaton(2)));
  const RunResult met = run(make_scenario(p3, 0, 2), bw);
  REQUIRE(met.meeting() != nullptr);
  CHECK(met.meeting()->round == 1);
  CHECK(met.meeting()->node == 1);

  CHECK_THROWS_AS(run(make_scenario(p3, 1, 1), bw), InvalidInput);
}

TEST_CASE("meetings and certificates are consistent") {
  std::mt19937_64 rng(25);
  for (int k = 0; k < 200; ++k) {
    const Tree t = oracle::random_tree(std::uniform_int_distribution<NodeId>(2, 15)(rng), rng);
    const auto a = shared(random_automaton(std::uniform_int_distribution<State>(1, 6)(rng),
                                           std::max(1, t.max_degree()), rng));
    const NodeId x = std::uniform_int_distribution<NodeId>(0, t.size() - 1)(rng);
    NodeId y = x;
    while (y == x) y = std::uniform_int_distribution<NodeId>(0, t.size() - 1)(rng);
    Scenario sc = make_scenario(t, x, y, std::uniform_int_distribution<int>(0, 5)(rng));
    sc.delayed = k % 2 ? DelayedAgent::A : DelayedAgent::B;
    sc.record_trace = true;
    const RunResult r = run(sc, automaton_factory(a));
    if (const Met* m = r.meeting()) {
      const TraceRecord& last = r.trace.back();
      CHECK(last.round == m->round);
      CHECK(last.pos_a == m->node);
      CHECK(last.pos_b == m->node);
      for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) CHECK(r.trace[i].pos_a != r.trace[i].pos_b);
    } else {
      const CertifiedNeverMeet* c = r.certificate();
      REQUIRE(c != nullptr);
      CHECK(verify_certificate(sc, automaton_factory(a), *c));
    }
    // Swapping the agents mirrors the outcome.
    Scenario sw = sc;
    std::swap(sw.start_a, sw.start_b);
    sw.delayed = sc.delayed == DelayedAgent::A ? DelayedAgent::B : DelayedAgent::A;
    sw.record_trace = false;
    const RunResult r2 = run(sw, automaton_factory(a));
    CHECK(r.met() == r2.met());
    if (r.met()) CHECK(*r.meeting() == *r2.meeting());
    if (r.certificate()) CHECK(r.certificate()->cycle_length == r2.certificate()->cycle_length);
  }
}

TEST_CASE("unbounded runs need finite-state agents") {
  const auto program = [] { return std::make_unique<BasicWalkProgram>(); };
  CHECK_THROWS_AS(run(make_scenario(make_path(3), 0, 2), program), Refused);
  const RunResult r = run(make_scenario(make_path(3), 0, 2, 0, Horizon::of(10)), program);
  CHECK((r.met() || std::holds_alternative<Timeout>(r.outcome)));
}

TEST_CASE("parity lemma examples") {
  // Both agents always move from adjacent starts: the distance stays odd.
  Scenario sc = make_scenario(make_path(6), 2, 3, 0, Horizon::of(30));
  sc.record_trace = true;
  sc.stop_at_meeting = false;
  const RunResult r = run(sc, automaton_factory(shared(constant_port_automaton(0))));
  const TreeDistance d(*sc.tree);
  for (std::size_t t = 0; t < r.trace.size(); ++t) {
    CHECK(check_parity_lemma(d, r.trace, t));
    CHECK(d(r.trace[t].pos_a, r.trace[t].pos_b) % 2 == 1);
  }

  // A idles twice more than B: the idle difference is even, so the distance is odd.
  std::vector<TraceRecord> tr{{0, 0, -1, 1, -1, false, false, true, true},
                              {1, 0, -1, 2, -1, false, true, true, true},
                              {2, 0, -1, 3, -1, false, true, true, true},
                              {3, 1, -1, 4, -1, true, true, true, true}};
  const TreeDistance d6(make_path(6));
  CHECK(check_parity_lemma(d6, tr, 3));
  const auto q = idle_prefix(tr, 0);
  CHECK(q.back() == 2);
  CHECK(idle_prefix(tr, 1).back() == 0);

  std::vector<TraceRecord> even{{0, 0, -1, 2, -1, false, false, true, true}};
  CHECK_THROWS_AS(check_parity_lemma(d6, even, 0), InvalidInput);
}

TEST_CASE("parity lemma on random traces") {
  std::mt19937_64 rng(26);
  int checked = 0;
  while (checked < 200) {
    const Tree t = oracle::random_tree(std::uniform_int_distribution<NodeId>(2, 25)(rng), rng);
    const TreeDistance d(t);
    const NodeId x = std::uniform_int_distribution<NodeId>(0, t.size() - 1)(rng);
    const NodeId y = std::uniform_int_distribution<NodeId>(0, t.size() - 1)(rng);
    if (d(x, y) % 2 == 0) continue;
    Scenario sc = make_scenario(t, x, y, 0, Horizon::of(200));
    sc.record_trace = true;
    sc.stop_at_meeting = false;
    const auto a = shared(random_automaton(5, std::max(1, t.max_degree()), rng, 0.3));
    const RunResult r = run(sc, automaton_factory(a));
    for (std::size_t k = 0; k < r.trace.size(); ++k) CHECK(check_parity_lemma(d, r.trace, k));
    ++checked;
  }
}

TEST_CASE("infinite line probe") {
  const LineProbe zero = infinite_line_probe(constant_port_automaton(0), 20);
  for (std::size_t k = 0; k < zero.steps.size(); ++k) CHECK(zero.steps[k].position == static_cast<std::int64_t>(k % 2));
  CHECK(zero.drift == 0);

  const LineProbe right = infinite_line_probe(alternator_automaton(), 20);
  for (std::size_t k = 0; k < right.steps.size(); ++k) CHECK(right.steps[k].position == static_cast<std::int64_t>(k));
  REQUIRE(right.mu.has_value());
  CHECK(right.drift == static_cast<std::int64_t>(right.period));

  const LineProbe bounce = infinite_line_probe(bouncing_pair(), 20);
  CHECK(bounce.drift == 0);

  std::mt19937_64 rng(27);
  for (int k = 0; k < 50; ++k) {
    const State K = std::uniform_int_distribution<State>(1, 8)(rng);
    const auto a = random_automaton(K, 2, rng);
    const LineProbe p = infinite_line_probe(a, 10000);
    // Any K+1 distinct visited nodes hold two that share a leaving state.
    std::map<std::int64_t, std::set<State>> at;
    for (const auto& s : p.steps) at[s.position].insert(s.state);
    if (at.size() < static_cast<std::size_t>(K) + 1) continue;
    std::vector<std::int64_t> xs;
    for (const auto& [x, _] : at) xs.push_back(x);
    for (std::size_t i = 0; i + K < xs.size(); ++i) {
      std::set<State> seen;
      bool shared_state = false;
      for (std::size_t j = i; j <= i + K; ++j) {
        for (State s : at[xs[j]]) shared_state |= !seen.insert(s).second;
      }
      CHECK(shared_state);
    }
  }
}

TEST_CASE("scenario files") {
  std::istringstream in("scenario ../trees/path4.tree a=0 b=3 delay=2 horizon=auto delayed=a\n");
  const ScenarioFile f = parse_scenario(in);
  CHECK(f.a == 0);
  CHECK(f.b == 3);
  CHECK(f.delay == 2);
  CHECK(f.delayed == DelayedAgent::A);
  CHECK_FALSE(f.horizon.has_value());
  std::ostringstream out;
  write_scenario(out, f);
  std::istringstream back(out.str());
  const ScenarioFile g = parse_scenario(back);
  CHECK(g.tree_path == f.tree_path);
  CHECK(g.delay == f.delay);
  const Scenario s = materialize(load_scenario_file(RDV_DATA_DIR "/scenarios/path4_ends.scenario"),
                                 RDV_DATA_DIR "/scenarios/path4_ends.scenario", Horizon::of(9));
  CHECK(s.tree->size() == 4);
  CHECK(s.horizon.rounds == std::optional<std::uint64_t>(9));
}
