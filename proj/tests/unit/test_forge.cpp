#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rdv/analysis.hpp"
#include "rdv/forge.hpp"
#include "rdv/sim.hpp"

using namespace rdv;

namespace {

AgentAutomaton cycle_of_two(int out0, int out1) {
  return AgentAutomaton(2, 0, {out0, out1},
                        {{0, AgentAutomaton::kAny, AgentAutomaton::kAny, 1},
                         {1, AgentAutomaton::kAny, AgentAutomaton::kAny, 0}});
}

AgentAutomaton identity_three() {
  std::vector<AgentAutomaton::Rule> rules;
  for (State s = 0; s < 3; ++s) rules.push_back({s, AgentAutomaton::kAny, AgentAutomaton::kAny, s});
  return AgentAutomaton(3, 0, {0, 1, -1}, rules);
}

RunResult replay(const ForgeInstance& inst, std::uint64_t rounds) {
  Scenario sc = inst.scenario(Horizon::of(rounds));
  sc.record_trace = true;
  sc.stop_at_meeting = false;
  return run(sc, automaton_factory(inst.agent));
}

int side_edges(int i, std::uint64_t mask) { return i + (i - 1) + std::popcount(mask); }

}  // namespace

TEST_CASE("digraph analysis examples") {
  const DigraphAnalysis two = analyze_digraph(cycle_of_two(0, 1));
  CHECK(two.circuits.size() == 1);
  CHECK(two.circuits[0].size() == 2);
  CHECK(two.gamma == 2);
  const DigraphAnalysis id = analyze_digraph(identity_three());
  CHECK(id.circuits.size() == 3);
  CHECK(id.gamma == 1);
  CHECK(analyze_digraph(cycle_of_two(0, 0)).range_bound.has_value());
  CHECK_FALSE(analyze_digraph(cycle_of_two(0, 1)).range_bound.has_value());
}

TEST_CASE("digraph circuits match brute-force cycle finding") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_automaton(std::uniform_int_distribution<State>(1, 12)(rng), 3, rng);
    const DigraphAnalysis d = analyze_digraph(a);
    std::vector<int> next(d.reduced.begin(), d.reduced.end());
    auto expected = oracle::functional_cycles(next);
    std::vector<std::set<int>> got;
    for (const auto& c : d.circuits) got.emplace_back(c.begin(), c.end());
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    CHECK(got == expected);
    for (const auto& c : d.circuits) CHECK(d.gamma % c.size() == 0);
    for (State s = 0; s < a.size(); ++s) {
      // Iterating from s lands on the circuit it is assigned to.
      int x = s;
      for (int i = 0; i < a.size(); ++i) x = next[x];
      const auto& mine = d.circuits[d.circuit_of[s]];
      CHECK(std::find(mine.begin(), mine.end(), x) != mine.end());
      CHECK(d.on_circuit[s] == (std::find(mine.begin(), mine.end(), s) != mine.end()));
    }
  }
}

TEST_CASE("delayed-start line instances") {
  const ForgeInstance zero = forge_theorem1(constant_port_automaton(0));
  CHECK_NOTHROW(verify_instance(zero));
  CHECK(zero.tree->size() - 1 == 8 * 2 + 1);

  std::mt19937_64 rng(42);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_automaton(4, 2, rng);
    const ForgeInstance inst = forge_theorem1(a);
    CHECK(inst.kind == ForgeKind::Theorem1Line);
    CHECK(inst.tree->size() - 1 == 8 * (4 + 1) + 1);
    CHECK_FALSE(perfectly_symmetrizable(*inst.tree, inst.start_a, inst.start_b));
    CHECK(verify_certificate(inst.scenario(), automaton_factory(inst.agent), inst.certificate));
    const RunResult r = replay(inst, inst.certificate.cycle_start + inst.certificate.cycle_length);
    CHECK_FALSE(r.met());
    CHECK(theorem1_sides_hold(inst, r.trace));
  }
}

TEST_CASE("zero-delay line instances") {
  const ForgeInstance bounded = forge_theorem3(cycle_of_two(0, 0));
  CHECK(bounded.param("line_edges") == 4 * bounded.param("D") + 4);
  CHECK_NOTHROW(verify_instance(bounded));

  const ForgeInstance right = forge_theorem3(alternator_automaton());
  CHECK(right.param("x_prime") - right.param("x") == 2 * right.param("gamma"));
  CHECK(right.start_b - right.start_a == 1);
  CHECK_NOTHROW(verify_instance(right));

  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_automaton(8, 2, rng);
    const ForgeInstance inst = forge_theorem3(a);
    CHECK(inst.delay == 0);
    CHECK_NOTHROW(verify_instance(inst));
    const double s = 8;
    CHECK(inst.tree->size() - 1 <= std::pow(s, s) * 6 + 8 * s + 4);
    const RunResult r = replay(inst, inst.certificate.cycle_start + inst.certificate.cycle_length);
    if (const auto dist = theorem3_min_bouncing_distance(inst, r.trace)) {
      CHECK(*dist >= 2 * static_cast<std::int64_t>(analyze_digraph(a).gamma) + 8);
    }
  }
}

TEST_CASE("behavior functions") {
  const AgentAutomaton bw = basic_walk_automaton(3);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const BehaviorFunction f = behavior_function(bw, 4, mask);
    for (const auto& e : f.q) {
      CHECK_FALSE(e.divergent);
      CHECK(e.duration == static_cast<std::uint64_t>(2 * (side_edges(4, mask) + 1)));
      CHECK(e.next == f.q[0].next);
    }
  }
  CHECK(behavior_function(bw, 4, 1) == behavior_function(bw, 4, 2));
  CHECK_FALSE(behavior_function(bw, 4, 1) == behavior_function(bw, 4, 3));

  const BehaviorFunction stay = behavior_function(stay_automaton(), 4, 0);
  CHECK(stay.q[0].divergent);

  std::mt19937_64 rng(44);
  for (int k = 0; k < 30; ++k) {
    const State K = std::uniform_int_distribution<State>(1, 6)(rng);
    const auto a = random_automaton(K, 3, rng);
    for (int i = 2; i <= 5; ++i) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (i - 1)); ++mask) {
        CHECK(behavior_function(a, i, mask).max_duration < static_cast<std::uint64_t>(K * 3 * i));
      }
    }
  }
}

TEST_CASE("two-sided trees") {
  for (int i = 2; i <= 6; ++i) {
    for (std::uint64_t m1 = 0; m1 < (std::uint64_t{1} << (i - 1)); ++m1) {
      const TwoSidedTree t = two_sided_tree(i, m1, 0, 2);
      CHECK(t.tree.leaf_count() == 2 * i);
      CHECK(t.tree.max_degree() <= 3);
      CHECK(t.tree.neighbor(t.u, anchor_port(2)) == t.root1);
    }
  }
  const TwoSidedTree same = two_sided_tree(4, 5, 5, 2);
  CHECK(perfectly_symmetrizable(same.tree, same.u, same.v));
  Scenario sc;
  sc.tree = std::make_shared<const Tree>(same.tree);
  sc.start_a = same.u;
  sc.start_b = same.v;
  CHECK_FALSE(run(sc, automaton_factory(std::make_shared<const AgentAutomaton>(basic_walk_automaton(3)))).met());
}

TEST_CASE("two-sided tree instance for the basic walk") {
  const ForgeInstance inst = forge_theorem4(basic_walk_automaton(3), 4);
  CHECK(inst.kind == ForgeKind::Theorem4TwoSidedTree);
  CHECK(inst.tree->leaf_count() == 8);
  CHECK(inst.tree->max_degree() == 3);
  CHECK_NOTHROW(verify_instance(inst));
  const auto m1 = static_cast<std::uint64_t>(inst.param("mask1"));
  const auto m2 = static_cast<std::uint64_t>(inst.param("mask2"));
  CHECK(std::popcount(m1) == std::popcount(m2));
  const TwoSidedTree t = two_sided_tree(4, m1, m2, 2);
  CHECK_FALSE(oracle::rooted_isomorphic(t.tree, t.root1, t.u, t.tree, t.root2, t.v));
  CHECK_THROWS_AS(forge_theorem4(basic_walk_automaton(3), 4, Theorem4Options{2, 1, 1}), NoCollisionFound);
}

TEST_CASE("instance directories round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "rdv_forge_roundtrip";
  std::filesystem::remove_all(dir);
  const ForgeInstance inst = forge_theorem4(basic_walk_automaton(3), 4);
  write_instance(dir.string(), inst);
  const ForgeInstance back = load_instance(dir.string());
  CHECK(*back.tree == *inst.tree);
  CHECK(*back.agent == *inst.agent);
  CHECK(back.start_a == inst.start_a);
  CHECK(back.start_b == inst.start_b);
  CHECK(back.certificate == inst.certificate);
  CHECK(back.provenance == inst.provenance);
  CHECK_NOTHROW(verify_instance(back));
  std::filesystem::remove_all(dir);
}
