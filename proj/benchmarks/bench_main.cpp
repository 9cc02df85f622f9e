#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "rdv/agent.hpp"
#include "rdv/analysis.hpp"
#include "rdv/corpus.hpp"
#include "rdv/forge.hpp"
#include "rdv/protocol.hpp"
#include "rdv/sim.hpp"

using namespace rdv;

namespace {

void BM_Symmetrizable(benchmark::State& state) {
  const auto n = static_cast<NodeId>(state.range(0));
  const Tree t = gen_symmetric_contraction_tree(n / 2, 6, 2, 0, 11);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<NodeId> pick(0, t.size() - 1);
  for (auto _ : state) {
    const NodeId u = pick(rng);
    const NodeId v = (u + 1 + pick(rng) % (t.size() - 1)) % t.size();
    benchmark::DoNotOptimize(perfectly_symmetrizable(t, u, v));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Symmetrizable)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_Contract(benchmark::State& state) {
  const Tree t = gen_random_tree(static_cast<NodeId>(state.range(0)), 16, 0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(contract(t).nu());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Contract)->RangeMultiplier(4)->Range(64, 65536)->Complexity();

// Rounds per second for two automaton agents.
void BM_SimulateBasicWalk(benchmark::State& state) {
  const auto n = static_cast<NodeId>(state.range(0));
  Scenario sc;
  sc.tree = std::make_shared<const Tree>(gen_random_tree(n, 8, 3, 5));
  sc.start_a = 0;
  sc.start_b = n - 1;
  sc.horizon = Horizon::of(100'000);
  sc.stop_at_meeting = false;
  const auto factory = automaton_factory(std::make_shared<const AgentAutomaton>(basic_walk_automaton(3)));
  std::uint64_t rounds = 0;
  for (auto _ : state) rounds += run(sc, factory).rounds;
  state.counters["rounds/s"] = benchmark::Counter(static_cast<double>(rounds), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateBasicWalk)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ProtocolRun(benchmark::State& state) {
  const Tree t = gen_random_tree(static_cast<NodeId>(state.range(0)), 12, 0, 9);
  const auto oracle = std::make_shared<const ExploOracle>(std::make_shared<const Tree>(t));
  Scenario sc;
  sc.tree = oracle->tree_ptr();
  sc.start_a = 1;
  sc.start_b = t.size() - 2;
  sc.horizon = Horizon::of(protocol_horizon(*oracle));
  const auto factory = rendezvous_factory(oracle, ProtocolOptions{false});
  for (auto _ : state) benchmark::DoNotOptimize(run(sc, factory).rounds);
}
BENCHMARK(BM_ProtocolRun)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_PrimeLine(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(prime_line(m, 1, m / 2, LineDirection::TowardsLast, LineDirection::TowardsFirst).round);
  }
}
BENCHMARK(BM_PrimeLine)->Arg(16)->Arg(60)->Arg(240);

void BM_ForgeTheorem1(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const AgentAutomaton a = random_automaton(static_cast<State>(state.range(0)), 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forge_theorem1(a).certificate.cycle_length);
}
BENCHMARK(BM_ForgeTheorem1)->Arg(4)->Arg(16)->Arg(64);

void BM_ForgeTheorem4(benchmark::State& state) {
  const AgentAutomaton bw = basic_walk_automaton(3);
  for (auto _ : state) benchmark::DoNotOptimize(forge_theorem4(bw, static_cast<int>(state.range(0))).tree->size());
}
BENCHMARK(BM_ForgeTheorem4)->Arg(4)->Arg(6);

void BM_CorpusExhaustive(benchmark::State& state) {
  CorpusSpec spec;
  spec.exhaustive_max_n = static_cast<NodeId>(state.range(0));
  spec.keep_records = false;
  for (auto _ : state) benchmark::DoNotOptimize(corpus_run(spec, 1).cases);
}
BENCHMARK(BM_CorpusExhaustive)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
