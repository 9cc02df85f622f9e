// rdv: command-line front end for the rendezvous toolkit.
//
// Exit codes: 0 success, 1 usage or input error, 2 failed assertion or
// verification.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "rdv/agent.hpp"
#include "rdv/analysis.hpp"
#include "rdv/corpus.hpp"
#include "rdv/error.hpp"
#include "rdv/forge.hpp"
#include "rdv/protocol.hpp"
#include "rdv/sim.hpp"
#include "rdv/tree.hpp"

namespace {

using namespace rdv;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct Globals {
  std::string trace_path;
  std::uint64_t seed = 1;
  std::string horizon;  // rounds, or "auto"
};

std::optional<std::uint64_t> parse_horizon(const std::string& h) {
  if (h.empty() || h == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(h, &used);
    if (used == h.size() && h.front() != '-') return v;
  } catch (const std::logic_error&) {
  }
  throw InvalidInput("horizon must be a round count or 'auto', got '" + h + "'");
}

void emit_trace(const Globals& g, const RunResult& r) {
  if (g.trace_path.empty()) return;
  std::ofstream out(g.trace_path);
  if (!out) throw Error("cannot write trace to " + g.trace_path);
  write_trace(out, r.trace);
}

void print_counters(std::ostream& out, const RunResult& r) {
  for (int k = 0; k < 2; ++k) {
    for (const auto& c : r.agents[k].counters) {
      out << "counter agent=" << (k == 0 ? 'a' : 'b') << " name=" << c.name << " max=" << c.max_value
          << " bits=" << c.bits() << '\n';
    }
  }
}

std::string outcome_fields(const RunResult& r) {
  std::ostringstream s;
  if (const Met* m = r.meeting()) {
    s << "outcome=met meeting_round=" << m->round << " meeting_node=" << m->node;
  } else if (const CertifiedNeverMeet* c = r.certificate()) {
    s << "outcome=certified-never-meet cycle_start=" << c->cycle_start << " cycle_length=" << c->cycle_length;
  } else {
    s << "outcome=timeout horizon=" << std::get<Timeout>(r.outcome).horizon;
  }
  return s.str();
}

// --- verbs -----------------------------------------------------------------

int cmd_validate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  const RawTree raw = parse_tree(in);
  const ValidationReport rep = validate(raw);
  if (!rep.ok()) {
    std::cout << "valid=false\n" << rep.to_string() << '\n';
    return kUsage;
  }
  const Tree t = Tree::from_raw(raw);
  const CenterInfo c = center(t);
  std::cout << "valid=true n=" << t.size() << " leaves=" << t.leaf_count() << " max_degree=" << t.max_degree()
            << " center=" << (c.is_edge() ? "edge" : "node") << " symmetric=" << is_symmetric(t) << '\n';
  return kOk;
}

int cmd_symmetry(const std::string& path, NodeId u, NodeId v, bool brute, std::uint64_t budget) {
  const Tree t = load_tree(path);
  if (u < 0 || v < 0 || u >= t.size() || v >= t.size()) throw InvalidInput("node id out of range");
  if (brute) {
    const SymmetrizabilityWitness w = perfectly_symmetrizable_bruteforce(t, u, v, budget);
    std::cout << "symmetrizable=" << (w.symmetrizable ? "true" : "false") << " method=brute-force"
              << " labelings_examined=" << w.labelings_examined << '\n';
    if (w.symmetrizable) std::cout << tree_to_string(*w.labeling);
    return kOk;
  }
  const bool s = perfectly_symmetrizable(t, u, v);
  std::cout << "symmetrizable=" << (s ? "true" : "false") << " method=fast"
            << " label_preserving=" << label_preserving_automorphism(t, u, v).has_value() << '\n';
  if (s) std::cout << tree_to_string(*symmetrizing_labeling(t, u, v));
  return kOk;
}

std::string first_token(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (ls >> tok && tok.front() != '#') return tok;
  }
  return {};
}

struct DirectStarts {
  NodeId a = -1, b = -1;
  std::uint64_t delay = 0;
  std::string delayed = "b";
};

// Accepts a scenario file, or a tree file together with explicit starts.
int cmd_run(const Globals& g, const std::string& scenario_path, const std::string& agent_path,
            const DirectStarts& direct) {
  Scenario sc;
  if (first_token(scenario_path) == "tree") {
    sc.tree = std::make_shared<const Tree>(load_tree(scenario_path));
    if (direct.a < 0 || direct.b < 0) throw InvalidInput("a tree file needs --a and --b");
    if (direct.a >= sc.tree->size() || direct.b >= sc.tree->size() || direct.a == direct.b) {
      throw InvalidInput("starts must be two distinct node ids of the tree");
    }
    if (direct.delayed != "a" && direct.delayed != "b") throw InvalidInput("--delayed takes a or b");
    sc.start_a = direct.a;
    sc.start_b = direct.b;
    sc.delay = direct.delay;
    sc.delayed = direct.delayed == "a" ? DelayedAgent::A : DelayedAgent::B;
  } else {
    sc = materialize(load_scenario_file(scenario_path), scenario_path, Horizon::unbounded());
  }
  if (!g.horizon.empty()) sc.horizon = Horizon{parse_horizon(g.horizon)};
  sc.record_trace = !g.trace_path.empty();
  const auto agent = std::make_shared<const AgentAutomaton>(load_automaton(agent_path));
  const RunResult r = run(sc, automaton_factory(agent));
  std::cout << "n=" << sc.tree->size() << " a=" << sc.start_a << " b=" << sc.start_b << " delay=" << sc.delay
            << " delayed=" << (sc.delayed == DelayedAgent::A ? 'a' : 'b') << ' ' << outcome_fields(r)
            << " rounds=" << r.rounds << " crossings=" << r.crossings.size() << " bits_a=" << r.agents[0].bits
            << " bits_b=" << r.agents[1].bits << '\n';
  if (const CertifiedNeverMeet* c = r.certificate()) {
    if (!verify_certificate(sc, automaton_factory(agent), *c)) {
      std::cout << "certificate=invalid\n";
      return kFailed;
    }
    std::cout << "certificate=verified\n";
  }
  emit_trace(g, r);
  return kOk;
}

int cmd_run_protocol(const Globals& g, const std::string& tree_path, NodeId a, NodeId b, bool claims, bool timing,
                     bool counters) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tree = std::make_shared<const Tree>(load_tree(tree_path));
  if (a < 0 || b < 0 || a >= tree->size() || b >= tree->size() || a == b) {
    throw InvalidInput("starts must be two distinct node ids of the tree");
  }
  const auto oracle = std::make_shared<const ExploOracle>(tree);
  Scenario sc;
  sc.tree = tree;
  sc.start_a = a;
  sc.start_b = b;
  sc.horizon = Horizon::of(parse_horizon(g.horizon).value_or(protocol_horizon(*oracle)));
  const TreeDistance dist(*tree);
  sc.record_trace = !g.trace_path.empty() || dist(a, b) % 2 == 1;
  const RunResult r = run(sc, rendezvous_factory(oracle, ProtocolOptions{false}));

  const bool sym = perfectly_symmetrizable(*tree, a, b);
  const bool labeled_sym = label_preserving_automorphism(*tree, a, b).has_value();
  std::string parity = "na";
  if (dist(a, b) % 2 == 1) {
    try {
      check_parity_trace(dist, r.trace);
      parity = "pass";
    } catch (const VerificationFailure&) {
      parity = "fail";
    }
  }
  // A pair that is not symmetrizable must meet; a pair exchanged by a
  // label-preserving automorphism must not.
  const bool fact = sym ? !(labeled_sym && r.met()) : r.met();
  bool ok = parity != "fail" && (fact || !parse_horizon(g.horizon).has_value());

  std::cout << "scenario=" << digest(tree_to_string(*tree) + " " + std::to_string(a) + " " + std::to_string(b))
            << " n=" << tree->size() << " leaves=" << tree->leaf_count() << " nu=" << oracle->contraction().nu()
            << " verdict=" << to_string(oracle->verdict()) << " a=" << a << " b=" << b
            << " symmetrizable=" << sym << ' ' << outcome_fields(r) << " horizon=" << *sc.horizon.rounds
            << " bits_a=" << r.agents[0].bits << " bits_b=" << r.agents[1].bits << " parity=" << parity
            << " fact=" << (fact ? "pass" : "fail");
  if (claims) {
    const ClaimReport c = check_claims(oracle, a, b, 1);
    std::cout << " claim2=" << c.claim2 << " claim4=" << c.claim4 << " lemma_prime_delay=" << c.lemma_prime_delay
              << " lemma_delta=" << c.lemma_delta << " zero_delay=" << c.zero_delay
              << " max_prime_delay=" << c.max_prime_delay;
    ok = ok && c.ok();
  }
  if (timing) {
    std::cout << " wall_seconds="
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  std::cout << '\n';
  if (counters) print_counters(std::cout, r);
  emit_trace(g, r);
  return ok ? kOk : kFailed;
}

LineDirection parse_direction(const std::string& s) {
  if (s == "first") return LineDirection::TowardsFirst;
  if (s == "last") return LineDirection::TowardsLast;
  throw InvalidInput("direction must be 'first' or 'last'");
}

int cmd_prime_line(int m, int a, int b, const std::string& da, const std::string& db, int max_index) {
  const PrimeLineResult r = prime_line(m, a, b, parse_direction(da), parse_direction(db),
                                       max_index > 0 ? std::optional<int>(max_index) : std::nullopt);
  const bool feasible = m % 2 == 1 || a - 1 != m - b;
  std::cout << "m=" << m << " a=" << a << " b=" << b << " feasible=" << feasible
            << " bound_index=" << r.bound_index;
  if (r.met) {
    std::cout << " outcome=met meeting_round=" << r.round << " meeting_node=" << r.node
              << " prime_index=" << r.prime_index << " prime=" << (r.prime_index ? nth_prime(r.prime_index) : 0);
  } else {
    std::cout << " outcome=no-meeting-by-bound";
  }
  std::cout << " bits=" << r.bits << '\n';
  // A mirror pair must stay apart only under mirrored starting directions.
  const bool mirrored = da != db;
  const bool ok = (feasible ? r.met : !(mirrored && r.met)) && (!r.met || r.prime_index <= r.bound_index);
  return ok || max_index > 0 ? kOk : kFailed;
}

int cmd_forge(const std::string& which, const std::string& agent_path, int i, std::uint64_t budget, int m,
              std::uint64_t seed, const std::string& out_dir) {
  const AgentAutomaton a = load_automaton(agent_path);
  ForgeInstance inst;
  if (which == "theorem1") {
    inst = forge_theorem1(a);
  } else if (which == "theorem3") {
    inst = forge_theorem3(a);
  } else if (which == "theorem4") {
    try {
      inst = forge_theorem4(a, i, Theorem4Options{m, budget, seed});
    } catch (const NoCollisionFound& e) {
      std::cout << "outcome=no-collision examined=" << e.examined() << '\n';
      return kOk;
    }
  } else {
    throw InvalidInput("unknown construction '" + which + "'");
  }
  write_instance(out_dir, inst);
  verify_instance(load_instance(out_dir));
  std::cout << "kind=" << to_string(inst.kind) << " n=" << inst.tree->size() << " a=" << inst.start_a
            << " b=" << inst.start_b << " delay=" << inst.delay << " cycle_start=" << inst.certificate.cycle_start
            << " cycle_length=" << inst.certificate.cycle_length << " out=" << out_dir << '\n';
  return kOk;
}

int cmd_gen(const Globals& g, const std::string& kind, int n, int leaves, int cap, int states, int maxdeg,
            int central, int subdivisions, const std::string& out_path) {
  std::ostringstream text;
  if (kind == "tree") {
    write_tree(text, gen_random_tree(n, leaves, cap, g.seed));
  } else if (kind == "symmetric") {
    write_tree(text, gen_symmetric_contraction_tree(n, leaves, central, subdivisions, g.seed));
  } else if (kind == "agent") {
    std::mt19937_64 rng(g.seed);
    write_automaton(text, random_automaton(states, maxdeg, rng));
  } else if (kind == "basic-walk") {
    write_automaton(text, basic_walk_automaton(maxdeg));
  } else {
    throw InvalidInput("unknown kind '" + kind + "' (tree, symmetric, agent, basic-walk)");
  }
  if (out_path.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << text.str();
  }
  return kOk;
}

int cmd_corpus(const Globals& g, CorpusSpec spec, const std::string& pairs, bool counters, bool timing,
               const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  spec.seed = g.seed;
  if (pairs == "all") {
    spec.pairs = PairPolicy::All;
  } else {
    spec.pairs = PairPolicy::Sampled;
    try {
      spec.sampled_pairs = std::stoi(pairs);
    } catch (const std::logic_error&) {
      throw InvalidInput("--pairs takes 'all' or a count");
    }
  }
  CorpusReport rep = corpus_run(spec);
  if (timing) rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out_path.empty()) {
    write_report(std::cout, rep, counters);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    write_report(out, rep, counters);
    CorpusReport head = rep;
    head.records.clear();
    write_report(std::cout, head, false);
  }
  return rep.ok() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rendezvous of identical agents on anonymous port-labeled trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--trace", g.trace_path, "Write the round-by-round trace to this file");
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--horizon", g.horizon, "Round limit, or 'auto'");

  std::string path;
  std::string agent_path;
  std::string out;
  NodeId u = 0, v = 1;
  bool brute = false;
  std::uint64_t budget = 5'000'000;

  auto* validate_cmd = app.add_subcommand("validate", "Check a tree file");
  validate_cmd->add_option("tree", path, "Tree file")->required();

  auto* symmetry_cmd = app.add_subcommand("symmetry", "Decide perfect symmetrizability of two nodes");
  symmetry_cmd->add_option("tree", path, "Tree file")->required();
  symmetry_cmd->add_option("--u", u)->required();
  symmetry_cmd->add_option("--v", v)->required();
  symmetry_cmd->add_flag("--brute-force", brute, "Enumerate labelings instead of comparing codes");
  symmetry_cmd->add_option("--budget", budget, "Labeling budget for --brute-force");

  auto* run_cmd = app.add_subcommand("run", "Simulate two automaton agents on a scenario");
  DirectStarts direct;
  run_cmd->add_option("scenario", path, "Scenario file, or a tree file with --a/--b")->required();
  run_cmd->add_option("--agent", agent_path, "Automaton file")->required();
  run_cmd->add_option("--a", direct.a, "Start of agent A (tree input)");
  run_cmd->add_option("--b", direct.b, "Start of agent B (tree input)");
  run_cmd->add_option("--delay", direct.delay, "Delay in rounds (tree input)");
  run_cmd->add_option("--delayed", direct.delayed, "Delayed agent, a or b (tree input)");

  NodeId pa = 0, pb = 1;
  bool claims = false, timing = false, counters = false;
  auto* proto_cmd = app.add_subcommand("run-protocol", "Run the tree rendezvous protocol at zero delay");
  proto_cmd->add_option("tree", path, "Tree file")->required();
  proto_cmd->add_option("--a", pa)->required();
  proto_cmd->add_option("--b", pb)->required();
  proto_cmd->add_flag("--claims", claims, "Also check the schedule claims on a full outer iteration");
  proto_cmd->add_flag("--timing", timing, "Report wall-clock time (breaks byte reproducibility)");
  proto_cmd->add_flag("--counters", counters, "Print every counter maximum");

  int m = 3, la = 1, lb = 2, max_index = 0;
  std::string dir_a = "last", dir_b = "first";
  auto* line_cmd = app.add_subcommand("prime-line", "Blind-agent prime protocol on the path v_1..v_m");
  line_cmd->add_option("--m", m)->required();
  line_cmd->add_option("--a", la)->required();
  line_cmd->add_option("--b", lb)->required();
  line_cmd->add_option("--dir-a", dir_a, "first | last")->capture_default_str();
  line_cmd->add_option("--dir-b", dir_b, "first | last")->capture_default_str();
  line_cmd->add_option("--max-index", max_index, "Prime loop iterations (default: the prime bound)");

  std::string which;
  int side_i = 4, join_m = 2;
  std::uint64_t forge_budget = std::uint64_t{1} << 20;
  auto* forge_cmd = app.add_subcommand("forge", "Build a certified non-meeting instance for an automaton");
  forge_cmd->add_option("construction", which, "theorem1 | theorem3 | theorem4")->required();
  forge_cmd->add_option("--agent", agent_path, "Automaton file")->required();
  forge_cmd->add_option("--i", side_i, "Side tree size (theorem4)")->capture_default_str();
  forge_cmd->add_option("--m", join_m, "Degree-2 nodes on the joining path (theorem4)")->capture_default_str();
  forge_cmd->add_option("--budget", forge_budget, "Side trees examined (theorem4)");
  forge_cmd->add_option("--out", out, "Instance directory")->required();

  std::string kind = "tree";
  int n = 10, leaves = 3, cap = 0, states = 4, maxdeg = 3, central = 1, subdivisions = 2;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random tree or automaton");
  gen_cmd->add_option("--kind", kind, "tree | symmetric | agent | basic-walk")->capture_default_str();
  gen_cmd->add_option("--n", n, "Nodes (half nodes for symmetric)")->capture_default_str();
  gen_cmd->add_option("--leaves", leaves, "Leaves (half leaves for symmetric)")->capture_default_str();
  gen_cmd->add_option("--cap", cap, "Degree cap, 0 for none");
  gen_cmd->add_option("--central", central, "Central path edges (symmetric)");
  gen_cmd->add_option("--subdivisions", subdivisions, "Extra degree-2 nodes per side (symmetric)");
  gen_cmd->add_option("--states", states, "Automaton states (agent)");
  gen_cmd->add_option("--maxdeg", maxdeg, "Automaton degree range");
  gen_cmd->add_option("--out", out, "Output file (default stdout)");

  CorpusSpec spec;
  std::string pairs = "all";
  auto* corpus_cmd = app.add_subcommand("corpus", "Check the protocol against the symmetrizability oracle");
  corpus_cmd->add_option("--trees", spec.tree_count, "Random trees");
  corpus_cmd->add_option("--n-min", spec.n_min);
  corpus_cmd->add_option("--n-max", spec.n_max);
  corpus_cmd->add_option("--l-min", spec.leaves_min);
  corpus_cmd->add_option("--l-max", spec.leaves_max);
  corpus_cmd->add_option("--cap", spec.degree_cap);
  corpus_cmd->add_option("--pairs", pairs, "all | <count per tree>");
  corpus_cmd->add_option("--exhaustive", spec.exhaustive_max_n, "All topologies and labelings up to this size");
  corpus_cmd->add_flag("--symmetric-contraction", spec.symmetric_contraction);
  corpus_cmd->add_flag("--claims", spec.claims, "Check schedule claims on symmetric cases");
  corpus_cmd->add_flag("--counters", counters, "Emit counter maxima per case");
  corpus_cmd->add_flag("--timing", timing, "Report wall-clock time");
  corpus_cmd->add_option("--out", out, "Report file (summary still printed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(path);
    if (*symmetry_cmd) return cmd_symmetry(path, u, v, brute, budget);
    if (*run_cmd) return cmd_run(g, path, agent_path, direct);
    if (*proto_cmd) return cmd_run_protocol(g, path, pa, pb, claims, timing, counters);
    if (*line_cmd) return cmd_prime_line(m, la, lb, dir_a, dir_b, max_index);
    if (*forge_cmd) return cmd_forge(which, agent_path, side_i, forge_budget, join_m, g.seed, out);
    if (*gen_cmd) return cmd_gen(g, kind, n, leaves, cap, states, maxdeg, central, subdivisions, out);
    if (*corpus_cmd) return cmd_corpus(g, spec, pairs, counters, timing, out);
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
