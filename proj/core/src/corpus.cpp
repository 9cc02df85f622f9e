#include "rdv/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "rdv/analysis.hpp"
#include "rdv/error.hpp"

namespace rdv {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix(seed ^ splitmix(index + 1));
}

template <class Int>
Int uniform(std::mt19937_64& rng, Int lo, Int hi) {
  return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

// Standard linear-ish Pruefer decoding.
std::vector<std::pair<NodeId, NodeId>> decode_pruefer(NodeId n, const std::vector<NodeId>& seq) {
  std::vector<int> degree(n, 1);
  for (NodeId x : seq) ++degree[x];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId u = 0; u < n; ++u) {
    if (degree[u] == 1) leaves.push(u);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n - 1);
  for (NodeId x : seq) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1) leaves.push(x);
  }
  const NodeId a = leaves.top();
  leaves.pop();
  edges.emplace_back(a, leaves.top());
  return edges;
}

Tree shuffle_ports(const Tree& t, std::mt19937_64& rng) {
  std::vector<std::vector<Port>> perms(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    perms[u].resize(t.degree(u));
    std::iota(perms[u].begin(), perms[u].end(), 0);
    std::shuffle(perms[u].begin(), perms[u].end(), rng);
  }
  return permute_ports(t, perms);
}

}  // namespace

Tree gen_random_tree(NodeId n, int leaves, int degree_cap, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("tree needs at least one node");
  if (n == 1) {
    if (leaves != 0) throw InvalidInput("a single node has no leaves");
    return single_node();
  }
  if (n == 2) {
    if (leaves != 2) throw InvalidInput("a 2-node tree has exactly 2 leaves");
    if (degree_cap == 0 || degree_cap >= 1) return make_path(2);
  }
  if (leaves < 2 || leaves > n - 1) {
    throw InvalidInput("leaf count must lie in [2, n-1] for n >= 3 (got " + std::to_string(leaves) + ")");
  }
  const std::int64_t internal = n - leaves;
  if (degree_cap != 0) {
    if (degree_cap < 2) throw InvalidInput("degree cap below 2 admits no tree with n >= 3");
    if (2 * static_cast<std::int64_t>(n) - 2 - leaves > static_cast<std::int64_t>(degree_cap) * internal) {
      throw InvalidInput("degree cap " + std::to_string(degree_cap) + " cannot host " +
                         std::to_string(leaves) + " leaves on " + std::to_string(n) + " nodes");
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  // Internal node k appears count[k] >= 1 times and gets degree count + 1.
  std::vector<int> count(internal, 1);
  std::vector<std::int64_t> open;
  for (std::int64_t k = 0; k < internal; ++k) open.push_back(k);
  for (int extra = 0; extra < leaves - 2; ++extra) {
    const std::size_t pick = uniform<std::size_t>(rng, 0, open.size() - 1);
    const std::int64_t k = open[pick];
    ++count[k];
    if (degree_cap != 0 && count[k] + 1 >= degree_cap) {
      open[pick] = open.back();
      open.pop_back();
    }
  }
  std::vector<NodeId> seq;
  for (std::int64_t k = 0; k < internal; ++k) seq.insert(seq.end(), count[k], ids[k]);
  std::shuffle(seq.begin(), seq.end(), rng);
  return shuffle_ports(from_edges(n, decode_pruefer(n, seq)), rng);
}

Tree gen_symmetric_contraction_tree(NodeId half_n, int half_leaves, int central_len, int subdivisions,
                                    std::uint64_t seed) {
  if (half_n < 3) throw InvalidInput("half tree needs at least 3 nodes");
  if (central_len < 1) throw InvalidInput("central path needs at least one edge");
  std::mt19937_64 rng(seed);
  const Tree half = gen_random_tree(half_n, half_leaves, 0, rng());
  std::vector<NodeId> inner;
  for (NodeId u = 0; u < half_n; ++u) {
    if (half.degree(u) >= 2) inner.push_back(u);
  }
  const NodeId r = inner[uniform<std::size_t>(rng, 0, inner.size() - 1)];

  std::vector<std::vector<NodeId>> by_port(2 * half_n);
  std::vector<int> side(2 * half_n);
  const auto half_ports = half.by_port();
  for (NodeId u = 0; u < half_n; ++u) {
    by_port[u] = half_ports[u];
    by_port[u + half_n] = half_ports[u];
    for (NodeId& z : by_port[u + half_n]) z += half_n;
    side[u] = 0;
    side[u + half_n] = 1;
  }
  // Central path r1 - c_1 - ... - r2.
  NodeId prev = r;
  for (int k = 1; k < central_len; ++k) {
    const NodeId c = static_cast<NodeId>(by_port.size());
    by_port.emplace_back();
    side.push_back(2);
    by_port[prev].push_back(c);
    by_port[c].push_back(prev);
    prev = c;
  }
  by_port[prev].push_back(r + half_n);
  by_port[r + half_n].push_back(prev);
  // Intermediate central nodes get random port orders.
  for (std::size_t c = 2 * half_n; c < by_port.size(); ++c) {
    if (rng() & 1U) std::swap(by_port[c][0], by_port[c][1]);
  }
  for (int s = 0; s < 2; ++s) {
    const int k = uniform<int>(rng, 0, subdivisions);
    for (int done = 0, tries = 0; done < k && tries < 100 * (k + 1); ++tries) {
      const NodeId w = static_cast<NodeId>(s * half_n + uniform<NodeId>(rng, 0, half_n - 1));
      const Port p = uniform<Port>(rng, 0, static_cast<Port>(by_port[w].size()) - 1);
      const NodeId z = by_port[w][p];
      if (side[z] != s) continue;
      const NodeId x = static_cast<NodeId>(by_port.size());
      const auto back = std::find(by_port[z].begin(), by_port[z].end(), w);
      *back = x;
      by_port[w][p] = x;
      by_port.push_back(rng() & 1U ? std::vector<NodeId>{w, z} : std::vector<NodeId>{z, w});
      side.push_back(s);
      ++done;
    }
  }
  return Tree::from_ports(by_port);
}

// Every free tree on n nodes is a free tree on n - 1 nodes plus one leaf.
std::vector<Tree> enumerate_free_trees(NodeId n) {
  if (n < 1) return {};
  if (n == 1) return {single_node()};
  std::vector<Tree> out;
  std::unordered_set<std::string> seen;
  for (const Tree& smaller : enumerate_free_trees(n - 1)) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < smaller.size(); ++u) {
      for (NodeId w : smaller.neighbors(u)) {
        if (u < w) edges.emplace_back(u, w);
      }
    }
    for (NodeId u = 0; u < smaller.size(); ++u) {
      edges.emplace_back(u, n - 1);
      Tree t = from_edges(n, edges);
      edges.pop_back();
      if (seen.insert(free_tree_code(t)).second) out.push_back(std::move(t));
    }
  }
  return out;
}

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) s[k] = hex[h & 0xF];
  return s;
}

// ---------------------------------------------------------------------------

ClaimReport check_claims(std::shared_ptr<const ExploOracle> oracle, NodeId a, NodeId b, int outer) {
  ClaimReport rep;
  rep.symmetric_case = oracle->verdict() == ExploVerdict::CentralEdgeSymmetric;
  RendezvousAgent agent_a(oracle);
  RendezvousAgent agent_b(oracle);
  Scenario sc;
  sc.tree = oracle->tree_ptr();
  sc.start_a = a;
  sc.start_b = b;
  sc.horizon = Horizon::of(protocol_horizon(*oracle, outer));
  sc.stop_at_meeting = false;
  const RunResult r = run(sc, agent_a, agent_b);

  using K = PhaseEvent::Kind;
  const auto find = [](const RendezvousAgent& ag, K kind, int i = 0, int j = 0) -> std::optional<std::uint64_t> {
    for (const PhaseEvent& e : ag.events()) {
      if (e.kind == kind && e.i == i && e.j == j) return e.round;
    }
    return std::nullopt;
  };
  const auto gap = [](std::uint64_t x, std::uint64_t y) { return x > y ? x - y : y - x; };

  rep.leaf_round_a = find(agent_a, K::LeafReached).value_or(0);
  rep.leaf_round_b = find(agent_b, K::LeafReached).value_or(0);
  const auto sa = find(agent_a, K::SynchroEnd);
  const auto sb = find(agent_b, K::SynchroEnd);
  if (sa && sb) {
    rep.synchro_delay = gap(*sa, *sb);
    rep.claim2 = *rep.synchro_delay == gap(rep.leaf_round_a, rep.leaf_round_b);
  }
  const auto fa = find(agent_a, K::AtFar);
  const auto fb = find(agent_b, K::AtFar);
  if (!fa || !fb) return rep;
  rep.far_delay = gap(*fa, *fb);
  const std::uint64_t n = static_cast<std::uint64_t>(oracle->tree().size());
  const std::uint64_t l = static_cast<std::uint64_t>(oracle->tree().leaf_count());
  const std::uint64_t nu = static_cast<std::uint64_t>(oracle->contraction().nu());
  std::optional<std::uint64_t> first_prime;
  bool nonzero_before_meeting = false;
  const bool met = r.met();
  const std::uint64_t meet = met ? r.meeting()->round : 0;
  for (int i = 1;; ++i) {
    const auto oa = find(agent_a, K::OuterBegin, i);
    const auto ob = find(agent_b, K::OuterBegin, i);
    if (!oa || !ob) break;
    ++rep.outer_checked;
    if (gap(*oa, *ob) != *rep.far_delay) rep.claim4 = false;
    for (int j = 0; j <= static_cast<int>(2 * (nu - 1)); ++j) {
      const auto pa = find(agent_a, K::PrimeBegin, i, j);
      const auto pb = find(agent_b, K::PrimeBegin, i, j);
      if (!pa || !pb) break;
      ++rep.prime_starts_checked;
      const std::uint64_t d = gap(*pa, *pb);
      rep.max_prime_delay = std::max(rep.max_prime_delay, d);
      if (d > *rep.far_delay + 16 * n * l) rep.lemma_prime_delay = false;
      if (d > 20 * n * l) rep.lemma_delta = false;
      const std::uint64_t later = std::max(*pa, *pb);
      if (!first_prime) first_prime = later;
      if (met && later <= meet && d != 0) nonzero_before_meeting = true;
    }
  }
  if (met && first_prime && meet >= *first_prime && !nonzero_before_meeting) rep.zero_delay = false;
  return rep;
}

std::uint64_t check_parity_trace(const TreeDistance& dist, std::span<const TraceRecord> trace) {
  if (trace.empty()) return 0;
  if (dist(trace[0].pos_a, trace[0].pos_b) % 2 == 0) {
    throw InvalidInput("parity check needs an odd initial distance");
  }
  std::int64_t qa = 0;
  std::int64_t qb = 0;
  std::uint64_t checked = 0;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const TraceRecord& r = trace[k];
    if (!r.started_a || !r.started_b) throw InvalidInput("parity check needs both agents started");
    qa += r.moved_a ? 0 : 1;
    qb += r.moved_b ? 0 : 1;
    if ((qa - qb) % 2 == 0) {
      ++checked;
      if (dist(r.pos_a, r.pos_b) % 2 == 0) {
        throw VerificationFailure("parity predicate fails at round " + std::to_string(r.round));
      }
    }
  }
  return checked;
}

// ---------------------------------------------------------------------------

int default_workers() {
  if (const char* env = std::getenv("RDV_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::logic_error&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

struct Job {
  std::shared_ptr<const Tree> tree;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<char> brute;  // per pair: -1 unknown, 0/1 brute-force verdict
  bool witness = false;
};

struct Tally {
  std::vector<CaseRecord> records;
  std::uint64_t cases = 0, agreements = 0, symmetrizable = 0, met = 0;
  std::uint64_t claims_checked = 0, claims_failed = 0, parity_checked = 0, parity_failed = 0;
  unsigned max_bits = 0;

  void merge(Tally&& o) {
    for (auto& r : o.records) records.push_back(std::move(r));
    cases += o.cases;
    agreements += o.agreements;
    symmetrizable += o.symmetrizable;
    met += o.met;
    claims_checked += o.claims_checked;
    claims_failed += o.claims_failed;
    parity_checked += o.parity_checked;
    parity_failed += o.parity_failed;
    max_bits = std::max(max_bits, o.max_bits);
  }
};

constexpr std::uint64_t kParityTraceLimit = 2'000'000;

void run_job(const Job& job, const CorpusSpec& spec, Tally& out) {
  const auto oracle = std::make_shared<const ExploOracle>(job.tree);
  const std::uint64_t horizon = protocol_horizon(*oracle);
  const TreeDistance dist(*job.tree);
  const AgentFactory factory = rendezvous_factory(oracle, ProtocolOptions{false});
  std::string text;
  for (std::size_t k = 0; k < job.pairs.size(); ++k) {
    const auto [a, b] = job.pairs[k];
    CaseRecord rec;
    rec.n = job.tree->size();
    rec.leaves = job.tree->leaf_count();
    rec.nu = oracle->contraction().nu();
    rec.verdict = to_string(oracle->verdict());
    rec.a = a;
    rec.b = b;
    rec.witness_labeling = job.witness;
    const bool fast = perfectly_symmetrizable(*job.tree, a, b);
    rec.symmetrizable = fast;
    rec.oracle = job.brute[k] >= 0 ? "brute-force" : "fast";
    const bool oracles_agree = job.brute[k] < 0 || (job.brute[k] == 1) == fast;

    Scenario sc;
    sc.tree = job.tree;
    sc.start_a = a;
    sc.start_b = b;
    sc.horizon = Horizon::of(horizon);
    const bool odd = dist(a, b) % 2 == 1;
    sc.record_trace = spec.parity && odd && horizon <= kParityTraceLimit;
    const RunResult r = run(sc, factory);
    rec.horizon = horizon;
    rec.outcome = r.met() ? "met" : "timeout";
    rec.meeting_round = r.met() ? r.meeting()->round : 0;
    rec.bits_a = r.agents[0].bits;
    rec.bits_b = r.agents[1].bits;
    rec.counters = r.agents[0].counters;
    rec.agree = oracles_agree && (r.met() != fast);

    bool failed = !rec.agree;
    if (sc.record_trace) {
      ++out.parity_checked;
      try {
        check_parity_trace(dist, r.trace);
        rec.parity = "pass";
      } catch (const VerificationFailure&) {
        rec.parity = "fail";
        ++out.parity_failed;
        failed = true;
      }
    }
    if (spec.claims && oracle->verdict() == ExploVerdict::CentralEdgeSymmetric) {
      ++out.claims_checked;
      const ClaimReport c = check_claims(oracle, a, b, 1);
      rec.claims = c.ok() ? "pass" : "fail";
      if (!c.ok()) {
        ++out.claims_failed;
        failed = true;
      }
    }

    ++out.cases;
    out.agreements += rec.agree ? 1 : 0;
    out.symmetrizable += fast ? 1 : 0;
    out.met += r.met() ? 1 : 0;
    out.max_bits = std::max({out.max_bits, rec.bits_a, rec.bits_b});
    if (spec.keep_records || failed) {
      if (text.empty()) text = tree_to_string(*job.tree);
      rec.digest = digest(text + " " + std::to_string(a) + " " + std::to_string(b));
      if (failed) rec.tree_text = text;
      out.records.push_back(std::move(rec));
    }
  }
}

std::vector<Job> build_jobs(const CorpusSpec& spec) {
  std::vector<Job> jobs;
  // Exhaustive small topologies: every labeling for the pairs that must
  // meet, the witness labeling for the rest.
  for (NodeId n = 2; n <= spec.exhaustive_max_n; ++n) {
    for (const Tree& topo : enumerate_free_trees(n)) {
      std::vector<std::pair<NodeId, NodeId>> must_meet;
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
          const auto w = perfectly_symmetrizable_bruteforce(topo, u, v, spec.labeling_budget);
          if (w.symmetrizable) {
            jobs.push_back(Job{std::make_shared<const Tree>(*w.labeling), {{u, v}}, {1}, true});
          } else {
            must_meet.emplace_back(u, v);
          }
        }
      }
      if (must_meet.empty()) continue;
      for_each_labeling(topo, spec.labeling_budget, [&](const Tree& lab) {
        jobs.push_back(Job{std::make_shared<const Tree>(lab), must_meet,
                           std::vector<char>(must_meet.size(), 0), false});
        return true;
      });
    }
  }
  for (int k = 0; k < spec.tree_count; ++k) {
    std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(k)));
    Tree t;
    if (spec.symmetric_contraction) {
      const NodeId half_max = std::max<NodeId>(3, spec.n_max / 2);
      const NodeId half_n = uniform<NodeId>(rng, 3, half_max);
      const int hl_max = std::max(2, std::min<int>(half_n - 1, spec.leaves_max / 2));
      const int half_leaves = uniform<int>(rng, 2, hl_max);
      t = gen_symmetric_contraction_tree(half_n, half_leaves, uniform<int>(rng, 1, 4), uniform<int>(rng, 0, 3),
                                         rng());
    } else {
      const NodeId n = uniform<NodeId>(rng, std::max<NodeId>(2, spec.n_min), std::max<NodeId>(2, spec.n_max));
      int leaves = 2;
      if (n >= 3) {
        const int lo = std::max(2, spec.leaves_min);
        const int hi = std::max(lo, std::min<int>(spec.leaves_max, n - 1));
        leaves = std::min<int>(uniform<int>(rng, lo, hi), n - 1);
        if (spec.degree_cap >= 2) {
          // Lower the leaf count until the cap admits it.
          while (leaves > 2 && 2 * n - 2 - leaves > spec.degree_cap * (n - leaves)) --leaves;
          while (2 * n - 2 - leaves > spec.degree_cap * (n - leaves) && leaves < n - 1) ++leaves;
        }
      }
      t = gen_random_tree(n, leaves, spec.degree_cap, rng());
    }
    const NodeId n = t.size();
    std::vector<std::pair<NodeId, NodeId>> pairs;
    const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
    if (spec.pairs == PairPolicy::All || total <= spec.sampled_pairs) {
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
      }
    } else {
      std::set<std::pair<NodeId, NodeId>> chosen;
      while (static_cast<int>(chosen.size()) < spec.sampled_pairs) {
        NodeId u = uniform<NodeId>(rng, 0, n - 1);
        NodeId v = uniform<NodeId>(rng, 0, n - 1);
        if (u == v) continue;
        chosen.emplace(std::min(u, v), std::max(u, v));
      }
      pairs.assign(chosen.begin(), chosen.end());
    }
    const auto shared = std::make_shared<const Tree>(t);
    Job plain{shared, {}, {}, false};
    const bool small = n < spec.brute_force_below && labeling_count(t) <= spec.labeling_budget;
    for (const auto& [u, v] : pairs) {
      if (small) {
        const auto w = perfectly_symmetrizable_bruteforce(t, u, v, spec.labeling_budget);
        if (w.symmetrizable) {
          jobs.push_back(Job{std::make_shared<const Tree>(*w.labeling), {{u, v}}, {1}, true});
        } else {
          plain.pairs.emplace_back(u, v);
          plain.brute.push_back(0);
        }
      } else if (auto lab = symmetrizing_labeling(t, u, v)) {
        jobs.push_back(Job{std::make_shared<const Tree>(std::move(*lab)), {{u, v}}, {-1}, true});
      } else {
        plain.pairs.emplace_back(u, v);
        plain.brute.push_back(-1);
      }
    }
    if (!plain.pairs.empty()) jobs.push_back(std::move(plain));
  }
  return jobs;
}

}  // namespace

CorpusReport corpus_run(const CorpusSpec& spec, int workers) {
  const std::vector<Job> jobs = build_jobs(spec);
  Tally total;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  const auto worker = [&] {
    Tally local;
    try {
      for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) run_job(jobs[k], spec, local);
    } catch (...) {
      const std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
    }
    const std::lock_guard lock(mu);
    total.merge(std::move(local));
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> threads;
  for (int w = 1; w < count; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  CorpusReport rep;
  std::sort(total.records.begin(), total.records.end(), [](const CaseRecord& x, const CaseRecord& y) {
    return std::tie(x.digest, x.a, x.b) < std::tie(y.digest, y.a, y.b);
  });
  rep.records = std::move(total.records);
  rep.cases = total.cases;
  rep.agreements = total.agreements;
  rep.symmetrizable = total.symmetrizable;
  rep.met = total.met;
  rep.claims_checked = total.claims_checked;
  rep.claims_failed = total.claims_failed;
  rep.parity_checked = total.parity_checked;
  rep.parity_failed = total.parity_failed;
  rep.max_bits = total.max_bits;
  return rep;
}

void write_report(std::ostream& out, const CorpusReport& report, bool counters) {
  for (const CaseRecord& r : report.records) {
    out << "case digest=" << r.digest << " n=" << r.n << " leaves=" << r.leaves << " nu=" << r.nu
        << " verdict=" << r.verdict << " a=" << r.a << " b=" << r.b
        << " labeling=" << (r.witness_labeling ? "witness" : "given") << " symmetrizable=" << r.symmetrizable
        << " oracle=" << r.oracle << " outcome=" << r.outcome << " meeting_round=" << r.meeting_round
        << " horizon=" << r.horizon << " bits_a=" << r.bits_a << " bits_b=" << r.bits_b
        << " agree=" << r.agree << " claims=" << r.claims << " parity=" << r.parity;
    if (counters) {
      for (const auto& c : r.counters) out << " max." << c.name << '=' << c.max_value;
    }
    if (!r.tree_text.empty()) {
      std::string flat = r.tree_text;
      std::replace(flat.begin(), flat.end(), '\n', ';');
      out << " tree=\"" << flat << '"';
    }
    out << '\n';
  }
  out << "summary cases=" << report.cases << " agree=" << report.agreements
      << " symmetrizable=" << report.symmetrizable << " met=" << report.met
      << " claims_checked=" << report.claims_checked << " claims_failed=" << report.claims_failed
      << " parity_checked=" << report.parity_checked << " parity_failed=" << report.parity_failed
      << " max_bits=" << report.max_bits;
  if (report.wall_seconds) out << " wall_seconds=" << *report.wall_seconds;
  out << " status=" << (report.ok() ? "ok" : "fail") << '\n';
}

}  // namespace rdv
