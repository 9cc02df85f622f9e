#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdv/protocol.hpp"
#include "rdv/tree.hpp"

namespace rdv {

// Uniform-ish random tree with exactly n nodes and `leaves` leaves, all
// degrees <= degree_cap (0 = no cap), random node ids and ports.
// Throws InvalidInput with the reason when infeasible.
Tree gen_random_tree(NodeId n, int leaves, int degree_cap, std::uint64_t seed);

// Two copies of a random half (half_n nodes, half_leaves leaves) joined by
// a path of central_len edges, then independently subdivided on each side
// (up to `subdivisions` extra degree-2 nodes per side). The contraction is
// always symmetric; the tree itself usually is not.
Tree gen_symmetric_contraction_tree(NodeId half_n, int half_leaves, int central_len,
                                    int subdivisions, std::uint64_t seed);

// One representative per isomorphism class of free trees with n nodes.
std::vector<Tree> enumerate_free_trees(NodeId n);

// FNV-1a, printed as 16 hex digits.
std::string digest(const std::string& text);

// Schedule checks on one zero-delay protocol run through `outer` outer
// iterations (meetings do not stop the run).
struct ClaimReport {
  bool symmetric_case = false;
  std::uint64_t leaf_round_a = 0, leaf_round_b = 0;        // L, L'
  std::optional<std::uint64_t> synchro_delay;              // beta
  std::optional<std::uint64_t> far_delay;                  // |t - t'|
  bool claim2 = true;           // beta == |L - L'|
  bool claim4 = true;           // every outer entry delay == |t - t'|
  bool lemma_prime_delay = true;  // prime start delay <= |t - t'| + 16 n l
  bool lemma_delta = true;        // prime start delay <= 20 n l
  bool zero_delay = true;         // a meeting inside the loops follows a nonzero start delay
  std::uint64_t max_prime_delay = 0;
  int outer_checked = 0;
  int prime_starts_checked = 0;

  bool ok() const { return claim2 && claim4 && lemma_prime_delay && lemma_delta && zero_delay; }
};

ClaimReport check_claims(std::shared_ptr<const ExploOracle> oracle, NodeId a, NodeId b, int outer = 1);

// Parity predicate over a whole trace (incremental form of the lemma).
// Returns the number of rounds checked; throws VerificationFailure on the
// first violation.
std::uint64_t check_parity_trace(const TreeDistance& dist, std::span<const TraceRecord> trace);

enum class PairPolicy { All, Sampled };

struct CorpusSpec {
  std::uint64_t seed = 1;
  int tree_count = 0;
  NodeId n_min = 2;
  NodeId n_max = 16;
  int leaves_min = 2;
  int leaves_max = 8;
  int degree_cap = 0;
  PairPolicy pairs = PairPolicy::All;
  int sampled_pairs = 16;
  // Random trees come from gen_symmetric_contraction_tree instead.
  bool symmetric_contraction = false;
  // Every topology and labeling with 2..exhaustive_max_n nodes (0 = off).
  NodeId exhaustive_max_n = 0;
  // Brute-force symmetrizability below this node count.
  NodeId brute_force_below = 9;
  std::uint64_t labeling_budget = 5'000'000;
  bool claims = false;
  bool parity = true;   // traces recorded when the horizon is small enough
  bool keep_records = true;
};

struct CaseRecord {
  std::string digest;
  NodeId n = 0;
  int leaves = 0;
  NodeId nu = 0;
  std::string verdict;
  NodeId a = 0;
  NodeId b = 0;
  bool witness_labeling = false;
  bool symmetrizable = false;
  std::string oracle;  // brute-force | fast
  std::string outcome;
  std::uint64_t meeting_round = 0;
  std::uint64_t horizon = 0;
  unsigned bits_a = 0;
  unsigned bits_b = 0;
  std::vector<MemoryMeter::Reading> counters;  // agent A
  bool agree = false;
  std::string claims = "na";  // pass | fail | na
  std::string parity = "na";
  std::string tree_text;       // kept for failures (replayable)
};

struct CorpusReport {
  std::vector<CaseRecord> records;   // sorted by digest; failures always kept
  std::uint64_t cases = 0;
  std::uint64_t agreements = 0;
  std::uint64_t symmetrizable = 0;
  std::uint64_t met = 0;
  std::uint64_t claims_checked = 0;
  std::uint64_t claims_failed = 0;
  std::uint64_t parity_checked = 0;
  std::uint64_t parity_failed = 0;
  unsigned max_bits = 0;
  std::optional<double> wall_seconds;

  bool ok() const { return agreements == cases && claims_failed == 0 && parity_failed == 0; }
};

// Worker count from RDV_WORKERS, else hardware concurrency.
int default_workers();

CorpusReport corpus_run(const CorpusSpec& spec, int workers = default_workers());

// Line-delimited key=value records: one `case` line per record, then one
// `summary` line.
void write_report(std::ostream& out, const CorpusReport& report, bool counters = false);

}  // namespace rdv
