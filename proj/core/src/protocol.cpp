#include "rdv/protocol.hpp"

#include <algorithm>
#include <array>

#include "coroutine.hpp"
#include "rdv/error.hpp"

namespace rdv {

using detail::Proc;

std::string to_string(ExploVerdict v) {
  switch (v) {
    case ExploVerdict::CentralNode: return "central-node";
    case ExploVerdict::CentralEdgeAsymmetric: return "central-edge-asymmetric";
    case ExploVerdict::CentralEdgeSymmetric: return "central-edge-symmetric";
  }
  return "?";
}

std::string to_string(PhaseEvent::Kind k) {
  switch (k) {
    case PhaseEvent::Kind::LeafReached: return "leaf-reached";
    case PhaseEvent::Kind::ExploBisEnd: return "explo-bis-end";
    case PhaseEvent::Kind::WaitBegin: return "wait-begin";
    case PhaseEvent::Kind::SynchroEnd: return "synchro-end";
    case PhaseEvent::Kind::AtFar: return "at-far";
    case PhaseEvent::Kind::OuterBegin: return "outer-begin";
    case PhaseEvent::Kind::PrimeBegin: return "prime-begin";
    case PhaseEvent::Kind::ResetBegin: return "reset-begin";
  }
  return "?";
}

ExploOracle::ExploOracle(std::shared_ptr<const Tree> tree)
    : tree_(std::move(tree)), view_(contract(*tree_)), center_(center(view_.contracted)) {
  const Tree& tp = view_.contracted;
  if (!center_.is_edge()) {
    verdict_ = ExploVerdict::CentralNode;
    return;
  }
  const NodeId x = center_.x;
  const NodeId y = center_.y;
  const std::string hx = half_code(tp, x, y, std::nullopt, CodeMode::PortPreserving);
  const std::string hy = half_code(tp, y, x, std::nullopt, CodeMode::PortPreserving);
  verdict_ = hx == hy ? ExploVerdict::CentralEdgeSymmetric : ExploVerdict::CentralEdgeAsymmetric;
  canonical_extremity_ = hx < hy ? x : y;
  central_path_length_ = static_cast<int>(view_.edge_path[x][tp.port_to(x, y)].size());
}

NodeId ExploOracle::target(NodeId start) const {
  const NodeId a = view_.inverse.at(start);
  if (a < 0) throw InvalidInput("exploration must start at a node of degree other than 2");
  switch (verdict_) {
    case ExploVerdict::CentralNode: return center_.x;
    case ExploVerdict::CentralEdgeAsymmetric: return canonical_extremity_;
    case ExploVerdict::CentralEdgeSymmetric: break;
  }
  const auto dist = bfs_distances(view_.contracted, a);
  return dist[center_.x] > dist[center_.y] ? center_.x : center_.y;
}

ExploReport ExploOracle::query(NodeId start) const {
  const Tree& tp = view_.contracted;
  const NodeId goal = target(start);
  ExploReport r;
  r.nu = tp.size();
  r.leaf_count = tree_->leaf_count();
  r.verdict = verdict_;
  WalkPosition pos{view_.inverse[start], kNoPort};
  while (pos.node != goal) {
    pos = basic_walk_step(tp, pos);
    ++r.steps_to_target;
  }
  if (center_.is_edge()) {
    r.central_port = tp.port_to(goal, goal == center_.x ? center_.y : center_.x);
  }
  return r;
}

std::uint64_t next_prime(std::uint64_t p) {
  for (std::uint64_t c = p + 1;; ++c) {
    if (c < 2) continue;
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= c; ++d) {
      if (c % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) return c;
  }
}

std::uint64_t nth_prime(int j) {
  std::uint64_t p = 1;
  for (int k = 0; k < j; ++k) p = next_prime(p);
  return p;
}

int prime_bound_index(std::uint64_t m) {
  const unsigned __int128 limit = static_cast<unsigned __int128>(m) * m;
  unsigned __int128 product = 1;
  std::uint64_t p = 1;
  int j = 0;
  for (;;) {
    p = next_prime(p);
    product *= p;
    if (product > limit) return j;
    ++j;
  }
}

std::uint64_t rendezvous_path_length(const ExploOracle& oracle) {
  const std::uint64_t w = 2 * static_cast<std::uint64_t>(oracle.tree().size() - 1);
  const std::uint64_t c = static_cast<std::uint64_t>(oracle.central_path_length());
  const std::uint64_t reps = 5 * static_cast<std::uint64_t>(oracle.tree().leaf_count());
  return reps * (2 * w + 2 * c) + 2 * w + c;
}

std::uint64_t protocol_horizon(const ExploOracle& oracle, int outer) {
  const std::uint64_t n = static_cast<std::uint64_t>(oracle.tree().size());
  const std::uint64_t w = 2 * (n - 1);
  if (oracle.verdict() != ExploVerdict::CentralEdgeSymmetric) return 3 * w + 1;
  const std::uint64_t nu = static_cast<std::uint64_t>(oracle.contraction().nu());
  const std::uint64_t c = static_cast<std::uint64_t>(oracle.central_path_length());
  const std::uint64_t path = rendezvous_path_length(oracle);
  const int iterations = outer > 0 ? outer : prime_bound_index(path + 1) + 1;
  const std::uint64_t loops = 2 * nu - 1;
  std::uint64_t total = 2 * w + w * (2 * nu - 2) + w;
  std::uint64_t prime_sum = 0;
  std::uint64_t p = 1;
  for (int i = 1; i <= iterations; ++i) {
    p = next_prime(p);
    prime_sum += p;
    total += 4 * w * loops + 2 * c + loops * 2 * path * prime_sum;
  }
  return total + 4 * n;
}

// ---------------------------------------------------------------------------

namespace {

enum Reg : int {
  kPhase,
  kLeafSearch,
  kLastEntry,
  kNu,
  kLeaves,
  kVerdict,
  kSteps,
  kCentralPort,
  kExploCount,
  kWalkTarget,
  kWalkCount,
  kSynchroCount,
  kSynchroEntry,
  kOuterI,
  kInnerJ,
  kRep,
  kInstr,
  kPrimeIndex,
  kPrime,
  kIdle,
  kCandidate,
  kDivisor,
  kRegCount,
};

constexpr std::array<const char*, kRegCount> kRegNames = {
    "phase",         "leaf_search", "last_entry", "report.nu",   "report.leaves", "report.verdict",
    "report.steps",  "report.port", "explo_count", "walk_target", "walk_count",    "synchro_count",
    "synchro_entry", "outer_i",     "inner_j",    "path_rep",    "path_instr",    "prime_index",
    "prime",         "idle",        "candidate",  "divisor",
};

enum Phase : int {
  kPhaseLeafSearch,
  kPhaseExplo,
  kPhaseToTarget,
  kPhaseWait,
  kPhaseSynchro,
  kPhaseGoFar,
  kPhaseOuter,
};

// Registers backed by meter counters.
class Registers {
 public:
  template <std::size_t N>
  explicit Registers(MemoryMeter& meter, const std::array<const char*, N>& names)
      : meter_(meter), live_(N, 0) {
    for (const char* name : names) handles_.push_back(meter.declare(name));
  }
  void set(int r, std::int64_t v) {
    live_[r] = v;
    meter_.observe(handles_[r], v < 0 ? 0 : static_cast<std::uint64_t>(v));
  }
  std::int64_t get(int r) const { return live_[r]; }
  const std::vector<std::int64_t>& live() const { return live_; }

 private:
  MemoryMeter& meter_;
  std::vector<MemoryMeter::Handle> handles_;
  std::vector<std::int64_t> live_;
};

// Trial division; both registers stay below the prime found.
std::uint64_t metered_next_prime(std::uint64_t p, Registers& regs, int cand_reg, int div_reg) {
  for (std::uint64_t c = p + 1;; ++c) {
    regs.set(cand_reg, static_cast<std::int64_t>(c));
    if (c < 2) continue;
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= c; ++d) {
      regs.set(div_reg, static_cast<std::int64_t>(d));
      if (c % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) return c;
  }
}

}  // namespace

struct RendezvousAgent::Impl {
  struct Round {
    Impl* self;
    Action action;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept {
      self->driver.action = action;
      self->driver.suspended = h;
    }
    void await_resume() noexcept { self->absorb(); }
  };

  Impl(std::shared_ptr<const ExploOracle> o, ProtocolOptions opt)
      : oracle(std::move(o)), options(opt), regs(meter, kRegNames) {
    explo_handle = meter.declare("explo");
  }

  detail::Driver driver;
  std::optional<Proc> body_proc;
  std::shared_ptr<const ExploOracle> oracle;
  ProtocolOptions options;
  MemoryMeter meter;
  Registers regs;
  MemoryMeter::Handle explo_handle;
  const Tree* env = nullptr;
  NodeId where = -1;  // ground truth, read only by the oracle shim
  Observation here;
  std::optional<ExploReport> report;
  std::vector<PhaseEvent> events;
  std::uint64_t rounds = 0;

  void absorb() {
    here = driver.obs;
    if (here.entry != kNoPort) regs.set(kLastEntry, here.entry);
  }
  Port last_entry() const { return static_cast<Port>(regs.get(kLastEntry)); }
  Round go(Port p) { return Round{this, Action::depart(p)}; }
  Round idle() { return Round{this, Action::stay()}; }
  void log(PhaseEvent::Kind k, int i = 0, int j = 0) {
    if (options.log_events) events.push_back(PhaseEvent{k, rounds, i, j});
  }

  Action emit(Action a) {
    if (!a.is_stay()) where = env->neighbor(where, a.port());
    ++rounds;
    return a;
  }

  // Basic walk (or counter walk) until j arrivals at nodes of degree
  // other than 2, idling speed-1 rounds before each move.
  Proc walk(int j, bool counter, Port first, std::uint64_t speed) {
    if (j == 0) co_return;
    regs.set(kWalkTarget, j);
    regs.set(kWalkCount, 0);
    Port out = first;
    int count = 0;
    for (;;) {
      for (std::uint64_t k = 1; k < speed; ++k) co_await idle();
      co_await go(out);
      const int d = here.degree;
      if (d != 2) {
        regs.set(kWalkCount, ++count);
        if (count == j) co_return;
      }
      out = counter ? (here.entry + d - 1) % d : (here.entry + 1) % d;
    }
  }

  Proc cross_central(std::uint64_t speed) {
    Port out = report->central_port;
    for (;;) {
      for (std::uint64_t k = 1; k < speed; ++k) co_await idle();
      co_await go(out);
      if (here.degree != 2) co_return;
      out = (here.entry + 1) % 2;
    }
  }

  // Full basic walk from the current node counting contraction arrivals.
  Proc explo(bool keep) {
    const ExploReport r = oracle->query(where);
    meter.charge(explo_handle, kExploBitsPerLogNu * state_bits(static_cast<std::uint64_t>(r.nu)));
    if (keep) {
      report = r;
      regs.set(kNu, r.nu);
      regs.set(kLeaves, r.leaf_count);
      regs.set(kVerdict, static_cast<int>(r.verdict));
      regs.set(kSteps, r.steps_to_target);
      regs.set(kCentralPort, r.central_port);
    }
    const int total = 2 * (r.nu - 1);
    int count = 0;
    regs.set(kExploCount, 0);
    Port out = 0;
    while (count < total) {
      co_await go(out);
      if (here.degree != 2) regs.set(kExploCount, ++count);
      out = (here.entry + 1) % here.degree;
    }
  }

  Proc explo_bis() {
    if (here.degree == 2) {
      regs.set(kPhase, kPhaseLeafSearch);
      regs.set(kLeafSearch, 1);
      Port out = 0;
      for (;;) {
        co_await go(out);
        if (here.degree == 1) break;
        out = (here.entry + 1) % here.degree;
      }
      regs.set(kLeafSearch, 0);
    }
    log(PhaseEvent::Kind::LeafReached);
    regs.set(kPhase, kPhaseExplo);
    co_await explo(true);
    log(PhaseEvent::Kind::ExploBisEnd);
  }

  // Basic walk over the whole contraction with an exploration at every
  // contraction node reached, except the final return.
  Proc synchro() {
    regs.set(kPhase, kPhaseSynchro);
    const int total = 2 * (report->nu - 1);
    int count = 0;
    Port out = 0;
    for (;;) {
      co_await go(out);
      if (here.degree == 2) {
        out = (here.entry + 1) % 2;
        continue;
      }
      regs.set(kSynchroCount, ++count);
      if (count == total) break;
      regs.set(kSynchroEntry, here.entry);
      co_await explo(false);
      out = static_cast<Port>((regs.get(kSynchroEntry) + 1) % here.degree);
    }
    log(PhaseEvent::Kind::SynchroEnd);
  }

  Proc traverse_path(std::uint64_t speed) {
    const int full = 2 * (report->nu - 1);
    const int reps = 5 * report->leaf_count;
    for (int rep = 0; rep <= reps; ++rep) {
      regs.set(kRep, rep);
      regs.set(kInstr, 0);
      co_await walk(full, false, 0, speed);
      regs.set(kInstr, 1);
      co_await cross_central(speed);
      regs.set(kInstr, 2);
      co_await walk(full, true, here.degree - 1, speed);
      if (rep < reps) {
        regs.set(kInstr, 3);
        co_await cross_central(speed);
      }
    }
  }

  Proc prime(int i) {
    std::uint64_t p = 1;
    for (int k = 1; k <= i; ++k) {
      p = metered_next_prime(p, regs, kCandidate, kDivisor);
      regs.set(kPrimeIndex, k);
      regs.set(kPrime, static_cast<std::int64_t>(p));
      regs.set(kIdle, static_cast<std::int64_t>(p - 1));
      co_await traverse_path(p);
      co_await traverse_path(p);
    }
  }

  Proc body() {
    co_await explo_bis();
    const ExploReport r = *report;
    if (r.verdict != ExploVerdict::CentralEdgeSymmetric) {
      regs.set(kPhase, kPhaseToTarget);
      co_await walk(r.steps_to_target, false, 0, 1);
      log(PhaseEvent::Kind::WaitBegin);
      regs.set(kPhase, kPhaseWait);
      for (;;) co_await idle();
    }
    co_await synchro();
    regs.set(kPhase, kPhaseGoFar);
    co_await walk(r.steps_to_target, false, 0, 1);
    log(PhaseEvent::Kind::AtFar);
    regs.set(kPhase, kPhaseOuter);
    const int full = 2 * (r.nu - 1);
    for (int i = 1;; ++i) {
      regs.set(kOuterI, i);
      log(PhaseEvent::Kind::OuterBegin, i);
      for (int j = 0; j <= full; ++j) {
        regs.set(kInnerJ, j);
        co_await walk(j, false, 0, 1);
        co_await walk(j, true, last_entry(), 1);
        log(PhaseEvent::Kind::PrimeBegin, i, j);
        co_await prime(i);
      }
      log(PhaseEvent::Kind::ResetBegin, i);
      co_await cross_central(1);
      for (int j = 0; j <= full; ++j) {
        regs.set(kInnerJ, j);
        co_await walk(j, false, 0, 1);
        co_await walk(j, true, last_entry(), 1);
      }
      co_await cross_central(1);
    }
  }
};

RendezvousAgent::RendezvousAgent(std::shared_ptr<const ExploOracle> oracle, ProtocolOptions options)
    : impl_(std::make_unique<Impl>(std::move(oracle), options)) {}

RendezvousAgent::~RendezvousAgent() = default;

void RendezvousAgent::bind_environment(const Tree& tree, NodeId start) {
  if (&tree != &impl_->oracle->tree() && !(tree == impl_->oracle->tree())) {
    throw InvalidInput("agent oracle was built for a different tree");
  }
  impl_->env = &impl_->oracle->tree();
  impl_->where = start;
}

Action RendezvousAgent::begin(int degree) {
  if (!impl_->env) throw InvalidInput("rendezvous agent needs bind_environment before begin");
  impl_->here = Observation{kNoPort, degree};
  impl_->body_proc.emplace(impl_->body());
  impl_->body_proc->start(impl_->driver);
  if (impl_->driver.finished) throw Error("structured program finished");
  return impl_->emit(impl_->driver.action);
}

Action RendezvousAgent::step(Observation obs) {
  return impl_->emit(detail::resume_round(impl_->driver, obs));
}

const MemoryMeter& RendezvousAgent::meter() const { return impl_->meter; }
const std::vector<PhaseEvent>& RendezvousAgent::events() const { return impl_->events; }
std::optional<ExploReport> RendezvousAgent::report() const { return impl_->report; }
std::vector<std::int64_t> RendezvousAgent::registers() const { return impl_->regs.live(); }
std::uint64_t RendezvousAgent::rounds_executed() const { return impl_->rounds; }

AgentFactory rendezvous_factory(std::shared_ptr<const ExploOracle> oracle, ProtocolOptions options) {
  return [oracle, options] { return std::make_unique<RendezvousAgent>(oracle, options); };
}

// ---------------------------------------------------------------------------

namespace {

enum LineReg : int { kLineIter, kLinePrime, kLineIdle, kLineCandidate, kLineDivisor, kLineRegCount };
constexpr std::array<const char*, kLineRegCount> kLineRegNames = {
    "iteration", "prime", "idle", "candidate", "divisor"};

}  // namespace

struct PrimeLineAgent::Impl {
  struct Round {
    Impl* self;
    Action action;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept {
      self->driver.action = action;
      self->driver.suspended = h;
    }
    void await_resume() noexcept { self->here = self->driver.obs; }
  };

  Impl(Port initial, int max_idx) : initial_port(initial), max_index(max_idx), regs(meter, kLineRegNames) {}

  detail::Driver driver;
  std::optional<Proc> body_proc;
  Port initial_port;
  int max_index;
  MemoryMeter meter;
  Registers regs;
  Observation here;

  Round go(Port p) { return Round{this, Action::depart(p)}; }
  Round idle() { return Round{this, Action::stay()}; }

  // Walks on until the next extremity, leaving by the edge not arrived by.
  Proc run_to_end(Port first, std::uint64_t speed) {
    Port out = first;
    for (;;) {
      for (std::uint64_t k = 1; k < speed; ++k) co_await idle();
      co_await go(out);
      if (here.degree != 2) co_return;
      out = 1 - here.entry;
    }
  }

  Proc body() {
    regs.set(kLineIter, 0);
    if (initial_port != kNoPort) co_await run_to_end(initial_port, 1);
    std::uint64_t p = 1;
    for (int k = 1; max_index == 0 || k <= max_index; ++k) {
      p = metered_next_prime(p, regs, kLineCandidate, kLineDivisor);
      regs.set(kLineIter, k);
      regs.set(kLinePrime, static_cast<std::int64_t>(p));
      regs.set(kLineIdle, static_cast<std::int64_t>(p - 1));
      co_await run_to_end(0, p);
      co_await run_to_end(0, p);
    }
    for (;;) co_await idle();
  }
};

PrimeLineAgent::PrimeLineAgent(Port initial_port, int max_index)
    : impl_(std::make_unique<Impl>(initial_port, max_index)) {}

PrimeLineAgent::~PrimeLineAgent() = default;

Action PrimeLineAgent::begin(int degree) {
  impl_->here = Observation{kNoPort, degree};
  impl_->body_proc.emplace(impl_->body());
  impl_->body_proc->start(impl_->driver);
  return impl_->driver.action;
}

Action PrimeLineAgent::step(Observation obs) { return detail::resume_round(impl_->driver, obs); }
const MemoryMeter& PrimeLineAgent::meter() const { return impl_->meter; }
int PrimeLineAgent::iteration() const { return static_cast<int>(impl_->regs.get(kLineIter)); }

PrimeLineResult prime_line(int m, int a, int b, LineDirection dir_a, LineDirection dir_b,
                           std::optional<int> max_index) {
  if (m < 2 || a < 1 || b > m || a >= b) throw InvalidInput("prime_line needs 1 <= a < b <= m, m >= 2");
  // make_path: node k-1 is v_k; interior port 0 leads towards v_1.
  const auto port_for = [m](int pos, LineDirection dir) -> Port {
    if (dir == LineDirection::TowardsFirst) return pos == 1 ? kNoPort : 0;
    if (pos == m) return kNoPort;
    return pos == 1 ? 0 : 1;
  };
  PrimeLineResult res;
  res.bound_index = prime_bound_index(static_cast<std::uint64_t>(m));
  const int iterations = max_index.value_or(res.bound_index);
  std::uint64_t horizon = static_cast<std::uint64_t>(m - 1);
  std::uint64_t p = 1;
  for (int k = 1; k <= iterations; ++k) {
    p = next_prime(p);
    horizon += 2 * static_cast<std::uint64_t>(m - 1) * p;
  }
  PrimeLineAgent agent_a(port_for(a, dir_a), iterations);
  PrimeLineAgent agent_b(port_for(b, dir_b), iterations);
  Scenario sc;
  sc.tree = std::make_shared<const Tree>(make_path(m));
  sc.start_a = a - 1;
  sc.start_b = b - 1;
  sc.horizon = Horizon::of(horizon + 1);
  const RunResult r = run(sc, agent_a, agent_b);
  res.bits = std::max(agent_a.meter().bits(), agent_b.meter().bits());
  if (const Met* met = r.meeting()) {
    res.met = true;
    res.round = met->round;
    res.node = met->node + 1;
    res.prime_index = std::max(agent_a.iteration(), agent_b.iteration());
  }
  return res;
}

}  // namespace rdv
