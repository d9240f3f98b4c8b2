// SPDX-License-Identifier: Apache-2.0
#include "engine.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <utility>

namespace swarmft {

SensorReading sample_temperature(Coord node, double time_ms, const std::vector<ActiveRamp>& ramps,
                                 const ExperimentConfig& cfg, Rng& noise_rng) {
  double temp = cfg.baseline_temp + noise_rng.gaussian(0.0, cfg.noise_sigma);
  for (const auto& r : ramps) {
    if (r.node == node && time_ms >= r.ramp_start_ms) {
      temp += r.ramp_rate * (time_ms - r.ramp_start_ms);
    }
  }
  return SensorReading{node, temp, time_ms};
}

bool predict_failure(const SensorReading& reading, double threshold) {
  return reading.temperature > threshold;
}

namespace {

struct Message {
  MsgType type = MsgType::Data;
  uint64_t mid = 0;
  int src_agent = 0;  // task ids >= 1, feed ids < 0, 0 = node daemon
  int dst_agent = 0;
  Coord src;
  Coord dst;
  int dep_id = 0;
  double value = 0.0;
  int round = -1;
  std::vector<double> payload;
  Coord new_loc;
  ProbeAck ack;
};

enum class TimerKind { ProbeTimeout, RebindSend, RebindAckTimeout };

struct EvDeliverB { Message msg; };
struct EvSensorTickB {};
struct EvRoundStartB { int round; };
struct EvSpawnDoneB { int agent; };
struct EvHardFailB { Coord node; };
struct EvTimerB { TimerKind kind; int agent; uint64_t gen; };

using EventBody =
    std::variant<EvDeliverB, EvSensorTickB, EvRoundStartB, EvSpawnDoneB, EvHardFailB, EvTimerB>;

struct Event {
  double t = 0.0;
  uint64_t seq = 0;
  EventBody body;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.seq > b.seq;  // FIFO for simultaneous events
  }
};

struct MigrationState {
  enum class Stage { None, WaitingRound, SpawnRequested, Transferring, Rebinding };
  Stage stage = Stage::None;
  Coord from;
  Coord target;
  double prediction_t = 0.0;
  double start_t = 0.0;
  std::vector<int> rebind_queue;
  size_t next_rebind = 0;
  int retries = 0;
};

struct AgentState {
  int id = 0;  // agent id == task id: one agent wraps one sub-task
  Coord loc;
  AgentPhase phase = AgentPhase::Idle;
  std::map<int, Coord> deps;
  std::map<int, double> inbox;
  std::vector<ProbeAck> probe_acks;
  uint64_t timer_gen = 0;
  MigrationState mig;
};

constexpr uint64_t kEventBudget = 20'000'000;

class Trial {
public:
  Trial(ExperimentConfig cfg, uint64_t seed, int trial_id, std::vector<FaultEntry> schedule)
      : cfg_(std::move(cfg)),
        seed_(seed),
        trial_id_(trial_id),
        schedule_(std::move(schedule)),
        feed_rng_(derive_seed(seed, 1)),
        decide_rng_(derive_seed(seed, 2)),
        jitter_rng_(derive_seed(seed, 3)) {}

  TrialOutcome run(TrialTrace* trace_out);

private:
  // --- setup ---------------------------------------------------------------
  void init();
  nlohmann::json build_meta() const;

  // --- event plumbing ------------------------------------------------------
  void schedule(double t, EventBody body) {
    queue_.push(Event{t, seq_++, std::move(body)});
  }
  void trace(TraceBody body) {
    if (collect_trace_) events_.push_back(TraceEvent{now_, std::move(body)});
  }
  double jitter() { return jitter_rng_.jitter(cfg_.jitter_pct); }

  int hops(Coord a, Coord b) const {
    if (a == kExternalCoord || b == kExternalCoord) return 1;
    const int d = chebyshev(a, b);
    return d < 1 ? 1 : d;
  }

  /// Sends a message through the grid. Routed messages traverse one Moore
  /// hop at a time; probes must be single-hop and are rejected otherwise.
  void send(Message msg, double extra_latency = 0.0) {
    msg.mid = ++next_mid_;
    const bool single_hop_only = msg.type == MsgType::Probe || msg.type == MsgType::Spawn;
    const int h = hops(msg.src, msg.dst);
    if (single_hop_only && h > 1) {
      trace(EvPolicyViolation{"direct send beyond the adjacency policy", msg.src, msg.dst});
      trace(EvMsgDrop{msg.type, msg.mid, "policy"});
      return;
    }
    trace(EvMsgSend{msg.type, msg.mid, msg.src_agent, msg.dst_agent, msg.src, msg.dst, msg.dep_id,
                    msg.value, msg.round, static_cast<int>(msg.payload.size()), msg.new_loc});
    const double latency = h * cfg_.hop_latency_ms * jitter() + extra_latency;
    schedule(now_ + latency, EvDeliverB{std::move(msg)});
  }

  // --- handlers ------------------------------------------------------------
  void on_sensor_tick();
  void on_round_start(int round);
  void on_deliver(Message& msg);
  void on_data(Message& msg);
  void on_probe(Message& msg);
  void on_probe_ack(Message& msg);
  void on_spawn_request(Message& msg);
  void on_spawn_done(int agent_id);
  void on_transfer(Message& msg);
  void on_rebind(Message& msg);
  void on_rebind_ack(Message& msg);
  void on_hard_fail(Coord node);
  void on_timer(const EvTimerB& tm);

  void start_protocol(AgentState& a);
  void finalize_perceive(AgentState& a);
  void begin_migration(AgentState& a);
  void schedule_next_rebind(AgentState& a);
  void send_current_rebind(AgentState& a);
  void finish_migration(AgentState& a);
  void complete_round(double root_value);
  void abort_trial(FailReason reason, const std::string& detail);

  AgentState& agent(int id) { return agents_[static_cast<size_t>(id - 1)]; }
  std::vector<int> residents_of(Coord c) const {
    auto it = residents_.find(c);
    if (it == residents_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  // --- state ---------------------------------------------------------------
  ExperimentConfig cfg_;
  uint64_t seed_;
  int trial_id_;
  std::vector<FaultEntry> schedule_;

  GridTopology grid_;
  TaskGraph graph_;
  std::vector<AgentState> agents_;
  std::map<Coord, std::set<int>> residents_;
  std::map<int, Coord> feed_registry_;  // feed id -> leaf location
  std::vector<SensorReading> latest_;   // by physical id

  struct Fault {
    FaultEntry entry;
    Coord node;
    bool materialized = false;
  };
  std::vector<Fault> faults_;
  std::vector<ActiveRamp> ramps_;
  std::map<Coord, double> predicted_at_;

  Rng feed_rng_, decide_rng_, jitter_rng_;
  std::vector<Rng> noise_rngs_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  uint64_t seq_ = 0;
  uint64_t next_mid_ = 0;
  double now_ = 0.0;
  bool done_ = false;
  bool collect_trace_ = true;

  int cur_round_ = -1;
  int pending_round_ = -1;
  int migrations_active_ = 0;
  std::set<int> pending_migrations_;

  bool failed_ = false;
  FailReason reason_ = FailReason::None;
  std::string fail_detail_;

  std::vector<TraceEvent> events_;
  TrialOutcome out_;
};

void Trial::init() {
  cfg_.resolve_grid();
  cfg_.validate();
  grid_ = GridTopology::build(cfg_.grid_rows * cfg_.grid_cols, cfg_.grid_rows, cfg_.grid_cols);
  graph_ = TaskGraph::fanin_reduction(cfg_.leaves, cfg_.fan_in);
  if (graph_.node_count() > grid_.node_count()) {
    fail(Errc::ConfigInvalid, "task graph does not fit the grid");
  }
  for (const auto& e : schedule_) {
    if (!graph_.contains(e.target_task)) {
      fail(Errc::ConfigInvalid, "fault target " + std::to_string(e.target_task) +
                                    " is not a task node of this graph");
    }
  }

  latest_.assign(static_cast<size_t>(grid_.node_count()), SensorReading{});
  noise_rngs_.reserve(grid_.node_count());
  for (int pid = 0; pid < grid_.node_count(); ++pid) {
    noise_rngs_.emplace_back(derive_seed(seed_, 1000 + static_cast<uint64_t>(pid)));
  }

  // Task node t lives on physical node t-1 (row-major placement).
  agents_.clear();
  for (int id = 1; id <= graph_.node_count(); ++id) {
    AgentState a;
    a.id = id;
    a.loc = grid_.coord_of(id - 1);
    const auto& n = graph_.node(id);
    for (int dep : n.input_deps) {
      a.deps[dep] = TaskGraph::is_feed(dep) ? kExternalCoord : grid_.coord_of(dep - 1);
    }
    if (n.output_dep) a.deps[*n.output_dep] = grid_.coord_of(*n.output_dep - 1);
    residents_[a.loc].insert(id);
    agents_.push_back(std::move(a));
  }
  for (int i = 0; i < graph_.leaf_count(); ++i) {
    feed_registry_[TaskGraph::feed_id(i)] = agent(i + 1).loc;
  }

  for (const auto& e : schedule_) {
    Fault f;
    f.entry = e;
    f.node = agent(e.target_task).loc;
    if (e.ramp_start_ms >= 0.0) {  // explicit start: active from the beginning
      ramps_.push_back(ActiveRamp{f.node, e.ramp_start_ms, e.ramp_rate});
      f.materialized = true;
    }
    faults_.push_back(f);
  }

  for (auto& a : agents_) {
    trace(EvAgentSnapshot{a.id, a.id, a.loc, a.deps});
  }

  schedule(cfg_.sensor_tick_ms, EvSensorTickB{});
  schedule(0.0, EvRoundStartB{0});
}

nlohmann::json Trial::build_meta() const {
  nlohmann::json placement = nlohmann::json::object();
  for (int id = 1; id <= graph_.node_count(); ++id) {
    const Coord c = grid_.coord_of(id - 1);
    placement[std::to_string(id)] = {c.row, c.col};
  }
  nlohmann::json sched = nlohmann::json::array();
  for (const auto& e : schedule_) {
    sched.push_back({{"target", e.target_task},
                     {"ramp_start_ms", e.ramp_start_ms},
                     {"ramp_rate", e.ramp_rate},
                     {"anchored", e.ramp_start_ms < 0.0}});
  }
  return nlohmann::json{
      {"trial_id", trial_id_},
      {"seed", seed_},
      {"topology",
       {{"rows", cfg_.grid_rows}, {"cols", cfg_.grid_cols}, {"nodes", cfg_.grid_rows * cfg_.grid_cols}}},
      {"task",
       {{"leaves", graph_.leaf_count()},
        {"fan_in", graph_.fan_in()},
        {"nodes", graph_.node_count()},
        {"levels", graph_.level_count()}}},
      {"placement", placement},
      {"schedule", sched},
      {"threshold", cfg_.threshold},
      {"grace_window_ms", cfg_.grace_window_ms},
      {"rounds", cfg_.rounds}};
}

TrialOutcome Trial::run(TrialTrace* trace_out) {
  collect_trace_ = trace_out != nullptr;
  init();
  uint64_t processed = 0;
  while (!done_ && !queue_.empty()) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.t;
    if (++processed > kEventBudget) {
      throw std::logic_error("event budget exceeded; the protocol wedged");
    }
    std::visit(
        [&](auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, EvDeliverB>) {
            on_deliver(body.msg);
          } else if constexpr (std::is_same_v<T, EvSensorTickB>) {
            on_sensor_tick();
          } else if constexpr (std::is_same_v<T, EvRoundStartB>) {
            on_round_start(body.round);
          } else if constexpr (std::is_same_v<T, EvSpawnDoneB>) {
            on_spawn_done(body.agent);
          } else if constexpr (std::is_same_v<T, EvHardFailB>) {
            on_hard_fail(body.node);
          } else if constexpr (std::is_same_v<T, EvTimerB>) {
            on_timer(body);
          }
        },
        ev.body);
  }

  out_.trial_id = trial_id_;
  out_.seed = seed_;
  out_.survived = !failed_;
  out_.reason = reason_;
  out_.fail_detail = fail_detail_;
  out_.schedule.clear();
  for (const auto& f : faults_) {
    FaultEntry e = f.entry;
    for (const auto& r : ramps_) {
      if (r.node == f.node) e.ramp_start_ms = r.ramp_start_ms;
    }
    out_.schedule.push_back(e);
  }
  if (trace_out) {
    trace_out->meta = build_meta();
    trace_out->events = std::move(events_);
  }
  return out_;
}

void Trial::on_sensor_tick() {
  if (done_) return;
  for (int pid = 0; pid < grid_.node_count(); ++pid) {
    const Coord c = grid_.coord_of(pid);
    if (grid_.status_of(pid) == NodeStatus::Failed) continue;
    const SensorReading reading = sample_temperature(c, now_, ramps_, cfg_, noise_rngs_[pid]);
    latest_[pid] = reading;
    trace(EvSensor{c, reading.temperature});
    if (grid_.status_of(pid) == NodeStatus::Healthy && predict_failure(reading, cfg_.threshold)) {
      trace(EvPrediction{c, reading.temperature});
      grid_.set_status(c, NodeStatus::PredictedFailing);
      trace(EvStatusChange{c, NodeStatus::PredictedFailing});
      predicted_at_[c] = now_;
      schedule(now_ + cfg_.grace_window_ms, EvHardFailB{c});
      for (int id : residents_of(c)) {
        start_protocol(agent(id));
      }
    }
  }
  schedule(now_ + cfg_.sensor_tick_ms, EvSensorTickB{});
}

void Trial::on_round_start(int round) {
  if (done_) return;
  cur_round_ = round;
  trace(EvRoundStart{round});

  // anchored fault ramps start with this round
  if (round == cfg_.resolved_fault_round()) {
    for (auto& f : faults_) {
      if (!f.materialized) {
        ramps_.push_back(ActiveRamp{f.node, now_, f.entry.ramp_rate});
        f.materialized = true;
      }
    }
  }

  std::vector<double> feed(static_cast<size_t>(graph_.leaf_count()));
  for (auto& v : feed) v = static_cast<double>(feed_rng_.below(1001));
  out_.round_expected.push_back(graph_.reduce_reference(feed));

  for (int i = 0; i < graph_.leaf_count(); ++i) {
    const int fid = TaskGraph::feed_id(i);
    Message m;
    m.type = MsgType::Data;
    m.src_agent = fid;
    m.dst_agent = i + 1;
    m.src = kExternalCoord;
    m.dst = feed_registry_[fid];
    m.dep_id = fid;
    m.value = feed[static_cast<size_t>(i)];
    m.round = round;
    send(std::move(m));
  }
}

void Trial::on_deliver(Message& msg) {
  if (done_) return;
  trace(EvMsgDeliver{msg.type, msg.mid, msg.dst_agent, msg.dst});
  switch (msg.type) {
    case MsgType::Data: on_data(msg); break;
    case MsgType::Probe: on_probe(msg); break;
    case MsgType::ProbeAck: on_probe_ack(msg); break;
    case MsgType::Spawn: on_spawn_request(msg); break;
    case MsgType::Transfer: on_transfer(msg); break;
    case MsgType::Rebind: on_rebind(msg); break;
    case MsgType::RebindAck: on_rebind_ack(msg); break;
  }
}

void Trial::on_data(Message& msg) {
  AgentState& a = agent(msg.dst_agent);
  if (a.loc != msg.dst) {
    trace(EvPolicyViolation{"data message addressed to a coordinate the agent does not occupy",
                            msg.src, msg.dst});
    trace(EvMsgDrop{msg.type, msg.mid, "stale coordinate"});
    return;
  }
  a.inbox[msg.dep_id] = msg.value;

  const ReductionNode& n = graph_.node(a.id);
  for (int dep : n.input_deps) {
    if (!a.inbox.count(dep)) return;  // still waiting
  }
  double value = a.inbox[n.input_deps.front()];
  for (size_t i = 1; i < n.input_deps.size(); ++i) {
    value = graph_.apply(value, a.inbox[n.input_deps[i]]);
  }
  a.inbox.clear();

  auto& data = graph_.node(a.id).data;
  data.push_back(value);
  if (static_cast<int>(data.size()) > cfg_.history_window) {
    data.erase(data.begin(), data.begin() + (static_cast<int>(data.size()) - cfg_.history_window));
  }

  if (n.output_dep) {
    Message up;
    up.type = MsgType::Data;
    up.src_agent = a.id;
    up.dst_agent = *n.output_dep;
    up.src = a.loc;
    up.dst = a.deps[*n.output_dep];
    up.dep_id = a.id;
    up.value = value;
    up.round = cur_round_;
    send(std::move(up));
  } else {
    complete_round(value);  // root yields to the trial-level sink
  }
}

void Trial::complete_round(double root_value) {
  out_.round_results.push_back(root_value);
  trace(EvRoundEnd{cur_round_, root_value, out_.round_expected[static_cast<size_t>(cur_round_)]});

  // migrations wait for the round boundary so no data is in flight
  for (int id : pending_migrations_) {
    begin_migration(agent(id));
  }
  pending_migrations_.clear();

  const int next = cur_round_ + 1;
  if (migrations_active_ > 0) {
    pending_round_ = next;
  } else if (next < cfg_.rounds) {
    schedule(now_, EvRoundStartB{next});
  } else {
    done_ = true;
  }
}

void Trial::start_protocol(AgentState& a) {
  if (a.phase != AgentPhase::Idle) return;
  a.phase = AgentPhase::Perceiving;
  a.probe_acks.clear();
  for (const Coord n : grid_.neighbors(a.loc)) {
    Message m;
    m.type = MsgType::Probe;
    m.src_agent = a.id;
    m.dst_agent = 0;
    m.src = a.loc;
    m.dst = n;
    send(std::move(m));
  }
  const uint64_t gen = ++a.timer_gen;
  schedule(now_ + cfg_.probe_timeout_ms, EvTimerB{TimerKind::ProbeTimeout, a.id, gen});
}

void Trial::on_probe(Message& msg) {
  if (grid_.status(msg.dst) == NodeStatus::Failed) {
    trace(EvMsgDrop{msg.type, msg.mid, "node failed"});
    return;  // dead nodes answer nothing
  }
  Message ack;
  ack.type = MsgType::ProbeAck;
  ack.src_agent = 0;
  ack.dst_agent = msg.src_agent;
  ack.src = msg.dst;
  ack.dst = msg.src;
  ack.ack.node = msg.dst;
  ack.ack.status = grid_.status(msg.dst);
  ack.ack.sensor = latest_[static_cast<size_t>(grid_.physical_at(msg.dst))];
  ack.ack.resident_agents = residents_of(msg.dst);
  send(std::move(ack));
}

void Trial::on_probe_ack(Message& msg) {
  AgentState& a = agent(msg.dst_agent);
  if (a.phase != AgentPhase::Perceiving) return;  // answer came after the timeout
  a.probe_acks.push_back(msg.ack);
}

void Trial::finalize_perceive(AgentState& a) {
  const SensorReading own = latest_[static_cast<size_t>(grid_.physical_at(a.loc))];
  const Perception p = assemble_perception(a.probe_acks, own, cfg_.threshold);
  trace(EvPerception{a.id, static_cast<int>(p.alive_nodes.size()),
                     static_cast<int>(p.alive_agents.size()), p.failure_predicted});
  a.phase = AgentPhase::Deciding;

  const std::vector<Coord> healthy = grid_.healthy_neighbors(a.loc);
  Coord target;
  try {
    target = decide_target(p, healthy, decide_rng_);
  } catch (const Error& e) {
    if (e.code() == Errc::NoEscapeRoute) {
      trace(EvNoEscape{a.id, a.loc});
      abort_trial(FailReason::NoEscapeRoute,
                  "agent " + std::to_string(a.id) + " has no healthy neighbor");
      return;
    }
    throw;
  }

  int candidates = 0, unoccupied = 0;
  for (const Coord c : healthy) {
    if (!p.alive_nodes.count(c)) continue;
    ++candidates;
    auto it = p.resident_counts.find(c);
    if (it == p.resident_counts.end() || it->second == 0) ++unoccupied;
  }
  trace(EvDecide{a.id, target, candidates, unoccupied});

  a.mig = MigrationState{};
  a.mig.stage = MigrationState::Stage::WaitingRound;
  a.mig.from = a.loc;
  a.mig.target = target;
  a.mig.prediction_t = predicted_at_[a.loc];
  pending_migrations_.insert(a.id);
}

void Trial::begin_migration(AgentState& a) {
  a.phase = AgentPhase::Migrating;
  a.mig.stage = MigrationState::Stage::SpawnRequested;
  a.mig.start_t = now_;
  ++migrations_active_;
  trace(EvSpawnStart{a.id, a.loc, a.mig.target});
  Message m;
  m.type = MsgType::Spawn;
  m.src_agent = a.id;
  m.dst_agent = 0;
  m.src = a.loc;
  m.dst = a.mig.target;
  send(std::move(m));
}

void Trial::on_spawn_request(Message& msg) {
  // the target may have turned unhealthy between the decision and the spawn
  if (grid_.status(msg.dst) != NodeStatus::Healthy) {
    trace(EvMsgDrop{msg.type, msg.mid, "target not healthy"});
    abort_trial(FailReason::SpawnFailed, "spawn target " + to_string(msg.dst) + " is " +
                                             to_string(grid_.status(msg.dst)));
    return;
  }
  schedule(now_ + cfg_.spawn_cost_ms * jitter(), EvSpawnDoneB{msg.src_agent});
}

void Trial::on_spawn_done(int agent_id) {
  if (done_) return;
  AgentState& a = agent(agent_id);
  if (a.mig.stage != MigrationState::Stage::SpawnRequested) return;
  trace(EvSpawnComplete{a.id, a.mig.target});
  a.mig.stage = MigrationState::Stage::Transferring;

  std::vector<double> payload = graph_.node(a.id).data;
  trace(EvTransferStart{a.id, a.loc, a.mig.target, payload});
  Message m;
  m.type = MsgType::Transfer;
  m.src_agent = a.id;
  m.dst_agent = a.id;  // the standby process at the target
  m.src = a.loc;
  m.dst = a.mig.target;
  m.payload = std::move(payload);
  const double transfer_cost =
      cfg_.transfer_cost_ms_per_value * static_cast<double>(m.payload.size()) * jitter();
  send(std::move(m), transfer_cost);
}

void Trial::on_transfer(Message& msg) {
  AgentState& a = agent(msg.dst_agent);
  if (a.mig.stage != MigrationState::Stage::Transferring) return;

  // ownership handover: the old process releases the task atomically here
  const Coord old = a.loc;
  residents_[old].erase(a.id);
  a.loc = msg.dst;
  residents_[a.loc].insert(a.id);
  graph_.node(a.id).data = msg.payload;
  trace(EvHandover{a.id, a.id, old, a.loc, std::move(msg.payload)});

  a.phase = AgentPhase::Rebinding;
  a.mig.stage = MigrationState::Stage::Rebinding;
  a.mig.rebind_queue.clear();
  const ReductionNode& n = graph_.node(a.id);
  for (int dep : n.input_deps) a.mig.rebind_queue.push_back(dep);
  if (n.output_dep) a.mig.rebind_queue.push_back(*n.output_dep);
  a.mig.next_rebind = 0;
  a.mig.retries = 0;
  schedule_next_rebind(a);
}

void Trial::schedule_next_rebind(AgentState& a) {
  if (a.mig.next_rebind >= a.mig.rebind_queue.size()) {
    finish_migration(a);
    return;
  }
  const uint64_t gen = ++a.timer_gen;
  schedule(now_ + cfg_.rebind_cost_ms_per_dep * jitter(),
           EvTimerB{TimerKind::RebindSend, a.id, gen});
}

void Trial::send_current_rebind(AgentState& a) {
  const int dep = a.mig.rebind_queue[a.mig.next_rebind];
  Message m;
  m.type = MsgType::Rebind;
  m.src_agent = a.id;
  m.dst_agent = dep;
  m.src = a.loc;
  m.dst = a.deps.at(dep);
  m.dep_id = a.id;
  m.new_loc = a.loc;
  send(std::move(m));
  const uint64_t gen = ++a.timer_gen;
  schedule(now_ + cfg_.rebind_timeout_ms, EvTimerB{TimerKind::RebindAckTimeout, a.id, gen});
}

void Trial::on_rebind(Message& msg) {
  if (msg.dst_agent < 0) {
    // external feed endpoint: the feed source learns the leaf's new location
    auto it = feed_registry_.find(msg.dst_agent);
    if (it == feed_registry_.end()) {
      fail(Errc::UnknownDependency, "rebind addressed to unknown feed " + std::to_string(msg.dst_agent));
    }
    const bool changed = it->second != msg.new_loc;
    it->second = msg.new_loc;
    trace(EvRebindApplied{msg.dst_agent, msg.dep_id, msg.new_loc, changed});
    Message ack;
    ack.type = MsgType::RebindAck;
    ack.src_agent = msg.dst_agent;
    ack.dst_agent = msg.src_agent;
    ack.src = kExternalCoord;
    ack.dst = msg.src;
    send(std::move(ack));
    return;
  }
  AgentState& d = agent(msg.dst_agent);
  const bool changed = update_knowledge(d.deps, msg.dep_id, msg.new_loc);
  trace(EvRebindApplied{d.id, msg.dep_id, msg.new_loc, changed});
  Message ack;
  ack.type = MsgType::RebindAck;
  ack.src_agent = d.id;
  ack.dst_agent = msg.src_agent;
  ack.src = d.loc;
  ack.dst = msg.src;
  send(std::move(ack));
}

void Trial::on_rebind_ack(Message& msg) {
  AgentState& a = agent(msg.dst_agent);
  if (a.mig.stage != MigrationState::Stage::Rebinding) return;
  if (a.mig.next_rebind >= a.mig.rebind_queue.size()) return;
  if (msg.src_agent != a.mig.rebind_queue[a.mig.next_rebind]) return;  // duplicate from a retry
  ++a.timer_gen;  // cancels the pending ack timeout
  ++a.mig.next_rebind;
  a.mig.retries = 0;
  schedule_next_rebind(a);
}

void Trial::finish_migration(AgentState& a) {
  MigrationRecord rec;
  rec.agent_id = a.id;
  rec.task_id = a.id;
  rec.level = graph_.node(a.id).level;
  rec.from = a.mig.from;
  rec.to = a.loc;
  rec.prediction_time = a.mig.prediction_t;
  rec.start_time = a.mig.start_t;
  rec.end_time = now_;
  rec.rebind_count = static_cast<int>(a.mig.rebind_queue.size());
  out_.migrations.push_back(rec);
  trace(EvMigrationDone{rec});
  trace(EvAgentSnapshot{a.id, a.id, a.loc, a.deps});

  a.phase = AgentPhase::Idle;
  a.mig.stage = MigrationState::Stage::None;
  --migrations_active_;

  if (rec.end_time - rec.prediction_time > cfg_.grace_window_ms) {
    abort_trial(FailReason::GraceWindowExceeded,
                "migration of agent " + std::to_string(a.id) + " finished " +
                    std::to_string(rec.end_time - rec.prediction_time) +
                    " ms after prediction, beyond the grace window");
    return;
  }

  if (migrations_active_ == 0 && pending_round_ >= 0) {
    const int r = pending_round_;
    pending_round_ = -1;
    if (r < cfg_.rounds) {
      schedule(now_, EvRoundStartB{r});
    } else {
      done_ = true;
    }
  }
}

void Trial::on_hard_fail(Coord node) {
  if (done_) return;
  if (grid_.status(node) != NodeStatus::Failed) {
    grid_.set_status(node, NodeStatus::Failed);
    trace(EvHardFail{node});
    trace(EvStatusChange{node, NodeStatus::Failed});
  }
  for (int id : residents_of(node)) {
    AgentState& a = agent(id);
    if (a.loc != node) continue;
    if (a.mig.stage == MigrationState::Stage::Transferring) {
      abort_trial(FailReason::TransferIncomplete,
                  "node " + to_string(node) + " failed while agent " + std::to_string(id) +
                      " was still transferring state");
    } else {
      abort_trial(FailReason::GraceWindowExceeded,
                  "node " + to_string(node) + " failed with agent " + std::to_string(id) +
                      " still resident");
    }
    return;
  }
}

void Trial::on_timer(const EvTimerB& tm) {
  if (done_) return;
  AgentState& a = agent(tm.agent);
  if (tm.gen != a.timer_gen) return;  // superseded
  switch (tm.kind) {
    case TimerKind::ProbeTimeout:
      if (a.phase == AgentPhase::Perceiving) finalize_perceive(a);
      break;
    case TimerKind::RebindSend:
      if (a.mig.stage == MigrationState::Stage::Rebinding) send_current_rebind(a);
      break;
    case TimerKind::RebindAckTimeout:
      if (a.mig.stage != MigrationState::Stage::Rebinding) return;
      if (a.mig.retries == 0) {
        a.mig.retries = 1;
        send_current_rebind(a);
      } else {
        abort_trial(FailReason::AckTimeout,
                    "dependency " +
                        std::to_string(a.mig.rebind_queue[a.mig.next_rebind]) +
                        " did not acknowledge the rebind after one retry");
      }
      break;
  }
}

void Trial::abort_trial(FailReason reason, const std::string& detail) {
  failed_ = true;
  reason_ = reason;
  fail_detail_ = detail;
  trace(EvTrialFail{reason, detail});
  done_ = true;
}

std::vector<FaultEntry> plan_for_single_trial(const ExperimentConfig& cfg) {
  switch (cfg.schedule_mode) {
    case ScheduleMode::None: return {};
    case ScheduleMode::File: return cfg.file_schedule;
    case ScheduleMode::Auto: {
      const auto graph = TaskGraph::fanin_reduction(cfg.leaves, cfg.fan_in);
      const auto comp = graph.computational_nodes();
      return {FaultEntry{comp.front(), -1.0, cfg.ramp_rate}};
    }
  }
  return {};
}

}  // namespace

TrialOutcome run_trial(const ExperimentConfig& cfg, uint64_t seed, int trial_id,
                       const std::vector<FaultEntry>& schedule, TrialTrace* trace) {
  Trial t(cfg, seed, trial_id, schedule);
  return t.run(trace);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, uint64_t seed) {
  ExperimentConfig c = cfg;
  c.load_schedule_file();
  c.resolve_grid();
  c.validate();
  return run_trial(c, seed, 0, plan_for_single_trial(c), nullptr);
}

int CampaignResult::failed_count() const {
  int n = 0;
  for (const auto& o : outcomes) n += o.survived ? 0 : 1;
  return n;
}

int CampaignResult::migration_count() const {
  int n = 0;
  for (const auto& o : outcomes) n += static_cast<int>(o.migrations.size());
  return n;
}

CampaignResult run_campaign(const ExperimentConfig& cfg0, const TrialObserver& observer) {
  ExperimentConfig cfg = cfg0;
  cfg.load_schedule_file();
  cfg.resolve_grid();
  cfg.validate();

  std::vector<std::vector<FaultEntry>> plans;
  switch (cfg.schedule_mode) {
    case ScheduleMode::None:
      plans.assign(static_cast<size_t>(cfg.trials), {});
      break;
    case ScheduleMode::File:
      plans.assign(static_cast<size_t>(cfg.trials), cfg.file_schedule);
      break;
    case ScheduleMode::Auto: {
      const auto graph = TaskGraph::fanin_reduction(cfg.leaves, cfg.fan_in);
      for (int node : graph.computational_nodes()) {
        for (int rep = 0; rep < cfg.trials; ++rep) {
          plans.push_back({FaultEntry{node, -1.0, cfg.ramp_rate}});
        }
      }
      break;
    }
  }

  CampaignResult res;
  res.config = cfg;
  res.outcomes.reserve(plans.size());
  for (size_t i = 0; i < plans.size(); ++i) {
    const int trial_id = static_cast<int>(i);
    const uint64_t seed = cfg.base_seed + static_cast<uint64_t>(i);
    TrialTrace trace;
    TrialOutcome out;
    try {
      out = run_trial(cfg, seed, trial_id, plans[i], observer ? &trace : nullptr);
    } catch (const Error& e) {
      out = TrialOutcome{};
      out.trial_id = trial_id;
      out.seed = seed;
      out.survived = false;
      out.fail_detail = e.what();
      out.schedule = plans[i];
    }
    if (observer) observer(out, trace);
    res.outcomes.push_back(std::move(out));
  }
  return res;
}

}  // namespace swarmft
