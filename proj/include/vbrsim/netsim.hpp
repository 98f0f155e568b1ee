#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vbrsim/packet.hpp"
#include "vbrsim/time.hpp"

namespace vbrsim {

class Engine;

enum class Duplex { Full, SharedHalf };

// Token bucket policer. Tokens are bytes; they refill continuously at `rate`.
class RateLimiter {
 public:
  RateLimiter() = default;
  RateLimiter(double rate_bps, std::int64_t burst_bytes);

  enum class Verdict { Pass, Drop };

  Verdict admit(std::int32_t size, SimTime now);

  double rate_bps() const { return rate_bps_; }
  std::int64_t burst_bytes() const { return burst_; }
  double tokens() const { return tokens_; }

 private:
  void refill(SimTime now);

  double rate_bps_ = 0.0;
  std::int64_t burst_ = 0;
  double tokens_ = 0.0;
  SimTime last_ = 0;
};

RateLimiter::Verdict rate_limit(const Packet& packet, RateLimiter& limiter, SimTime now);

struct QueueState {
  std::int64_t occupancy_bytes = 0;
  std::int64_t occupancy_packets = 0;
  std::int64_t arrivals = 0;
  std::int64_t enqueues_total = 0;
  std::int64_t drops_total = 0;
  std::int64_t departures = 0;
  std::int64_t peak_bytes = 0;
};

// One transmit queue. Wired ports serve a single peer; radio ports belong to
// a shared medium and are scheduled by it.
struct Port {
  std::string name;
  NodeId owner = -1;
  NodeId peer = -1;
  int medium = -1;
  double rate_bps = 0.0;
  SimTime propagation = 0;
  std::int64_t capacity_bytes = 0;
  double weight = 1.0;

  std::deque<Packet> queue;
  QueueState state;
  bool busy = false;
  SimTime busy_time = 0;
  std::int64_t deficit = 0;
  std::int64_t quantum = 0;
  bool active = false;
};

struct StationSpec {
  NodeId node = -1;
  double rate_cap_bps = 0.0;
  std::int64_t queue_bytes = 0;
};

// Half-duplex channel around an access point. Every hop (station->AP and
// AP->station) occupies the channel for size / rate of the transmitter.
struct MediumSpec {
  std::string name;
  NodeId access_point = -1;
  double channel_bps = 0.0;
  double propagation_s = 0.0;
  double ap_rate_cap_bps = 0.0;
  std::int64_t ap_queue_bytes = 0;
  std::vector<StationSpec> stations;
  // Deficit round robin quantum of the slowest transmitter; the others scale
  // with their weight, so equal weights mean equal packet-byte shares and
  // rate-proportional weights mean equal airtime.
  std::int64_t base_quantum_bytes = 1'600;
  // Scheduling weight of the AP relative to a station of the same rate.
  double ap_weight_scale = 1.0;
};

class Topology {
 public:
  NodeId add_node(std::string name);
  // Full-duplex link; one transmit port per direction.
  void add_link(NodeId a, NodeId b, double capacity_bps, double propagation_s,
                std::int64_t queue_bytes_ab, std::int64_t queue_bytes_ba);
  int add_medium(MediumSpec spec);
  // Policer applied to packets arriving at `at` over the link from `from`.
  void add_ingress_limiter(NodeId at, NodeId from, double rate_bps, std::int64_t burst_bytes);

  NodeId node(const std::string& name) const;
  std::optional<NodeId> find_node(const std::string& name) const;
  const std::string& node_name(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<Port>& ports() const { return ports_; }
  const std::vector<MediumSpec>& media() const { return media_; }

  // Port index used by `at` to send towards `peer`, or -1.
  int port_towards(NodeId at, NodeId peer) const;

 private:
  friend class Engine;
  std::vector<std::string> nodes_;
  std::vector<Port> ports_;
  std::vector<MediumSpec> media_;
  struct Limiter {
    NodeId at;
    NodeId from;
    double rate_bps;
    std::int64_t burst;
  };
  std::vector<Limiter> limiters_;
};

enum class TraceEvent : std::uint8_t { Emit, Enqueue, Drop, Deliver };

struct TraceRecord {
  SimTime time = 0;
  FlowId flow_id = -1;
  std::uint64_t packet_id = 0;
  TraceEvent event = TraceEvent::Emit;
  NodeId node = -1;
  std::int32_t size = 0;

  bool operator==(const TraceRecord&) const = default;
};

const char* to_string(TraceEvent e);

// `time_s flow_id packet_id event node_id size_bytes`, one record per line.
void write_trace_line(std::ostream& out, const TraceRecord& r);

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const TraceRecord& r) = 0;
};

// In-memory trace.
class EventTrace : public TraceSink {
 public:
  void record(const TraceRecord& r) override { records.push_back(r); }
  void write(std::ostream& out) const;
  std::uint64_t hash() const;

  std::vector<TraceRecord> records;
};

// Streams records to a text sink as they happen.
class StreamTrace : public TraceSink {
 public:
  explicit StreamTrace(std::ostream& out) : out_(out) {}
  void record(const TraceRecord& r) override { write_trace_line(out_, r); }

 private:
  std::ostream& out_;
};

// Rolling hash over the record stream, for determinism checks without storage.
class HashTrace : public TraceSink {
 public:
  void record(const TraceRecord& r) override;
  std::uint64_t value() const { return hash_; }
  std::int64_t count() const { return count_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
  std::int64_t count_ = 0;
};

struct FlowCounters {
  std::int64_t emitted = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t emitted_bytes = 0;
  std::int64_t delivered_bytes = 0;
  std::int64_t dropped_bytes = 0;

  std::int64_t in_flight() const { return emitted - delivered - dropped; }
};

class Flow {
 public:
  virtual ~Flow() = default;

  // (source, sink) pairs that must be mutually reachable before the run.
  virtual std::vector<std::pair<NodeId, NodeId>> endpoints() const = 0;
  virtual void start(Engine& engine) = 0;
  virtual void on_timer(Engine&, std::uint64_t /*token*/) {}
  virtual void on_receive(Engine&, const Packet&) {}
  virtual void finish(Engine&) {}

  FlowId id() const { return id_; }
  const std::string& name() const { return name_; }

 protected:
  explicit Flow(std::string name) : name_(std::move(name)) {}

 private:
  friend class Engine;
  FlowId id_ = -1;
  std::string name_;
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-threaded deterministic discrete-event engine. Events at the same
// instant run in the order they were scheduled.
class Engine {
 public:
  explicit Engine(Topology topology);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  FlowId add_flow(std::unique_ptr<Flow> flow);
  void set_trace(TraceSink* sink) { trace_ = sink; }

  // Validates reachability for every flow, then processes all events with
  // time <= duration. Throws TopologyError when a flow's sink is unreachable.
  void run(SimTime duration);

  SimTime now() const { return now_; }
  SimTime end_time() const { return end_; }

  // Emits a packet at p.src. Assigns id and creation time and returns the id.
  std::uint64_t send(Packet p);
  void schedule(SimTime at, const Flow& flow, std::uint64_t token);

  const Topology& topology() const { return topo_; }
  const std::vector<Port>& ports() const { return topo_.ports_; }
  const FlowCounters& counters(FlowId id) const { return counters_.at(static_cast<std::size_t>(id)); }
  const Flow& flow(FlowId id) const { return *flows_.at(static_cast<std::size_t>(id)); }
  Flow& flow(FlowId id) { return *flows_.at(static_cast<std::size_t>(id)); }
  std::size_t flow_count() const { return flows_.size(); }
  std::int64_t events_processed() const { return events_processed_; }
  std::int64_t limiter_drops() const { return limiter_drops_; }

  // Lower bound on one-way latency of a `size`-byte packet: serialization
  // plus propagation on every hop of the route, with empty queues.
  SimTime unloaded_latency(NodeId src, NodeId dst, std::int32_t size) const;
  std::vector<NodeId> route(NodeId src, NodeId dst) const;

 private:
  enum class EventType : std::uint8_t { Arrive, PortDone, MediumDone, Timer };

  struct Event {
    SimTime time;
    std::uint64_t seq;
    EventType type;
    std::int32_t index;   // node for Arrive, port/medium, flow for Timer
    std::int32_t from;    // previous node for Arrive
    std::uint64_t token;
    Packet packet;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  struct MediumState {
    std::vector<int> radio_ports;
    std::deque<int> active;
    bool busy = false;
    int current = -1;
    Packet in_flight;
    int in_flight_port = -1;
  };

  void push(Event e);
  void compute_routes();
  void handle_arrive(NodeId node, NodeId from, Packet p);
  void enqueue(int port, Packet p);
  void start_port(int port);
  void port_done(int port, Packet p);
  void medium_kick(int medium);
  void medium_done(int medium);
  void trace(TraceEvent e, const Packet& p, NodeId node);
  void count_drop(const Packet& p, NodeId node);

  Topology topo_;
  std::vector<std::unique_ptr<Flow>> flows_;
  std::vector<FlowCounters> counters_;
  std::vector<MediumState> media_;
  std::vector<std::vector<int>> next_port_;
  std::vector<std::vector<NodeId>> next_node_;
  std::vector<std::vector<RateLimiter*>> limiter_at_;
  std::vector<RateLimiter> limiters_;

  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_packet_id_ = 1;
  SimTime now_ = 0;
  SimTime end_ = 0;
  TraceSink* trace_ = nullptr;
  std::int64_t events_processed_ = 0;
  std::int64_t limiter_drops_ = 0;
  bool started_ = false;
};

}  // namespace vbrsim
