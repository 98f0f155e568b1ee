#include "vbrsim/netsim.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace vbrsim {

// ---------------------------------------------------------------- RateLimiter

RateLimiter::RateLimiter(double rate_bps, std::int64_t burst_bytes)
    : rate_bps_(rate_bps), burst_(burst_bytes), tokens_(static_cast<double>(burst_bytes)) {
  if (rate_bps < 0) throw std::invalid_argument("rate limiter rate must be >= 0");
  if (burst_bytes < 0) throw std::invalid_argument("rate limiter burst must be >= 0");
}

void RateLimiter::refill(SimTime now) {
  if (now > last_) {
    tokens_ = std::min(static_cast<double>(burst_),
                       tokens_ + rate_bps_ / 8.0 * to_seconds(now - last_));
    last_ = now;
  }
}

RateLimiter::Verdict RateLimiter::admit(std::int32_t size, SimTime now) {
  refill(now);
  if (tokens_ >= static_cast<double>(size)) {
    tokens_ -= size;
    return Verdict::Pass;
  }
  return Verdict::Drop;
}

RateLimiter::Verdict rate_limit(const Packet& packet, RateLimiter& limiter, SimTime now) {
  return limiter.admit(packet.size, now);
}

// ------------------------------------------------------------------- Topology

NodeId Topology::add_node(std::string name) {
  if (find_node(name)) throw TopologyError("duplicate node name: " + name);
  nodes_.push_back(std::move(name));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Topology::add_link(NodeId a, NodeId b, double capacity_bps, double propagation_s,
                        std::int64_t queue_bytes_ab, std::int64_t queue_bytes_ba) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw TopologyError("invalid link endpoints");
  if (!(capacity_bps > 0)) throw TopologyError("link capacity must be > 0");
  if (propagation_s < 0) throw TopologyError("propagation delay must be >= 0");
  auto make = [&](NodeId from, NodeId to, std::int64_t queue) {
    Port p;
    p.name = node_name(from) + "->" + node_name(to);
    p.owner = from;
    p.peer = to;
    p.rate_bps = capacity_bps;
    p.propagation = from_seconds(propagation_s);
    p.capacity_bytes = queue;
    ports_.push_back(std::move(p));
  };
  make(a, b, queue_bytes_ab);
  make(b, a, queue_bytes_ba);
}

int Topology::add_medium(MediumSpec spec) {
  if (!(spec.channel_bps > 0)) throw TopologyError("channel capacity must be > 0");
  const int id = static_cast<int>(media_.size());
  auto radio = [&](NodeId owner, double cap, std::int64_t queue, double weight_scale) {
    Port p;
    p.name = spec.name + ":" + node_name(owner);
    p.owner = owner;
    p.medium = id;
    p.rate_bps = cap > 0 ? std::min(cap, spec.channel_bps) : spec.channel_bps;
    p.propagation = from_seconds(spec.propagation_s);
    p.capacity_bytes = queue;
    p.weight = p.rate_bps * weight_scale;
    ports_.push_back(std::move(p));
  };
  radio(spec.access_point, spec.ap_rate_cap_bps, spec.ap_queue_bytes, spec.ap_weight_scale);
  for (const auto& s : spec.stations) radio(s.node, s.rate_cap_bps, s.queue_bytes, 1.0);
  media_.push_back(std::move(spec));
  return id;
}

void Topology::add_ingress_limiter(NodeId at, NodeId from, double rate_bps,
                                   std::int64_t burst_bytes) {
  limiters_.push_back({at, from, rate_bps, burst_bytes});
}

std::optional<NodeId> Topology::find_node(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] == name) return static_cast<NodeId>(i);
  }
  return std::nullopt;
}

NodeId Topology::node(const std::string& name) const {
  if (auto id = find_node(name)) return *id;
  throw TopologyError("unknown node: " + name);
}

int Topology::port_towards(NodeId at, NodeId peer) const {
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    const auto& p = ports_[i];
    if (p.owner != at) continue;
    if (p.medium < 0 && p.peer == peer) return static_cast<int>(i);
    if (p.medium >= 0) {
      const auto& m = media_[static_cast<std::size_t>(p.medium)];
      const bool at_is_ap = m.access_point == at;
      const bool peer_is_ap = m.access_point == peer;
      const bool peer_is_station =
          std::any_of(m.stations.begin(), m.stations.end(), [&](auto& s) { return s.node == peer; });
      if ((at_is_ap && peer_is_station) || (!at_is_ap && peer_is_ap)) return static_cast<int>(i);
    }
  }
  return -1;
}

// ---------------------------------------------------------------------- Trace

const char* to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::Emit: return "EMIT";
    case TraceEvent::Enqueue: return "ENQ";
    case TraceEvent::Drop: return "DROP";
    case TraceEvent::Deliver: return "DELIVER";
  }
  return "?";
}

void write_trace_line(std::ostream& out, const TraceRecord& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld.%09lld %d %llu %s %d %d\n",
                static_cast<long long>(r.time / kNanosPerSecond),
                static_cast<long long>(r.time % kNanosPerSecond), r.flow_id,
                static_cast<unsigned long long>(r.packet_id), to_string(r.event), r.node, r.size);
  out << buf;
}

void EventTrace::write(std::ostream& out) const {
  for (const auto& r : records) write_trace_line(out, r);
}

namespace {
std::uint64_t mix_record(std::uint64_t h, const TraceRecord& r) {
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(r.time));
  mix(static_cast<std::uint64_t>(r.flow_id));
  mix(r.packet_id);
  mix(static_cast<std::uint64_t>(r.event));
  mix(static_cast<std::uint64_t>(r.node));
  mix(static_cast<std::uint64_t>(r.size));
  return h;
}
}  // namespace

std::uint64_t EventTrace::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& r : records) h = mix_record(h, r);
  return h;
}

void HashTrace::record(const TraceRecord& r) {
  hash_ = mix_record(hash_, r);
  ++count_;
}

// --------------------------------------------------------------------- Engine

Engine::Engine(Topology topology) : topo_(std::move(topology)) {
  for (std::size_t i = 0; i < topo_.ports_.size(); ++i) {
    auto& p = topo_.ports_[i];
    if (p.capacity_bytes < 0) throw TopologyError(p.name + ": queue capacity must be >= 0");
  }
  media_.resize(topo_.media_.size());
  for (std::size_t i = 0; i < topo_.ports_.size(); ++i) {
    auto& p = topo_.ports_[i];
    if (p.medium >= 0) media_[static_cast<std::size_t>(p.medium)].radio_ports.push_back(static_cast<int>(i));
  }
  for (auto& m : media_) {
    double min_weight = 0.0;
    for (int pi : m.radio_ports) {
      const double w = topo_.ports_[static_cast<std::size_t>(pi)].weight;
      if (min_weight == 0.0 || w < min_weight) min_weight = w;
    }
    for (int pi : m.radio_ports) {
      auto& p = topo_.ports_[static_cast<std::size_t>(pi)];
      const auto& spec = topo_.media_[static_cast<std::size_t>(p.medium)];
      p.quantum = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(static_cast<double>(spec.base_quantum_bytes) * p.weight / min_weight));
    }
  }
  limiters_.reserve(topo_.limiters_.size());
  limiter_at_.assign(topo_.node_count(), std::vector<RateLimiter*>(topo_.node_count(), nullptr));
  for (const auto& l : topo_.limiters_) limiters_.emplace_back(l.rate_bps, l.burst);
  for (std::size_t i = 0; i < topo_.limiters_.size(); ++i) {
    const auto& l = topo_.limiters_[i];
    limiter_at_[static_cast<std::size_t>(l.at)][static_cast<std::size_t>(l.from)] = &limiters_[i];
  }
  compute_routes();
}

void Engine::compute_routes() {
  const std::size_t n = topo_.node_count();
  // adjacency: (neighbor, port)
  std::vector<std::vector<std::pair<NodeId, int>>> adj(n);
  for (std::size_t i = 0; i < topo_.ports_.size(); ++i) {
    const auto& p = topo_.ports_[i];
    if (p.medium < 0) {
      adj[static_cast<std::size_t>(p.owner)].push_back({p.peer, static_cast<int>(i)});
      continue;
    }
    const auto& m = topo_.media_[static_cast<std::size_t>(p.medium)];
    if (p.owner == m.access_point) {
      for (const auto& s : m.stations) adj[static_cast<std::size_t>(p.owner)].push_back({s.node, static_cast<int>(i)});
    } else {
      adj[static_cast<std::size_t>(p.owner)].push_back({m.access_point, static_cast<int>(i)});
    }
  }
  next_port_.assign(n, std::vector<int>(n, -1));
  next_node_.assign(n, std::vector<NodeId>(n, -1));
  // BFS from every source; first hop recorded per destination.
  for (std::size_t src = 0; src < n; ++src) {
    std::vector<int> first_port(n, -1);
    std::vector<NodeId> first_node(n, -1);
    std::vector<bool> seen(n, false);
    std::deque<NodeId> frontier;
    seen[src] = true;
    frontier.push_back(static_cast<NodeId>(src));
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop_front();
      for (const auto& [v, port] : adj[static_cast<std::size_t>(u)]) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        if (static_cast<std::size_t>(u) == src) {
          first_port[static_cast<std::size_t>(v)] = port;
          first_node[static_cast<std::size_t>(v)] = v;
        } else {
          first_port[static_cast<std::size_t>(v)] = first_port[static_cast<std::size_t>(u)];
          first_node[static_cast<std::size_t>(v)] = first_node[static_cast<std::size_t>(u)];
        }
        frontier.push_back(v);
      }
    }
    next_port_[src] = std::move(first_port);
    next_node_[src] = std::move(first_node);
  }
}

std::vector<NodeId> Engine::route(NodeId src, NodeId dst) const {
  std::vector<NodeId> path{src};
  NodeId at = src;
  while (at != dst) {
    const NodeId next = next_node_[static_cast<std::size_t>(at)][static_cast<std::size_t>(dst)];
    if (next < 0) return {};
    path.push_back(next);
    at = next;
  }
  return path;
}

SimTime Engine::unloaded_latency(NodeId src, NodeId dst, std::int32_t size) const {
  SimTime total = 0;
  NodeId at = src;
  while (at != dst) {
    const int port = next_port_[static_cast<std::size_t>(at)][static_cast<std::size_t>(dst)];
    if (port < 0) throw TopologyError("no route");
    const auto& p = topo_.ports_[static_cast<std::size_t>(port)];
    total += transmission_time(size, p.rate_bps) + p.propagation;
    at = next_node_[static_cast<std::size_t>(at)][static_cast<std::size_t>(dst)];
  }
  return total;
}

FlowId Engine::add_flow(std::unique_ptr<Flow> flow) {
  if (started_) throw std::logic_error("flows must be added before run()");
  flow->id_ = static_cast<FlowId>(flows_.size());
  flows_.push_back(std::move(flow));
  counters_.emplace_back();
  return flows_.back()->id_;
}

void Engine::push(Event e) {
  e.seq = next_seq_++;
  events_.push(std::move(e));
}

void Engine::schedule(SimTime at, const Flow& flow, std::uint64_t token) {
  Event e{};
  e.time = std::max(at, now_);
  e.type = EventType::Timer;
  e.index = flow.id();
  e.token = token;
  push(std::move(e));
}

void Engine::trace(TraceEvent ev, const Packet& p, NodeId node) {
  if (trace_ == nullptr) return;
  trace_->record({now_, p.flow_id, p.id, ev, node, p.size});
}

void Engine::count_drop(const Packet& p, NodeId node) {
  trace(TraceEvent::Drop, p, node);
  auto& c = counters_[static_cast<std::size_t>(p.flow_id)];
  ++c.dropped;
  c.dropped_bytes += p.size;
}

std::uint64_t Engine::send(Packet p) {
  if (p.flow_id < 0 || static_cast<std::size_t>(p.flow_id) >= flows_.size()) {
    throw std::logic_error("packet sent with unknown flow id");
  }
  if (p.size <= 0) throw std::logic_error("packet size must be positive");
  p.id = next_packet_id_++;
  p.created_at = now_;
  auto& c = counters_[static_cast<std::size_t>(p.flow_id)];
  ++c.emitted;
  c.emitted_bytes += p.size;
  trace(TraceEvent::Emit, p, p.src);
  const std::uint64_t id = p.id;
  handle_arrive(p.src, -1, std::move(p));
  return id;
}

void Engine::handle_arrive(NodeId node, NodeId from, Packet p) {
  if (from >= 0) {
    if (RateLimiter* lim = limiter_at_[static_cast<std::size_t>(node)][static_cast<std::size_t>(from)]) {
      if (lim->admit(p.size, now_) == RateLimiter::Verdict::Drop) {
        ++limiter_drops_;
        count_drop(p, node);
        return;
      }
    }
  }
  if (node == p.dst) {
    trace(TraceEvent::Deliver, p, node);
    auto& c = counters_[static_cast<std::size_t>(p.flow_id)];
    ++c.delivered;
    c.delivered_bytes += p.size;
    flows_[static_cast<std::size_t>(p.flow_id)]->on_receive(*this, p);
    return;
  }
  const int port = next_port_[static_cast<std::size_t>(node)][static_cast<std::size_t>(p.dst)];
  if (port < 0) throw TopologyError("packet has no route from " + topo_.node_name(node));
  enqueue(port, std::move(p));
}

void Engine::enqueue(int port_index, Packet p) {
  auto& port = topo_.ports_[static_cast<std::size_t>(port_index)];
  auto& q = port.state;
  ++q.arrivals;
  if (q.occupancy_bytes + p.size > port.capacity_bytes) {
    ++q.drops_total;
    count_drop(p, port.owner);
    return;
  }
  ++q.enqueues_total;
  q.occupancy_bytes += p.size;
  ++q.occupancy_packets;
  q.peak_bytes = std::max(q.peak_bytes, q.occupancy_bytes);
  trace(TraceEvent::Enqueue, p, port.owner);
  port.queue.push_back(std::move(p));
  if (port.medium >= 0) {
    auto& m = media_[static_cast<std::size_t>(port.medium)];
    if (!port.active) {
      port.active = true;
      port.deficit = 0;
      m.active.push_back(port_index);
    }
    medium_kick(port.medium);
  } else if (!port.busy) {
    start_port(port_index);
  }
}

void Engine::start_port(int port_index) {
  auto& port = topo_.ports_[static_cast<std::size_t>(port_index)];
  if (port.queue.empty()) {
    port.busy = false;
    return;
  }
  Packet p = std::move(port.queue.front());
  port.queue.pop_front();
  port.state.occupancy_bytes -= p.size;
  --port.state.occupancy_packets;
  ++port.state.departures;
  port.busy = true;
  const SimTime tx = transmission_time(p.size, port.rate_bps);
  port.busy_time += tx;
  Event e{};
  e.time = now_ + tx;
  e.type = EventType::PortDone;
  e.index = port_index;
  e.packet = std::move(p);
  push(std::move(e));
}

void Engine::port_done(int port_index, Packet p) {
  auto& port = topo_.ports_[static_cast<std::size_t>(port_index)];
  Event e{};
  e.time = now_ + port.propagation;
  e.type = EventType::Arrive;
  e.index = port.peer;
  e.from = port.owner;
  e.packet = std::move(p);
  push(std::move(e));
  start_port(port_index);
}

void Engine::medium_kick(int medium) {
  auto& m = media_[static_cast<std::size_t>(medium)];
  if (m.busy || m.active.empty()) return;

  // Deficit round robin over transmitters with backlog.
  for (;;) {
    const int pi = m.active.front();
    auto& port = topo_.ports_[static_cast<std::size_t>(pi)];
    if (m.current != pi) {
      m.current = pi;
      port.deficit += port.quantum;
    }
    const Packet& head = port.queue.front();
    if (head.size <= port.deficit) {
      Packet p = std::move(port.queue.front());
      port.queue.pop_front();
      port.deficit -= p.size;
      port.state.occupancy_bytes -= p.size;
      --port.state.occupancy_packets;
      ++port.state.departures;
      if (port.queue.empty()) {
        port.active = false;
        port.deficit = 0;
        m.active.pop_front();
        m.current = -1;
      }
      const NodeId next = next_node_[static_cast<std::size_t>(port.owner)][static_cast<std::size_t>(p.dst)];
      const SimTime tx = transmission_time(p.size, port.rate_bps);
      port.busy_time += tx;
      m.busy = true;
      m.in_flight_port = pi;
      Event e{};
      e.time = now_ + tx;
      e.type = EventType::MediumDone;
      e.index = medium;
      e.from = next;
      e.packet = std::move(p);
      push(std::move(e));
      return;
    }
    // Not enough credit: rotate to the next backlogged transmitter.
    m.active.pop_front();
    m.active.push_back(pi);
    m.current = -1;
  }
}

void Engine::medium_done(int medium) {
  auto& m = media_[static_cast<std::size_t>(medium)];
  m.busy = false;
  m.in_flight_port = -1;
  medium_kick(medium);
}

void Engine::run(SimTime duration) {
  if (started_) throw std::logic_error("Engine::run may only be called once");
  if (duration <= 0) throw std::invalid_argument("duration must be positive");
  started_ = true;
  end_ = duration;

  for (const auto& f : flows_) {
    for (const auto& [a, b] : f->endpoints()) {
      if (route(a, b).empty()) {
        throw TopologyError("flow '" + f->name() + "': " + topo_.node_name(b) +
                            " unreachable from " + topo_.node_name(a));
      }
    }
  }
  for (auto& f : flows_) f->start(*this);

  while (!events_.empty()) {
    if (events_.top().time > duration) break;
    Event e = events_.top();
    events_.pop();
    now_ = e.time;
    ++events_processed_;
    switch (e.type) {
      case EventType::Arrive:
        handle_arrive(e.index, e.from, std::move(e.packet));
        break;
      case EventType::PortDone:
        port_done(e.index, std::move(e.packet));
        break;
      case EventType::MediumDone: {
        const auto& port = topo_.ports_[static_cast<std::size_t>(media_[static_cast<std::size_t>(e.index)].in_flight_port)];
        Event arrive{};
        arrive.time = now_ + port.propagation;
        arrive.type = EventType::Arrive;
        arrive.index = e.from;
        arrive.from = port.owner;
        arrive.packet = std::move(e.packet);
        push(std::move(arrive));
        medium_done(e.index);
        break;
      }
      case EventType::Timer:
        flows_[static_cast<std::size_t>(e.index)]->on_timer(*this, e.token);
        break;
    }
  }
  now_ = duration;
  for (auto& f : flows_) f->finish(*this);
}

}  // namespace vbrsim
