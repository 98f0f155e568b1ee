#include "vbrsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "vbrsim/rng.hpp"

namespace vbrsim {

const char* to_string(FlowKind k) {
  switch (k) {
    case FlowKind::CameraStream: return "camera";
    case FlowKind::BaseLoadUdp: return "baseload";
    case FlowKind::EchoRoundtrip: return "echo";
    case FlowKind::OneWayTcpData: return "oneway_tcp";
    case FlowKind::TcpStress: return "tcp_stress";
    case FlowKind::UdpStress: return "udp_stress";
    case FlowKind::FileTransfer: return "file_transfer";
  }
  return "?";
}

std::optional<FlowKind> parse_flow_kind(const std::string& s) {
  for (auto k : {FlowKind::CameraStream, FlowKind::BaseLoadUdp, FlowKind::EchoRoundtrip,
                 FlowKind::OneWayTcpData, FlowKind::TcpStress, FlowKind::UdpStress,
                 FlowKind::FileTransfer}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

void FlowSpec::validate() const {
  auto fail = [this](const std::string& field, const std::string& why) {
    throw std::invalid_argument("flow '" + name + "' " + field + ": " + why);
  };
  if (!(start_s >= 0)) fail("start_s", "must be >= 0");
  if (!(start_s < stop_s)) fail("stop_s", "must be greater than start_s");
  const bool datagram = kind == FlowKind::EchoRoundtrip || kind == FlowKind::OneWayTcpData;
  if (datagram && (payload_size <= 0 || payload_size > kMaxDatagramPayload)) {
    fail("payload_bytes", "must be within [1, 65507]");
  }
  if (datagram && !(interval_s > 0)) fail("interval_s", "must be > 0");
  const bool rated = kind == FlowKind::BaseLoadUdp || kind == FlowKind::UdpStress ||
                     kind == FlowKind::TcpStress;
  if (rated && !(target_rate_bps >= 0)) fail("target_mbps", "must be >= 0");
  if (kind == FlowKind::FileTransfer && volume < 0) fail("volume_bytes", "must be >= 0");
}

std::vector<Fragment> fragment_datagram(std::int32_t l4_header, std::int32_t payload) {
  std::vector<Fragment> out;
  std::int32_t ip_payload = l4_header + payload;
  std::int32_t header_left = l4_header;
  while (ip_payload > 0) {
    const std::int32_t chunk = std::min(ip_payload, kIpFragmentPayload);
    const std::int32_t header_here = std::min(header_left, chunk);
    out.push_back({chunk + kIpEthOverhead, chunk - header_here});
    header_left -= header_here;
    ip_payload -= chunk;
  }
  return out;
}

double base_load_datagrams_per_second(double target_rate_bps) {
  return target_rate_bps / (8.0 * kBaseLoadDatagram);
}

namespace {

SimTime stop_time(const FlowSpec& spec, const Engine& engine) {
  if (std::isinf(spec.stop_s)) return engine.end_time();
  return std::min(from_seconds(spec.stop_s), engine.end_time());
}

class Bins {
 public:
  void add(SimTime now, std::int64_t bytes) {
    const auto bin = static_cast<std::size_t>(now / kNanosPerSecond);
    if (bins_.size() <= bin) bins_.resize(bin + 1, 0);
    bins_[bin] += bytes;
  }
  // Whole seconds only; a trailing partial second is discarded.
  std::vector<std::int64_t> whole(SimTime end) const {
    auto out = bins_;
    out.resize(static_cast<std::size_t>(end / kNanosPerSecond), 0);
    return out;
  }

 private:
  std::vector<std::int64_t> bins_;
};

FlowResult base_result(const TrafficFlow& f, const FlowSpec& spec, const Engine& engine) {
  FlowResult r;
  r.name = f.name();
  r.kind = spec.kind;
  r.id = f.id();
  r.payload_bytes = spec.payload_size;
  r.start_s = spec.start_s;
  r.stop_s = to_seconds(stop_time(spec, engine));
  r.packets = engine.counters(f.id());
  return r;
}

// -------------------------------------------------------------------- Camera

class CameraFlow final : public TrafficFlow {
 public:
  CameraFlow(FlowSpec spec, Endpoints ends, std::vector<FrameRecord> frames, int fps)
      : TrafficFlow(spec.name), spec_(std::move(spec)), ends_(ends), frames_(std::move(frames)),
        fps_(fps) {}

  std::vector<std::pair<NodeId, NodeId>> endpoints() const override {
    return {{ends_.source, ends_.sink}};
  }

  void start(Engine& e) override { schedule_frame(e, 0); }

  void on_timer(Engine& e, std::uint64_t index) override {
    const auto& frame = frames_[index];
    for (auto p : packetize(frame)) {
      p.flow_id = id();
      p.src = ends_.source;
      p.dst = ends_.sink;
      e.send(p);
      app_sent_ += p.payload;
    }
    bytes_emitted_ += frame.size;
    ++frames_emitted_;
    schedule_frame(e, index + 1);
  }

  void on_receive(Engine& e, const Packet& p) override {
    app_delivered_ += p.payload;
    bins_.add(e.now(), p.payload);
  }

  FlowResult result(const Engine& e) const override {
    FlowResult r = base_result(*this, spec_, e);
    r.sent = r.packets.emitted;
    r.delivered = r.packets.delivered;
    r.dropped = r.packets.dropped;
    r.app_bytes_sent = app_sent_;
    r.app_bytes_delivered = app_delivered_;
    r.bin_bytes = bins_.whole(e.end_time());
    if (frames_emitted_ > 0) {
      r.camera_bitrate_bps = static_cast<double>(bytes_emitted_) * 8.0 * fps_ /
                             static_cast<double>(frames_emitted_);
    }
    return r;
  }

 private:
  void schedule_frame(Engine& e, std::size_t index) {
    if (index >= frames_.size()) return;
    const SimTime at = from_seconds(spec_.start_s + frames_[index].timestamp);
    if (at >= stop_time(spec_, e)) return;
    e.schedule(at, *this, index);
  }

  FlowSpec spec_;
  Endpoints ends_;
  std::vector<FrameRecord> frames_;
  int fps_;
  std::int64_t bytes_emitted_ = 0;
  std::int64_t frames_emitted_ = 0;
  std::int64_t app_sent_ = 0;
  std::int64_t app_delivered_ = 0;
  Bins bins_;
};

// ----------------------------------------------------------------- Base load

class BaseLoadFlow final : public TrafficFlow {
 public:
  BaseLoadFlow(FlowSpec spec, Endpoints ends, std::uint64_t seed)
      : TrafficFlow(spec.name), spec_(std::move(spec)), ends_(ends), rng_(seed),
        fragments_(fragment_datagram(kUdpHeader, kBaseLoadDatagram)) {}

  std::vector<std::pair<NodeId, NodeId>> endpoints() const override {
    return {{ends_.source, ends_.sink}};
  }

  void start(Engine& e) override {
    if (!(spec_.target_rate_bps > 0)) return;
    interval_s_ = 1.0 / base_load_datagrams_per_second(spec_.target_rate_bps);
    phase_s_ = rng_.uniform(0.0, interval_s_);
    schedule_next(e);
  }

  void on_timer(Engine& e, std::uint64_t) override {
    for (std::size_t i = 0; i < fragments_.size(); ++i) {
      Packet p;
      p.flow_id = id();
      p.kind = PacketKind::BaseLoad;
      p.src = ends_.source;
      p.dst = ends_.sink;
      p.size = fragments_[i].wire_size;
      p.payload = fragments_[i].payload;
      p.seq = datagrams_;
      p.frag_index = static_cast<std::uint16_t>(i);
      p.frag_count = static_cast<std::uint16_t>(fragments_.size());
      e.send(p);
    }
    ++datagrams_;
    app_sent_ += kBaseLoadDatagram;
    schedule_next(e);
  }

  void on_receive(Engine& e, const Packet& p) override {
    app_delivered_ += p.payload;
    bins_.add(e.now(), p.payload);
  }

  FlowResult result(const Engine& e) const override {
    FlowResult r = base_result(*this, spec_, e);
    r.sent = r.packets.emitted;
    r.delivered = r.packets.delivered;
    r.dropped = r.packets.dropped;
    r.app_bytes_sent = app_sent_;
    r.app_bytes_delivered = app_delivered_;
    r.bin_bytes = bins_.whole(e.end_time());
    return r;
  }

  std::int64_t datagrams() const { return datagrams_; }

 private:
  void schedule_next(Engine& e) {
    const double t = spec_.start_s + phase_s_ + static_cast<double>(datagrams_) * interval_s_;
    const SimTime at = from_seconds(t);
    if (at >= stop_time(spec_, e)) return;
    e.schedule(at, *this, 0);
  }

  FlowSpec spec_;
  Endpoints ends_;
  Rng rng_;
  std::vector<Fragment> fragments_;
  double interval_s_ = 0.0;
  double phase_s_ = 0.0;
  std::uint64_t datagrams_ = 0;
  std::int64_t app_sent_ = 0;
  std::int64_t app_delivered_ = 0;
  Bins bins_;
};

// -------------------------------------------------------------------- Probes

// Echo and one-way TCP probes share this: a (possibly fragmented) request per
// interval, a reply from the sink once the request is reassembled. Echo
// replies mirror the request; TCP probes are answered by a bare ACK.
class ProbeFlow final : public TrafficFlow {
 public:
  ProbeFlow(FlowSpec spec, Endpoints ends, std::uint64_t seed)
      : TrafficFlow(spec.name), spec_(std::move(spec)), ends_(ends), rng_(seed) {
    const bool echo = spec_.kind == FlowKind::EchoRoundtrip;
    request_ = fragment_datagram(echo ? kIcmpHeader : kTcpHeader, spec_.payload_size);
    if (echo) {
      reply_ = fragment_datagram(kIcmpHeader, spec_.payload_size);
    } else {
      reply_ = {{kTcpAckBytes, 0}};
    }
  }

  std::vector<std::pair<NodeId, NodeId>> endpoints() const override {
    return {{ends_.source, ends_.sink}, {ends_.sink, ends_.source}};
  }

  void start(Engine& e) override {
    const double first = spec_.start_s + rng_.uniform(0.0, spec_.interval_s);
    schedule_at(e, first);
  }

  void on_timer(Engine& e, std::uint64_t) override {
    const std::uint64_t seq = probes_.size();
    ProbeRecord rec;
    rec.seq = seq;
    rec.sent_at = e.now();
    probes_.push_back(rec);
    request_frags_.push_back(0);
    reply_frags_.push_back(0);
    request_complete_.push_back(false);
    const bool echo = spec_.kind == FlowKind::EchoRoundtrip;
    for (std::size_t i = 0; i < request_.size(); ++i) {
      Packet p;
      p.flow_id = id();
      p.kind = echo ? PacketKind::Echo : PacketKind::Data;
      p.src = ends_.source;
      p.dst = ends_.sink;
      p.size = request_[i].wire_size;
      p.payload = request_[i].payload;
      p.seq = seq;
      p.frag_index = static_cast<std::uint16_t>(i);
      p.frag_count = static_cast<std::uint16_t>(request_.size());
      e.send(p);
    }
    const double jitter = 0.1 * spec_.interval_s;
    schedule_at(e, to_seconds(e.now()) + spec_.interval_s + rng_.uniform(-jitter, jitter));
  }

  void on_receive(Engine& e, const Packet& p) override {
    const auto seq = static_cast<std::size_t>(p.seq);
    if (p.kind == PacketKind::Echo || p.kind == PacketKind::Data) {
      if (++request_frags_[seq] != static_cast<int>(request_.size())) return;
      request_complete_[seq] = true;
      const bool echo = p.kind == PacketKind::Echo;
      for (std::size_t i = 0; i < reply_.size(); ++i) {
        Packet r;
        r.flow_id = id();
        r.kind = echo ? PacketKind::EchoReply : PacketKind::Ack;
        r.src = ends_.sink;
        r.dst = ends_.source;
        r.size = reply_[i].wire_size;
        r.payload = reply_[i].payload;
        r.seq = p.seq;
        r.ack = p.seq;
        r.frag_index = static_cast<std::uint16_t>(i);
        r.frag_count = static_cast<std::uint16_t>(reply_.size());
        e.send(r);
      }
      return;
    }
    if (++reply_frags_[seq] == static_cast<int>(reply_.size())) {
      auto& rec = probes_[seq];
      rec.rtt = e.now() - rec.sent_at;
      rec.outcome = rec.rtt <= from_seconds(kProbeTimeoutS) ? ProbeRecord::Outcome::Answered
                                                           : ProbeRecord::Outcome::TimedOut;
    }
  }

  void finish(Engine& e) override {
    for (auto& rec : probes_) {
      if (rec.outcome != ProbeRecord::Outcome::Pending) continue;
      if (e.end_time() - rec.sent_at < from_seconds(kProbeTimeoutS)) continue;
      rec.outcome = request_complete_[rec.seq] ? ProbeRecord::Outcome::ReplyLost
                                               : ProbeRecord::Outcome::RequestLost;
    }
  }

  FlowResult result(const Engine& e) const override {
    FlowResult r = base_result(*this, spec_, e);
    r.probes = probes_;
    for (const auto& rec : probes_) {
      if (rec.outcome == ProbeRecord::Outcome::Pending) continue;
      ++r.sent;
      r.app_bytes_sent += spec_.payload_size;
      if (rec.outcome == ProbeRecord::Outcome::Answered) {
        ++r.delivered;
        r.app_bytes_delivered += spec_.payload_size;
      } else {
        ++r.dropped;
      }
    }
    r.bin_bytes.assign(static_cast<std::size_t>(e.end_time() / kNanosPerSecond), 0);
    return r;
  }

 private:
  void schedule_at(Engine& e, double t) {
    const SimTime at = from_seconds(t);
    if (at >= stop_time(spec_, e)) return;
    e.schedule(at, *this, 0);
  }

  FlowSpec spec_;
  Endpoints ends_;
  Rng rng_;
  std::vector<Fragment> request_;
  std::vector<Fragment> reply_;
  std::vector<ProbeRecord> probes_;
  std::vector<int> request_frags_;
  std::vector<int> reply_frags_;
  std::vector<bool> request_complete_;
};

// ----------------------------------------------------------------------- TCP

// NewReno-style bulk sender plus cumulative-ACK receiver. Used for the stress
// test (unbounded data until stop) and the file transfer (fixed volume).
class TcpFlow final : public TrafficFlow {
 public:
  TcpFlow(FlowSpec spec, Endpoints ends, TcpConfig cfg)
      : TrafficFlow(spec.name), spec_(std::move(spec)), ends_(ends), cfg_(cfg),
        state_(TcpState::initial(cfg)) {
    total_ = spec_.kind == FlowKind::FileTransfer ? spec_.volume
                                                  : std::numeric_limits<std::int64_t>::max() / 4;
    stats_.min_cwnd_seen = state_.cwnd;
  }

  std::vector<std::pair<NodeId, NodeId>> endpoints() const override {
    return {{ends_.source, ends_.sink}, {ends_.sink, ends_.source}};
  }

  void start(Engine& e) override { e.schedule(from_seconds(spec_.start_s), *this, kStartToken); }

  void on_timer(Engine& e, std::uint64_t token) override {
    if (token == kStartToken) {
      started_ = true;
      if (total_ == 0) {
        completion_ = spec_.start_s;
        return;
      }
      try_send(e);
      return;
    }
    if (token != rto_generation_ || snd_una_ >= snd_max_) return;
    // Retransmission timeout: go back to the first unacknowledged byte.
    state_.in_flight = snd_max_ - snd_una_;
    state_ = tcp_on_loss(state_, LossKind::Timeout);
    note_cwnd();
    ++stats_.timeouts;
    dupacks_ = 0;
    recover_ = snd_max_;
    snd_nxt_ = snd_una_;
    try_send(e);
    arm_rto(e);
  }

  void on_receive(Engine& e, const Packet& p) override {
    if (p.kind == PacketKind::Stream) {
      receive_data(e, p);
    } else {
      receive_ack(e, p);
    }
  }

  FlowResult result(const Engine& e) const override {
    FlowResult r = base_result(*this, spec_, e);
    r.sent = r.packets.emitted;
    r.delivered = r.packets.delivered;
    r.dropped = r.packets.dropped;
    r.app_bytes_sent = snd_max_;
    r.app_bytes_delivered = rcv_nxt_;
    r.bin_bytes = bins_.whole(e.end_time());
    r.completion_s = completion_;
    r.tcp = stats_;
    return r;
  }

 private:
  static constexpr std::uint64_t kStartToken = 0;

  bool sending_allowed(const Engine& e) const {
    return started_ && e.now() < stop_time(spec_, e);
  }

  void send_segment(Engine& e, std::int64_t seq, bool retransmit) {
    const auto len = static_cast<std::int32_t>(std::min<std::int64_t>(cfg_.mss, total_ - seq));
    if (len <= 0) return;
    Packet p;
    p.flow_id = id();
    p.kind = PacketKind::Stream;
    p.src = ends_.source;
    p.dst = ends_.sink;
    p.payload = len;
    p.size = len + kTcpHeader + kIpEthOverhead;
    p.seq = static_cast<std::uint64_t>(seq);
    p.ts_echo = e.now();
    p.retransmit = retransmit;
    e.send(p);
    ++stats_.segments_sent;
    if (retransmit) ++stats_.retransmits;
  }

  void try_send(Engine& e) {
    if (!sending_allowed(e)) return;
    std::int64_t window = state_.cwnd;
    if (state_.phase == TcpPhase::Recovery) window += dupacks_ * state_.mss;
    window = std::min(window, cfg_.receive_window);
    const bool idle_before = snd_una_ == snd_max_;
    while (snd_nxt_ < total_ && snd_nxt_ - snd_una_ < window) {
      const bool rtx = snd_nxt_ < snd_max_;
      send_segment(e, snd_nxt_, rtx);
      snd_nxt_ += std::min<std::int64_t>(cfg_.mss, total_ - snd_nxt_);
      snd_max_ = std::max(snd_max_, snd_nxt_);
    }
    if (idle_before && snd_max_ > snd_una_) arm_rto(e);
  }

  void arm_rto(Engine& e) {
    ++rto_generation_;
    if (snd_una_ < snd_max_) e.schedule(e.now() + from_seconds(state_.rto), *this, rto_generation_);
  }

  void note_cwnd() { stats_.min_cwnd_seen = std::min(stats_.min_cwnd_seen, state_.cwnd); }

  void receive_data(Engine& e, const Packet& p) {
    const auto seq = static_cast<std::int64_t>(p.seq);
    if (seq == rcv_nxt_) {
      advance(e, p.payload);
      for (auto it = out_of_order_.begin(); it != out_of_order_.end() && it->first <= rcv_nxt_;) {
        const std::int64_t end = it->first + it->second;
        if (end > rcv_nxt_) advance(e, end - rcv_nxt_);
        it = out_of_order_.erase(it);
      }
    } else if (seq > rcv_nxt_) {
      out_of_order_.emplace(seq, p.payload);
    }
    Packet ack;
    ack.flow_id = id();
    ack.kind = PacketKind::Ack;
    ack.src = ends_.sink;
    ack.dst = ends_.source;
    ack.size = kTcpAckBytes;
    ack.ack = static_cast<std::uint64_t>(rcv_nxt_);
    ack.ts_echo = p.ts_echo;
    e.send(ack);
  }

  void advance(Engine& e, std::int64_t bytes) {
    rcv_nxt_ += bytes;
    bins_.add(e.now(), bytes);
    if (!completion_ && spec_.kind == FlowKind::FileTransfer && rcv_nxt_ >= total_) {
      completion_ = to_seconds(e.now());
    }
  }

  void receive_ack(Engine& e, const Packet& p) {
    const auto ack = static_cast<std::int64_t>(p.ack);
    if (ack > snd_una_) {
      const std::int64_t acked = ack - snd_una_;
      snd_una_ = ack;
      snd_nxt_ = std::max(snd_nxt_, snd_una_);
      state_ = tcp_on_rtt_sample(state_, to_seconds(e.now() - p.ts_echo));
      if (state_.phase == TcpPhase::Recovery) {
        if (ack >= recover_) {
          state_ = tcp_exit_recovery(state_);
          dupacks_ = 0;
        } else {
          // Partial ACK: the next hole is lost too.
          send_segment(e, snd_una_, true);
        }
      } else {
        state_ = tcp_on_ack(state_, acked);
        dupacks_ = 0;
      }
      state_.in_flight = snd_nxt_ - snd_una_;
      arm_rto(e);
    } else if (ack == snd_una_ && snd_max_ > snd_una_) {
      ++dupacks_;
      if (dupacks_ == 3 && state_.phase != TcpPhase::Recovery && ack >= recover_) {
        state_.in_flight = snd_max_ - snd_una_;
        state_ = tcp_on_loss(state_, LossKind::TripleDup);
        note_cwnd();
        ++stats_.fast_retransmits;
        recover_ = snd_max_;
        send_segment(e, snd_una_, true);
      }
    }
    try_send(e);
  }

  FlowSpec spec_;
  Endpoints ends_;
  TcpConfig cfg_;
  TcpState state_;
  TcpStats stats_;
  std::int64_t total_ = 0;
  bool started_ = false;

  std::int64_t snd_una_ = 0;
  std::int64_t snd_nxt_ = 0;
  std::int64_t snd_max_ = 0;
  std::int64_t recover_ = 0;
  std::int64_t dupacks_ = 0;
  std::uint64_t rto_generation_ = 0;

  std::int64_t rcv_nxt_ = 0;
  std::map<std::int64_t, std::int32_t> out_of_order_;
  Bins bins_;
  std::optional<double> completion_;
};

// ---------------------------------------------------------------- UDP stress

class UdpStressFlow final : public TrafficFlow {
 public:
  UdpStressFlow(FlowSpec spec, Endpoints ends)
      : TrafficFlow(spec.name), spec_(std::move(spec)), ends_(ends) {}

  std::vector<std::pair<NodeId, NodeId>> endpoints() const override {
    return {{ends_.source, ends_.sink}};
  }

  void start(Engine& e) override {
    if (!(spec_.target_rate_bps > 0)) return;
    interval_s_ = kUdpStressPayload * 8.0 / spec_.target_rate_bps;
    schedule_next(e);
  }

  void on_timer(Engine& e, std::uint64_t) override {
    Packet p;
    p.flow_id = id();
    p.kind = PacketKind::Stream;
    p.src = ends_.source;
    p.dst = ends_.sink;
    p.payload = kUdpStressPayload;
    p.size = kUdpStressPayload + kUdpHeader + kIpEthOverhead;
    p.seq = count_;
    e.send(p);
    ++count_;
    schedule_next(e);
  }

  void on_receive(Engine& e, const Packet& p) override {
    delivered_ += p.payload;
    bins_.add(e.now(), p.payload);
  }

  FlowResult result(const Engine& e) const override {
    FlowResult r = base_result(*this, spec_, e);
    r.sent = r.packets.emitted;
    r.delivered = r.packets.delivered;
    r.dropped = r.packets.dropped;
    r.app_bytes_sent = static_cast<std::int64_t>(count_) * kUdpStressPayload;
    r.app_bytes_delivered = delivered_;
    r.bin_bytes = bins_.whole(e.end_time());
    return r;
  }

 private:
  void schedule_next(Engine& e) {
    const SimTime at = from_seconds(spec_.start_s + static_cast<double>(count_) * interval_s_);
    if (at >= stop_time(spec_, e)) return;
    e.schedule(at, *this, 0);
  }

  FlowSpec spec_;
  Endpoints ends_;
  double interval_s_ = 0.0;
  std::uint64_t count_ = 0;
  std::int64_t delivered_ = 0;
  Bins bins_;
};

}  // namespace

std::unique_ptr<TrafficFlow> make_camera_flow(const FlowSpec& spec, Endpoints ends,
                                              std::vector<FrameRecord> frames, int fps) {
  spec.validate();
  return std::make_unique<CameraFlow>(spec, ends, std::move(frames), fps);
}

std::unique_ptr<TrafficFlow> make_base_load_flow(const FlowSpec& spec, Endpoints ends,
                                                 std::uint64_t seed) {
  spec.validate();
  return std::make_unique<BaseLoadFlow>(spec, ends, seed);
}

std::unique_ptr<TrafficFlow> make_probe_flow(const FlowSpec& spec, Endpoints ends,
                                             std::uint64_t seed) {
  spec.validate();
  if (spec.kind != FlowKind::EchoRoundtrip && spec.kind != FlowKind::OneWayTcpData) {
    throw std::invalid_argument("probe flow requires echo or oneway_tcp kind");
  }
  return std::make_unique<ProbeFlow>(spec, ends, seed);
}

std::unique_ptr<TrafficFlow> make_tcp_flow(const FlowSpec& spec, Endpoints ends,
                                           const TcpConfig& tcp) {
  spec.validate();
  if (spec.kind != FlowKind::TcpStress && spec.kind != FlowKind::FileTransfer) {
    throw std::invalid_argument("tcp flow requires tcp_stress or file_transfer kind");
  }
  return std::make_unique<TcpFlow>(spec, ends, tcp);
}

std::unique_ptr<TrafficFlow> make_udp_stress_flow(const FlowSpec& spec, Endpoints ends) {
  spec.validate();
  return std::make_unique<UdpStressFlow>(spec, ends);
}

}  // namespace vbrsim
