#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vbrsim/codec.hpp"
#include "vbrsim/netsim.hpp"

namespace vbrsim {

enum class FlowKind {
  CameraStream,
  BaseLoadUdp,
  EchoRoundtrip,
  OneWayTcpData,
  TcpStress,
  UdpStress,
  FileTransfer
};

const char* to_string(FlowKind k);
std::optional<FlowKind> parse_flow_kind(const std::string& s);

inline constexpr std::int32_t kMaxDatagramPayload = 65'507;
inline constexpr std::int32_t kBaseLoadDatagram = 65'536;
inline constexpr std::int32_t kIpFragmentPayload = 1'480;
inline constexpr std::int32_t kIpEthOverhead = 34;  // IPv4 20 + Ethernet 14
inline constexpr std::int32_t kUdpHeader = 8;
inline constexpr std::int32_t kIcmpHeader = 8;
inline constexpr std::int32_t kTcpHeader = 20;
inline constexpr std::int32_t kTcpAckBytes = kTcpHeader + kIpEthOverhead;
inline constexpr std::int32_t kUdpStressPayload = 1'470;
inline constexpr double kProbeTimeoutS = 5.0;

struct FlowSpec {
  std::string name;
  FlowKind kind = FlowKind::EchoRoundtrip;
  std::string source;
  std::string sink;
  std::int32_t payload_size = 64;
  double target_rate_bps = 0.0;
  std::int64_t volume = 10'000'000;
  double start_s = 0.0;
  double stop_s = std::numeric_limits<double>::infinity();
  double interval_s = 0.1;

  // Throws std::invalid_argument naming the field.
  void validate() const;
  bool operator==(const FlowSpec&) const = default;
};

// One wire fragment of an IP datagram.
struct Fragment {
  std::int32_t wire_size = 0;
  std::int32_t payload = 0;
};

// IPv4 fragmentation of an L4 message (header + payload) at 1,480 B of IP
// payload per fragment, each fragment carrying IP and Ethernet headers.
std::vector<Fragment> fragment_datagram(std::int32_t l4_header, std::int32_t payload);

// ------------------------------------------------------------------ TCP core

enum class TcpPhase { SlowStart, CongestionAvoidance, Recovery };
enum class LossKind { TripleDup, Timeout };

struct TcpConfig {
  std::int64_t mss = 1'460;
  std::int64_t initial_cwnd_segments = 10;
  double rto_min_s = 0.2;
  double rto_max_s = 60.0;
  double rto_initial_s = 1.0;
  std::int64_t receive_window = 1 << 20;
};

struct TcpState {
  std::int64_t mss = 1'460;
  std::int64_t cwnd = 14'600;
  std::int64_t ssthresh = std::numeric_limits<std::int64_t>::max() / 4;
  double srtt = 0.0;
  double rttvar = 0.0;
  double rto = 1.0;
  double rto_min = 0.2;
  double rto_max = 60.0;
  std::int64_t in_flight = 0;
  std::int64_t acked_in_round = 0;  // byte counter for congestion avoidance
  TcpPhase phase = TcpPhase::SlowStart;
  bool has_rtt = false;

  static TcpState initial(const TcpConfig& cfg = {});
};

// Window growth for `acked_bytes` newly acknowledged: slow start adds the acked
// bytes, congestion avoidance adds one segment per cwnd of acked bytes.
TcpState tcp_on_ack(TcpState state, std::int64_t acked_bytes);
TcpState tcp_on_loss(TcpState state, LossKind kind);
TcpState tcp_on_rtt_sample(TcpState state, double rtt_s);
TcpState tcp_exit_recovery(TcpState state);

// -------------------------------------------------------------- flow results

struct ProbeRecord {
  enum class Outcome { Answered, RequestLost, ReplyLost, TimedOut, Pending };
  std::uint64_t seq = 0;
  SimTime sent_at = 0;
  SimTime rtt = 0;
  Outcome outcome = Outcome::Pending;
};

struct TcpStats {
  std::int64_t segments_sent = 0;
  std::int64_t retransmits = 0;
  std::int64_t fast_retransmits = 0;
  std::int64_t timeouts = 0;
  std::int64_t min_cwnd_seen = 0;
};

struct FlowResult {
  std::string name;
  FlowKind kind = FlowKind::EchoRoundtrip;
  FlowId id = -1;
  std::int32_t payload_bytes = 0;
  double start_s = 0.0;
  double stop_s = 0.0;

  // Engine packet counters for everything the flow put on the wire.
  FlowCounters packets;

  // Application-level units: probes for echo/one-way flows, datagrams or
  // packets otherwise. Pending probes are excluded.
  std::int64_t sent = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;

  std::int64_t app_bytes_sent = 0;
  std::int64_t app_bytes_delivered = 0;

  std::vector<ProbeRecord> probes;
  // Application bytes delivered in each whole simulation second.
  std::vector<std::int64_t> bin_bytes;

  std::optional<double> completion_s;
  double camera_bitrate_bps = 0.0;
  std::optional<TcpStats> tcp;
};

class TrafficFlow : public Flow {
 public:
  virtual FlowResult result(const Engine& engine) const = 0;

 protected:
  using Flow::Flow;
};

struct Endpoints {
  NodeId source = -1;
  NodeId sink = -1;
};

// Emits one encoded frame per frame period, every packet of a frame at the
// frame's timestamp.
std::unique_ptr<TrafficFlow> make_camera_flow(const FlowSpec& spec, Endpoints ends,
                                              std::vector<FrameRecord> frames, int fps);
// 64 KB UDP datagrams, fragmented, at target_rate (payload bits).
std::unique_ptr<TrafficFlow> make_base_load_flow(const FlowSpec& spec, Endpoints ends,
                                                 std::uint64_t seed);
std::unique_ptr<TrafficFlow> make_probe_flow(const FlowSpec& spec, Endpoints ends,
                                             std::uint64_t seed);
std::unique_ptr<TrafficFlow> make_tcp_flow(const FlowSpec& spec, Endpoints ends,
                                           const TcpConfig& tcp = {});
std::unique_ptr<TrafficFlow> make_udp_stress_flow(const FlowSpec& spec, Endpoints ends);

// Datagrams per second a base-load flow emits for `target_rate_bps` of payload.
double base_load_datagrams_per_second(double target_rate_bps);

}  // namespace vbrsim
