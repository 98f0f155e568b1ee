#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vbrsim/traffic.hpp"

namespace vbrsim {

struct RttStats {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
  std::int64_t samples = 0;
};

// Nearest-rank percentile of an ascending sample; p in (0, 100].
double nearest_rank(const std::vector<double>& sorted, double p);

// dropped / sent; absent when nothing was sent.
std::optional<double> drop_rate(const FlowResult& flow);

// Over completed probes only; absent when no probe completed.
std::optional<RttStats> rtt_stats(const FlowResult& flow);

// Mb/s of application bytes per whole second inside the flow's active window.
std::vector<double> throughput_series_mbps(const FlowResult& flow);
double mean_throughput_mbps(const FlowResult& flow);

struct FlowMetrics {
  std::string name;
  FlowKind kind = FlowKind::EchoRoundtrip;
  FlowId id = -1;
  std::int32_t payload_bytes = 0;
  std::int64_t sent = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::optional<double> drop_rate;
  std::optional<RttStats> rtt;
  std::string rtt_absent_reason;
  std::vector<double> throughput_mbps;
  double mean_throughput_mbps = 0.0;
  std::int64_t bytes_sent = 0;
  std::int64_t bytes_delivered = 0;
  FlowCounters packets;
  std::optional<double> completion_s;
  std::optional<TcpStats> tcp;
};

FlowMetrics summarize(const FlowResult& flow);

struct PortMetrics {
  std::string name;
  QueueState queue;
  double utilization = 0.0;
};

struct CameraMetrics {
  double mean_bitrate_mbps = 0.0;
  std::optional<double> baseline_bitrate_mbps;
  std::optional<double> amplification;
};

struct MetricsReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  bool attack = false;
  std::vector<FlowMetrics> flows;
  std::vector<PortMetrics> ports;
  std::optional<CameraMetrics> camera;

  const FlowMetrics* find_flow(const std::string& name) const;
  const FlowMetrics* find_kind(FlowKind kind) const;
};

// Camera mean-bitrate ratio attack / baseline. Throws std::domain_error when
// either report lacks a camera or the baseline bitrate is zero.
double amplification(const MetricsReport& attack, const MetricsReport& baseline);

}  // namespace vbrsim
