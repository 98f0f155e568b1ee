#include "vbrsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vbrsim {

double nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("nearest_rank of empty sample");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::optional<double> drop_rate(const FlowResult& flow) {
  if (flow.sent <= 0) return std::nullopt;
  return static_cast<double>(flow.dropped) / static_cast<double>(flow.sent);
}

std::optional<RttStats> rtt_stats(const FlowResult& flow) {
  std::vector<double> ms;
  for (const auto& p : flow.probes) {
    if (p.outcome == ProbeRecord::Outcome::Answered) ms.push_back(to_millis(p.rtt));
  }
  if (ms.empty()) return std::nullopt;
  std::sort(ms.begin(), ms.end());
  RttStats s;
  s.samples = static_cast<std::int64_t>(ms.size());
  s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  s.p50_ms = nearest_rank(ms, 50.0);
  s.p95_ms = nearest_rank(ms, 95.0);
  s.max_ms = ms.back();
  return s;
}

std::vector<double> throughput_series_mbps(const FlowResult& flow) {
  std::vector<double> out;
  const auto first = static_cast<std::size_t>(std::ceil(flow.start_s - 1e-9));
  const auto last = static_cast<std::size_t>(std::floor(flow.stop_s + 1e-9));
  for (std::size_t s = first; s < last && s < flow.bin_bytes.size(); ++s) {
    out.push_back(static_cast<double>(flow.bin_bytes[s]) * 8.0 / 1e6);
  }
  return out;
}

double mean_throughput_mbps(const FlowResult& flow) {
  const auto series = throughput_series_mbps(flow);
  if (series.empty()) return 0.0;
  return std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
}

FlowMetrics summarize(const FlowResult& flow) {
  FlowMetrics m;
  m.name = flow.name;
  m.kind = flow.kind;
  m.id = flow.id;
  m.payload_bytes = flow.payload_bytes;
  m.sent = flow.sent;
  m.delivered = flow.delivered;
  m.dropped = flow.dropped;
  m.drop_rate = drop_rate(flow);
  const bool probe = flow.kind == FlowKind::EchoRoundtrip || flow.kind == FlowKind::OneWayTcpData;
  if (probe) {
    m.rtt = rtt_stats(flow);
    if (!m.rtt) m.rtt_absent_reason = flow.sent == 0 ? "no probes sent" : "no completed probes";
  } else {
    m.rtt_absent_reason = "not a probe flow";
  }
  m.throughput_mbps = throughput_series_mbps(flow);
  m.mean_throughput_mbps = mean_throughput_mbps(flow);
  m.bytes_sent = flow.app_bytes_sent;
  m.bytes_delivered = flow.app_bytes_delivered;
  m.packets = flow.packets;
  m.completion_s = flow.completion_s;
  m.tcp = flow.tcp;
  return m;
}

const FlowMetrics* MetricsReport::find_flow(const std::string& name) const {
  for (const auto& f : flows) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const FlowMetrics* MetricsReport::find_kind(FlowKind kind) const {
  for (const auto& f : flows) {
    if (f.kind == kind) return &f;
  }
  return nullptr;
}

double amplification(const MetricsReport& attack, const MetricsReport& baseline) {
  if (!attack.camera || !baseline.camera) throw std::domain_error("report has no camera flow");
  if (!(baseline.camera->mean_bitrate_mbps > 0)) {
    throw std::domain_error("baseline camera bitrate is zero");
  }
  return attack.camera->mean_bitrate_mbps / baseline.camera->mean_bitrate_mbps;
}

}  // namespace vbrsim
