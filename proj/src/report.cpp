#include "vbrsim/report.hpp"

#include <cstdio>
#include <ostream>

namespace vbrsim {

namespace {

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Shortest round-trip text; empty for absent values.
std::string cell(const std::optional<double>& v) {
  if (!v) return {};
  return Json(*v).dump();
}

Json flow_json(const FlowMetrics& f) {
  Json j;
  j["name"] = f.name;
  j["kind"] = to_string(f.kind);
  j["flow_id"] = f.id;
  j["payload_bytes"] = f.payload_bytes;
  j["sent"] = f.sent;
  j["delivered"] = f.delivered;
  j["dropped"] = f.dropped;
  j["drop_rate"] = opt(f.drop_rate);
  if (f.rtt) {
    j["rtt"] = {{"mean_ms", f.rtt->mean_ms},
                {"p50_ms", f.rtt->p50_ms},
                {"p95_ms", f.rtt->p95_ms},
                {"max_ms", f.rtt->max_ms},
                {"samples", f.rtt->samples}};
  } else {
    j["rtt"] = nullptr;
    j["rtt_absent_reason"] = f.rtt_absent_reason;
  }
  j["bytes_sent"] = f.bytes_sent;
  j["bytes_delivered"] = f.bytes_delivered;
  j["mean_throughput_mbps"] = f.mean_throughput_mbps;
  j["throughput_mbps"] = f.throughput_mbps;
  j["packets"] = {{"emitted", f.packets.emitted},
                  {"delivered", f.packets.delivered},
                  {"dropped", f.packets.dropped},
                  {"in_flight", f.packets.in_flight()}};
  j["completion_s"] = opt(f.completion_s);
  if (f.tcp) {
    j["tcp"] = {{"segments_sent", f.tcp->segments_sent},
                {"retransmits", f.tcp->retransmits},
                {"fast_retransmits", f.tcp->fast_retransmits},
                {"timeouts", f.tcp->timeouts},
                {"min_cwnd_seen", f.tcp->min_cwnd_seen}};
  } else {
    j["tcp"] = nullptr;
  }
  return j;
}

}  // namespace

Json to_json(const MetricsReport& report) {
  Json j;
  j["schema"] = kReportSchema;
  j["scenario_id"] = report.scenario_id;
  j["seed"] = report.seed;
  j["duration_s"] = report.duration_s;
  j["attack"] = report.attack;
  if (report.camera) {
    j["camera"] = {{"mean_bitrate_mbps", report.camera->mean_bitrate_mbps},
                   {"baseline_bitrate_mbps", opt(report.camera->baseline_bitrate_mbps)},
                   {"amplification", opt(report.camera->amplification)}};
  } else {
    j["camera"] = nullptr;
  }
  j["flows"] = Json::array();
  for (const auto& f : report.flows) j["flows"].push_back(flow_json(f));
  j["ports"] = Json::array();
  for (const auto& p : report.ports) {
    j["ports"].push_back({{"name", p.name},
                          {"utilization", p.utilization},
                          {"arrivals", p.queue.arrivals},
                          {"enqueued", p.queue.enqueues_total},
                          {"dropped", p.queue.drops_total},
                          {"departures", p.queue.departures},
                          {"peak_bytes", p.queue.peak_bytes}});
  }
  return j;
}

Json to_json(const ExperimentResult& result) {
  Json j = to_json(result.report);
  j["trace"] = {{"records", result.trace_records}, {"hash", hex64(result.trace_hash)}};
  j["warnings"] = result.warnings;
  j["baseline"] = result.baseline ? to_json(*result.baseline) : Json(nullptr);
  return j;
}

Json to_json(const std::vector<SweepPoint>& points, SweepParam param) {
  Json j;
  j["schema"] = kSweepSchema;
  j["param"] = to_string(param);
  j["points"] = Json::array();
  for (const auto& p : points) {
    j["points"].push_back({{"value", p.value}, {"report", to_json(p.result)}});
  }
  return j;
}

void write_flow_csv(std::ostream& out, const MetricsReport& report) {
  out << "flow_id,kind,payload_bytes,sent,delivered,dropped,drop_rate,rtt_mean_ms,rtt_p95_ms,throughput_mbps\n";
  for (const auto& f : report.flows) {
    out << f.id << ',' << to_string(f.kind) << ',' << f.payload_bytes << ',' << f.sent << ','
        << f.delivered << ',' << f.dropped << ',' << cell(f.drop_rate) << ','
        << cell(f.rtt ? std::optional(f.rtt->mean_ms) : std::nullopt) << ','
        << cell(f.rtt ? std::optional(f.rtt->p95_ms) : std::nullopt) << ','
        << cell(f.mean_throughput_mbps) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points, SweepParam param) {
  out << to_string(param) << ",camera_bitrate_mbps,amplification";
  if (points.empty()) {
    out << '\n';
    return;
  }
  // Columns come from the first point; every point runs the same flow set.
  const auto& first = points.front().result.report;
  for (const auto& f : first.flows) {
    if (f.kind == FlowKind::CameraStream) continue;
    out << ',' << f.name << ".drop_rate," << f.name << ".rtt_mean_ms," << f.name << ".rtt_p95_ms," << f.name
        << ".throughput_mbps";
  }
  out << '\n';
  for (const auto& p : points) {
    const auto& r = p.result.report;
    out << cell(p.value) << ',' << cell(r.camera ? std::optional(r.camera->mean_bitrate_mbps) : std::nullopt)
        << ',' << cell(r.camera ? r.camera->amplification : std::nullopt);
    for (const auto& f : r.flows) {
      if (f.kind == FlowKind::CameraStream) continue;
      out << ',' << cell(f.drop_rate) << ',' << cell(f.rtt ? std::optional(f.rtt->mean_ms) : std::nullopt) << ','
          << cell(f.rtt ? std::optional(f.rtt->p95_ms) : std::nullopt) << ',' << cell(f.mean_throughput_mbps);
    }
    out << '\n';
  }
}

}  // namespace vbrsim
