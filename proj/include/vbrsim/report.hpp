#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbrsim/harness.hpp"

namespace vbrsim {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "vbrsim.report/1";
inline constexpr const char* kSweepSchema = "vbrsim.sweep/1";

Json to_json(const MetricsReport& report);
// Adds trace totals and, for paired runs, the baseline report.
Json to_json(const ExperimentResult& result);
Json to_json(const std::vector<SweepPoint>& points, SweepParam param);

// flow_id,kind,payload_bytes,sent,delivered,dropped,drop_rate,rtt_mean_ms,rtt_p95_ms,throughput_mbps
void write_flow_csv(std::ostream& out, const MetricsReport& report);

// One row per sweep point; per-flow columns are prefixed with the flow name.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points, SweepParam param);

}  // namespace vbrsim
