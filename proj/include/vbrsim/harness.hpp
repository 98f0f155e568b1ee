#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vbrsim/codec.hpp"
#include "vbrsim/metrics.hpp"
#include "vbrsim/netsim.hpp"
#include "vbrsim/scene.hpp"
#include "vbrsim/traffic.hpp"

namespace vbrsim {

enum class TopologyKind { Wired, Wireless, WiredSegmented };

const char* to_string(TopologyKind k);
std::optional<TopologyKind> parse_topology(const std::string& s);

struct AttackConfig {
  bool enabled = false;
  double h_angle = 0.0;
  double v_angle = 0.0;
  double flicker_hz = 500.0;
  bool operator==(const AttackConfig&) const = default;
};

struct MitigationConfig {
  std::optional<double> rate_limit_mbps;
  std::int64_t rate_limit_burst_bytes = 131'072;
  bool cbr = false;
  bool operator==(const MitigationConfig&) const = default;
};

// Device and link parameters. The bottleneck capacity has no default and
// must be stated by every scenario.
struct NetworkConfig {
  double bottleneck_mbps = 0.0;
  double access_mbps = 100.0;
  double host_link_mbps = 1'000.0;
  double propagation_us = 50.0;
  std::int64_t wired_queue_bytes = 262'144;
  std::int64_t wireless_queue_bytes = 524'288;
  std::int64_t station_queue_bytes = 262'144;
  double channel_mbps = 60.0;
  double nano_cap_mbps = 8.0;
  double fast_cap_mbps = 40.0;
  double ap_cap_mbps = 0.0;  // 0: transmit at channel rate
  double ap_weight = 1.0;
  bool operator==(const NetworkConfig&) const = default;
};

struct ScenarioConfig {
  std::string id;
  TopologyKind topology = TopologyKind::Wired;
  double base_load_mbps = 0.0;
  AttackConfig attack;
  CodecParams camera;
  std::vector<FlowSpec> flows;
  MitigationConfig mitigations;
  NetworkConfig network;
  AngleModel angles;
  double duration_s = 0.0;
  std::uint64_t seed = 1;

  // Throws ConfigError naming the offending field.
  void validate() const;
  // Scenario warnings that do not prevent a run.
  std::vector<std::string> warnings() const;
  bool operator==(const ScenarioConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Line-oriented `[section]` / `key = value` format; unknown keys are errors.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const ScenarioConfig& config);

// Topology with the node names flows refer to: camera, viewer, crit_tx,
// crit_rx, bl_tx, bl_rx, plus switch/host (wired) or ap (wireless).
Topology build_topology(const ScenarioConfig& config);

struct RunOptions {
  bool paired = false;
  TraceSink* trace = nullptr;
};

struct ExperimentResult {
  MetricsReport report;
  std::optional<MetricsReport> baseline;
  std::vector<FlowResult> flows;
  std::uint64_t trace_hash = 0;
  std::int64_t trace_records = 0;
  std::vector<std::string> warnings;
};

// Builds the topology and flows, runs the engine and summarizes. With
// `paired`, an attack-off twin with the same seed supplies the baseline
// camera bitrate for the amplification factor.
ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options = {});

enum class SweepParam { HAngle, VAngle, BaseLoad, PayloadSize };
std::optional<SweepParam> parse_sweep_param(const std::string& s);
const char* to_string(SweepParam p);

ScenarioConfig with_parameter(ScenarioConfig config, SweepParam param, double value);

struct SweepPoint {
  double value = 0.0;
  ExperimentResult result;
};

std::vector<SweepPoint> sweep(const ScenarioConfig& config, SweepParam param,
                              const std::vector<double>& values, bool paired = false);

// Runs independent scenarios on a thread pool; results keep input order.
std::vector<ExperimentResult> run_many(const std::vector<ScenarioConfig>& configs,
                                       bool paired = false, unsigned threads = 0);

}  // namespace vbrsim
