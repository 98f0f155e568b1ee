#include "vbrsim/presets.hpp"

#include <cstdio>

namespace vbrsim {

namespace {

std::string load_label(double mbps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", mbps);
  return buf;
}

ScenarioConfig make(TopologyKind topology, double base_load) {
  ScenarioConfig c;
  c.topology = topology;
  c.id = std::string(to_string(topology)) + "-" + load_label(base_load);
  for (char& ch : c.id) {
    if (ch == '_') ch = '-';
  }
  c.duration_s = 60.0;
  c.seed = 1;
  c.base_load_mbps = base_load;
  c.attack.enabled = true;
  c.network.bottleneck_mbps = 100.0;

  FlowSpec echo;
  echo.name = "echo";
  echo.kind = FlowKind::EchoRoundtrip;
  echo.payload_size = 64;
  FlowSpec oneway = echo;
  oneway.name = "oneway";
  oneway.kind = FlowKind::OneWayTcpData;
  c.flows = {echo, oneway};
  return c;
}

std::vector<ScenarioConfig> all() {
  std::vector<ScenarioConfig> out;
  for (double bl : kWiredBaseLoadsMbps) out.push_back(make(TopologyKind::Wired, bl));
  for (double bl : kWirelessBaseLoadsMbps) out.push_back(make(TopologyKind::Wireless, bl));
  out.push_back(make(TopologyKind::WiredSegmented, 89.6));
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& c : all()) names.push_back(c.id);
  return names;
}

std::optional<ScenarioConfig> preset(const std::string& name) {
  for (auto& c : all()) {
    if (c.id == name) return c;
  }
  return std::nullopt;
}

}  // namespace vbrsim
