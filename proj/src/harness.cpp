#include "vbrsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vbrsim/rng.hpp"

namespace vbrsim {

const char* to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::Wired: return "wired";
    case TopologyKind::Wireless: return "wireless";
    case TopologyKind::WiredSegmented: return "wired_segmented";
  }
  return "?";
}

std::optional<TopologyKind> parse_topology(const std::string& s) {
  for (auto k : {TopologyKind::Wired, TopologyKind::Wireless, TopologyKind::WiredSegmented}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::HAngle: return "h_angle";
    case SweepParam::VAngle: return "v_angle";
    case SweepParam::BaseLoad: return "base_load_mbps";
    case SweepParam::PayloadSize: return "payload_size";
  }
  return "?";
}

std::optional<SweepParam> parse_sweep_param(const std::string& s) {
  for (auto p : {SweepParam::HAngle, SweepParam::VAngle, SweepParam::BaseLoad,
                 SweepParam::PayloadSize}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
  };
  if (id.empty()) fail("scenario.id", "must not be empty");
  if (!(duration_s > 0)) fail("scenario.duration_s", "must be > 0");
  if (!(network.bottleneck_mbps > 0)) fail("network.bottleneck_mbps", "must be > 0");
  if (!(base_load_mbps == 0.0 || (base_load_mbps >= 1.0 && base_load_mbps <= network.bottleneck_mbps))) {
    fail("base_load_mbps", "must be 0 or within [1, bottleneck capacity]");
  }
  if (attack.h_angle < -90 || attack.h_angle > 90) fail("attack.h_angle", "must be within [-90, 90]");
  if (attack.v_angle < -90 || attack.v_angle > 90) fail("attack.v_angle", "must be within [-90, 90]");
  if (attack.enabled && attack.flicker_hz < 2.0 * camera.fps) {
    fail("attack.flicker_hz", "must be at least twice the camera frame rate");
  }
  try {
    camera.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (mitigations.rate_limit_mbps && !(*mitigations.rate_limit_mbps > 0)) {
    fail("mitigation.rate_limit_mbps", "must be > 0");
  }
  if (mitigations.rate_limit_burst_bytes < 0) fail("mitigation.rate_limit_burst_bytes", "must be >= 0");
  const auto& n = network;
  for (auto [v, name] : {std::pair{n.access_mbps, "network.access_mbps"},
                         std::pair{n.host_link_mbps, "network.host_link_mbps"},
                         std::pair{n.channel_mbps, "network.channel_mbps"},
                         std::pair{n.nano_cap_mbps, "network.nano_cap_mbps"},
                         std::pair{n.fast_cap_mbps, "network.fast_cap_mbps"},
                         std::pair{n.ap_weight, "network.ap_weight"}}) {
    if (!(v > 0)) fail(name, "must be > 0");
  }
  if (n.ap_cap_mbps < 0) fail("network.ap_cap_mbps", "must be >= 0");
  if (n.propagation_us < 0) fail("network.propagation_us", "must be >= 0");
  for (auto [v, name] : {std::pair{n.wired_queue_bytes, "network.wired_queue_bytes"},
                         std::pair{n.wireless_queue_bytes, "network.wireless_queue_bytes"},
                         std::pair{n.station_queue_bytes, "network.station_queue_bytes"}}) {
    if (v <= 0) fail(name, "must be > 0");
  }
  std::vector<std::string> names;
  for (const auto& f : flows) {
    if (f.name.empty()) fail("flow", "name must not be empty");
    if (f.name == "camera" || f.name == "baseload") fail("flow." + f.name, "name is reserved");
    if (std::find(names.begin(), names.end(), f.name) != names.end()) {
      fail("flow." + f.name, "duplicate flow name");
    }
    names.push_back(f.name);
    if (f.kind == FlowKind::CameraStream || f.kind == FlowKind::BaseLoadUdp) {
      fail("flow." + f.name + ".kind", "camera and base-load flows come from [camera] and base_load_mbps");
    }
    try {
      f.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> out;
  const double source_link = topology == TopologyKind::Wireless ? network.fast_cap_mbps : network.access_mbps;
  if (base_load_mbps > source_link) {
    out.push_back("base_load_mbps exceeds the base-load sender's link capacity");
  }
  for (const auto& f : flows) {
    if ((f.kind == FlowKind::UdpStress || f.kind == FlowKind::TcpStress) &&
        f.target_rate_bps / 1e6 > network.access_mbps + 1e-9 && topology != TopologyKind::Wireless) {
      out.push_back("flow " + f.name + ": target rate exceeds the sender's link capacity");
    }
  }
  return out;
}

Topology build_topology(const ScenarioConfig& config) {
  const auto& n = config.network;
  const double prop = n.propagation_us * 1e-6;
  const double access = n.access_mbps * 1e6;
  const std::int64_t q = n.wired_queue_bytes;
  Topology t;
  const NodeId camera = t.add_node("camera");
  const NodeId viewer = t.add_node("viewer");
  const NodeId crit_tx = t.add_node("crit_tx");
  const NodeId crit_rx = t.add_node("crit_rx");
  const NodeId bl_tx = t.add_node("bl_tx");
  const NodeId bl_rx = t.add_node("bl_rx");

  NodeId ingress = -1;
  switch (config.topology) {
    case TopologyKind::Wired:
    case TopologyKind::WiredSegmented: {
      const NodeId sw = t.add_node("switch");
      const NodeId host = t.add_node("host");
      ingress = sw;
      t.add_link(camera, sw, access, prop, q, q);
      t.add_link(crit_tx, sw, access, prop, q, q);
      t.add_link(bl_tx, sw, access, prop, q, q);
      // The switch port that is overloaded: everything bound for the host.
      t.add_link(sw, host, n.bottleneck_mbps * 1e6, prop, q, q);
      const double fast = n.host_link_mbps * 1e6;
      t.add_link(host, crit_rx, fast, prop, q, q);
      t.add_link(host, bl_rx, fast, prop, q, q);
      if (config.topology == TopologyKind::Wired) {
        t.add_link(host, viewer, fast, prop, q, q);
      } else {
        // Camera traffic gets its own physical port and never reaches the host link.
        t.add_link(sw, viewer, access, prop, q, q);
      }
      break;
    }
    case TopologyKind::Wireless: {
      const NodeId ap = t.add_node("ap");
      ingress = ap;
      t.add_link(camera, ap, access, prop, q, q);
      MediumSpec m;
      m.name = "wlan";
      m.access_point = ap;
      m.channel_bps = n.channel_mbps * 1e6;
      m.propagation_s = prop;
      m.ap_rate_cap_bps = n.ap_cap_mbps * 1e6;
      m.ap_queue_bytes = n.wireless_queue_bytes;
      m.ap_weight_scale = n.ap_weight;
      const double nano = n.nano_cap_mbps * 1e6;
      for (NodeId s : {viewer, crit_tx, crit_rx, bl_rx}) {
        m.stations.push_back({s, nano, n.station_queue_bytes});
      }
      m.stations.push_back({bl_tx, n.fast_cap_mbps * 1e6, n.station_queue_bytes});
      t.add_medium(std::move(m));
      break;
    }
  }
  if (config.mitigations.rate_limit_mbps) {
    t.add_ingress_limiter(ingress, camera, *config.mitigations.rate_limit_mbps * 1e6,
                          config.mitigations.rate_limit_burst_bytes);
  }
  return t;
}

namespace {

class TeeTrace : public TraceSink {
 public:
  explicit TeeTrace(TraceSink* other) : other_(other) {}
  void record(const TraceRecord& r) override {
    hash_.record(r);
    if (other_ != nullptr) other_->record(r);
  }
  const HashTrace& hash() const { return hash_; }

 private:
  HashTrace hash_;
  TraceSink* other_;
};

Endpoints resolve(const Topology& t, const FlowSpec& f, const char* src, const char* dst) {
  return {t.node(f.source.empty() ? src : f.source), t.node(f.sink.empty() ? dst : f.sink)};
}

std::vector<FrameRecord> camera_frames(const ScenarioConfig& config) {
  SceneProfile profile;
  profile.rng_seed = derive_seed(config.seed, "camera");
  if (config.attack.enabled) {
    profile.kind = SceneKind::Flicker;
    profile.flicker_rate_hz = config.attack.flicker_hz;
    profile.horizontal_angle_deg = config.attack.h_angle;
    profile.vertical_angle_deg = config.attack.v_angle;
  }
  CodecParams params = config.camera;
  if (config.mitigations.cbr) params.mode = RateMode::ConstantBitrate;
  const auto scene = generate_scene(profile, config.duration_s, params.fps, config.angles);
  return encode_stream(scene, params);
}

ExperimentResult run_single(const ScenarioConfig& config, TraceSink* sink) {
  config.validate();
  ExperimentResult out;
  out.warnings = config.warnings();

  Engine engine(build_topology(config));
  const Topology& topo = engine.topology();
  TeeTrace tee(sink);
  engine.set_trace(&tee);

  std::vector<TrafficFlow*> flows;
  auto add = [&](std::unique_ptr<TrafficFlow> f) {
    flows.push_back(f.get());
    engine.add_flow(std::move(f));
  };

  FlowSpec cam;
  cam.name = "camera";
  cam.kind = FlowKind::CameraStream;
  cam.payload_size = kVideoMtuPayload;
  add(make_camera_flow(cam, {topo.node("camera"), topo.node("viewer")}, camera_frames(config),
                       config.camera.fps));

  if (config.base_load_mbps > 0) {
    FlowSpec bl;
    bl.name = "baseload";
    bl.kind = FlowKind::BaseLoadUdp;
    bl.payload_size = kBaseLoadDatagram;
    bl.target_rate_bps = config.base_load_mbps * 1e6;
    add(make_base_load_flow(bl, {topo.node("bl_tx"), topo.node("bl_rx")},
                            derive_seed(config.seed, bl.name)));
  }

  for (const auto& f : config.flows) {
    const Endpoints ends = resolve(topo, f, "crit_tx", "crit_rx");
    const std::uint64_t seed = derive_seed(config.seed, f.name);
    switch (f.kind) {
      case FlowKind::EchoRoundtrip:
      case FlowKind::OneWayTcpData:
        add(make_probe_flow(f, ends, seed));
        break;
      case FlowKind::TcpStress:
      case FlowKind::FileTransfer:
        add(make_tcp_flow(f, ends));
        break;
      case FlowKind::UdpStress:
        add(make_udp_stress_flow(f, ends));
        break;
      case FlowKind::CameraStream:
      case FlowKind::BaseLoadUdp:
        break;
    }
  }

  engine.run(from_seconds(config.duration_s));

  MetricsReport& report = out.report;
  report.scenario_id = config.id;
  report.seed = config.seed;
  report.duration_s = config.duration_s;
  report.attack = config.attack.enabled;
  for (const TrafficFlow* f : flows) {
    out.flows.push_back(f->result(engine));
    report.flows.push_back(summarize(out.flows.back()));
  }
  report.camera = CameraMetrics{out.flows.front().camera_bitrate_bps / 1e6, std::nullopt, std::nullopt};
  const double duration_ns = static_cast<double>(from_seconds(config.duration_s));
  for (const auto& p : engine.ports()) {
    report.ports.push_back({p.name, p.state, static_cast<double>(p.busy_time) / duration_ns});
  }
  out.trace_hash = tee.hash().value();
  out.trace_records = tee.hash().count();
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& config, const RunOptions& options) {
  ExperimentResult result = run_single(config, options.trace);
  if (options.paired) {
    ScenarioConfig twin = config;
    twin.attack.enabled = false;
    ExperimentResult base = run_single(twin, nullptr);
    result.baseline = std::move(base.report);
    auto& cam = *result.report.camera;
    cam.baseline_bitrate_mbps = result.baseline->camera->mean_bitrate_mbps;
    cam.amplification = amplification(result.report, *result.baseline);
  }
  return result;
}

ScenarioConfig with_parameter(ScenarioConfig config, SweepParam param, double value) {
  switch (param) {
    case SweepParam::HAngle:
      config.attack.h_angle = value;
      break;
    case SweepParam::VAngle:
      config.attack.v_angle = value;
      break;
    case SweepParam::BaseLoad:
      config.base_load_mbps = value;
      break;
    case SweepParam::PayloadSize:
      for (auto& f : config.flows) {
        if (f.kind == FlowKind::EchoRoundtrip || f.kind == FlowKind::OneWayTcpData) {
          f.payload_size = static_cast<std::int32_t>(std::lround(value));
        }
      }
      break;
  }
  return config;
}

std::vector<ExperimentResult> run_many(const std::vector<ScenarioConfig>& configs, bool paired,
                                       unsigned threads) {
  std::vector<std::optional<ExperimentResult>> slots(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, configs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        slots[i] = run_experiment(configs[i], {paired, nullptr});
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  std::vector<ExperimentResult> out;
  out.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::vector<SweepPoint> sweep(const ScenarioConfig& config, SweepParam param,
                              const std::vector<double>& values, bool paired) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<ScenarioConfig> configs;
  for (double v : values) configs.push_back(with_parameter(config, param, v));
  auto results = run_many(configs, paired);
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({values[i], std::move(results[i])});
  return out;
}

}  // namespace vbrsim
