#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "vbrsim/check.hpp"
#include "vbrsim/presets.hpp"
#include "vbrsim/report.hpp"

using namespace vbrsim;

namespace {

const char* kMinimal = R"(
# smallest valid scenario
[scenario]
id = tiny
duration_s = 3

[network]
bottleneck_mbps = 100

[flow ping]
kind = echo
)";

ScenarioConfig short_wired(double base_load, bool attack, double seconds = 6.0) {
  auto c = *preset("wired-83.2");
  c.base_load_mbps = base_load;
  c.attack.enabled = attack;
  c.duration_s = seconds;
  return c;
}

void expect_config_error(const std::string& text, const std::string& fragment, int line = -1) {
  try {
    parse_scenario(text);
    ADD_FAILURE() << "no error for: " << fragment;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    if (line >= 0) EXPECT_EQ(e.line(), line) << e.what();
  }
}

}  // namespace

TEST(Config, MinimalScenarioTakesDefaults) {
  const auto c = parse_scenario(kMinimal);
  EXPECT_EQ(c.id, "tiny");
  EXPECT_EQ(c.topology, TopologyKind::Wired);
  EXPECT_EQ(c.duration_s, 3.0);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_FALSE(c.attack.enabled);
  EXPECT_EQ(c.camera, CodecParams{});
  ASSERT_EQ(c.flows.size(), 1u);
  EXPECT_EQ(c.flows[0].name, "ping");
  EXPECT_EQ(c.flows[0].kind, FlowKind::EchoRoundtrip);
}

TEST(Config, EveryPresetRoundTrips) {
  for (const auto& name : preset_names()) {
    const auto c = *preset(name);
    EXPECT_EQ(parse_scenario(serialize_scenario(c)), c) << name;
  }
}

TEST(Config, RoundTripKeepsOptionalAndUnusualValues) {
  auto c = short_wired(86.4, true);
  c.mitigations.rate_limit_mbps = 4.0;
  c.mitigations.cbr = true;
  c.attack.h_angle = 0.1 + 0.2;  // not exactly representable in short decimal
  FlowSpec f;
  f.name = "bulk";
  f.kind = FlowKind::FileTransfer;
  f.volume = 123'456'789;
  f.start_s = 2.5;
  f.stop_s = 40.0;
  c.flows.push_back(f);
  EXPECT_EQ(parse_scenario(serialize_scenario(c)), c);
}

TEST(Config, PresetFilesMatchBuiltins) {
  for (const auto& name : preset_names()) {
    const auto path = std::filesystem::path(VBRSIM_PRESETS) / (name + ".ini");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(load_scenario(path), *preset(name)) << name;
  }
}

TEST(Config, Errors) {
  const std::string head = "[scenario]\nid = x\nduration_s = 1\n[network]\nbottleneck_mbps = 100\n";
  expect_config_error(head + "[bogus]\n", "unknown section", 6);
  expect_config_error(head + "colour = red\n", "unknown key network.colour", 6);
  expect_config_error(head + "bottleneck_mbps = 50\n", "duplicate key", 6);
  expect_config_error(head + "[network]\n", "duplicate section", 6);
  expect_config_error(head + "[flow a]\nkind = echo\n[flow a]\n", "duplicate flow", 8);
  expect_config_error(head + "[flow a]\npayload_bytes = 10\n", "flow.a.kind: required");
  expect_config_error(head + "[flow a]\nkind = smoke_signal\n", "unknown flow kind", 7);
  expect_config_error(head + "[flow a]\nkind = echo\npayload_bytes = 70000\n", "payload_bytes");
  expect_config_error(head + "[attack]\nenabled = maybe\n", "expected true or false", 7);
  expect_config_error(head + "[camera]\nfps = sixty\n", "expected an integer", 7);
  expect_config_error("[scenario]\nid = x\nduration_s = 1\n", "network.bottleneck_mbps: required");
  expect_config_error("[network]\nbottleneck_mbps = 1\n[scenario]\nid = x\n", "scenario.duration_s: required");
  expect_config_error(head + "[scenario]\n", "duplicate section");
  expect_config_error("id = x\n", "outside any section", 1);
  expect_config_error(head + "[scenario\n", "malformed section", 6);
  expect_config_error(head + "[flow camera]\nkind = echo\n", "reserved");
  expect_config_error(head + "[flow b]\nkind = camera\n", "come from [camera]");
  auto over = head;
  over.insert(over.find("duration_s"), "base_load_mbps = 120\n");
  expect_config_error(over, "base_load_mbps");
  EXPECT_THROW(load_scenario("/nonexistent/scenario.ini"), ConfigError);
}

TEST(Config, CommentsAndBooleanSpellings) {
  const auto c = parse_scenario(std::string(kMinimal) + "; another comment\n[attack]\nenabled = on\n[mitigation]\ncbr = yes\n");
  EXPECT_TRUE(c.attack.enabled);
  EXPECT_TRUE(c.mitigations.cbr);
}

TEST(Config, WarningsForOverdrivenSenders) {
  auto c = short_wired(0, false);
  EXPECT_TRUE(c.warnings().empty());
  FlowSpec f;
  f.name = "blast";
  f.kind = FlowKind::UdpStress;
  f.target_rate_bps = 150e6;
  c.flows.push_back(f);
  EXPECT_EQ(c.warnings().size(), 1u);
}

TEST(Presets, Names) {
  EXPECT_EQ(preset_names(), (std::vector<std::string>{"wired-83.2", "wired-86.4", "wired-89.6", "wireless-22.4",
                                                      "wireless-25.6", "wireless-28.8", "wired-segmented-89.6"}));
  EXPECT_FALSE(preset("wired-1.0"));
  const auto w = *preset("wireless-25.6");
  EXPECT_EQ(w.topology, TopologyKind::Wireless);
  EXPECT_EQ(w.base_load_mbps, 25.6);
  EXPECT_TRUE(w.attack.enabled);
}

TEST(Topology, NodeNamesForFlows) {
  for (auto kind : {TopologyKind::Wired, TopologyKind::Wireless, TopologyKind::WiredSegmented}) {
    auto c = short_wired(0, false);
    c.topology = kind;
    const auto t = build_topology(c);
    for (const char* n : {"camera", "viewer", "crit_tx", "crit_rx", "bl_tx", "bl_rx"}) {
      EXPECT_TRUE(t.find_node(n).has_value()) << n;
    }
  }
}

TEST(Experiment, SameSeedSameEverything) {
  const auto c = short_wired(83.2, true);
  const auto a = run_experiment(c, {true, nullptr});
  const auto b = run_experiment(c, {true, nullptr});
  EXPECT_EQ(a.trace_hash, b.trace_hash);
  EXPECT_EQ(a.trace_records, b.trace_records);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Experiment, SeedChangesTheRun) {
  auto c = short_wired(83.2, true);
  const auto a = run_experiment(c);
  c.seed = 2;
  const auto b = run_experiment(c);
  EXPECT_NE(a.trace_hash, b.trace_hash);
}

TEST(Experiment, TraceSinkSeesWhatTheHashSummarizes) {
  const auto c = short_wired(20, true, 2.0);
  EventTrace trace;
  const auto r = run_experiment(c, {false, &trace});
  EXPECT_EQ(static_cast<std::int64_t>(trace.records.size()), r.trace_records);
  EXPECT_EQ(trace.hash(), r.trace_hash);
}

TEST(Experiment, PairedRunReportsAmplification) {
  const auto r = run_experiment(short_wired(0, true), {true, nullptr});
  ASSERT_TRUE(r.baseline.has_value());
  EXPECT_FALSE(r.baseline->attack);
  ASSERT_TRUE(r.report.camera->amplification.has_value());
  EXPECT_NEAR(*r.report.camera->amplification,
              r.report.camera->mean_bitrate_mbps / r.baseline->camera->mean_bitrate_mbps, 1e-12);
  EXPECT_GE(*r.report.camera->amplification, 5.0);
}

TEST(Experiment, CountersBalance) {
  const auto r = run_experiment(short_wired(89.6, true));
  for (const auto& f : r.report.flows) {
    EXPECT_EQ(f.packets.emitted, f.packets.delivered + f.packets.dropped + f.packets.in_flight()) << f.name;
    EXPECT_GE(f.packets.in_flight(), 0) << f.name;
  }
  for (const auto& p : r.report.ports) {
    EXPECT_EQ(p.queue.arrivals, p.queue.enqueues_total + p.queue.drops_total) << p.name;
    EXPECT_LE(p.utilization, 1.0 + 1e-9) << p.name;
  }
}

TEST(Experiment, RunManyMatchesSequentialRuns) {
  std::vector<ScenarioConfig> configs{short_wired(83.2, true, 3), short_wired(0, false, 3), short_wired(89.6, true, 3)};
  const auto many = run_many(configs, false, 3);
  ASSERT_EQ(many.size(), configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    EXPECT_EQ(many[i].trace_hash, run_experiment(configs[i]).trace_hash) << i;
  }
}

TEST(Sweep, ParameterApplication) {
  const auto c = short_wired(0, true);
  EXPECT_EQ(with_parameter(c, SweepParam::HAngle, 30).attack.h_angle, 30);
  EXPECT_EQ(with_parameter(c, SweepParam::VAngle, 50).attack.v_angle, 50);
  EXPECT_EQ(with_parameter(c, SweepParam::BaseLoad, 86.4).base_load_mbps, 86.4);
  for (const auto& f : with_parameter(c, SweepParam::PayloadSize, 1'400).flows) EXPECT_EQ(f.payload_size, 1'400);
  EXPECT_EQ(parse_sweep_param("payload_size"), SweepParam::PayloadSize);
  EXPECT_FALSE(parse_sweep_param("colour"));
  EXPECT_THROW(sweep(c, SweepParam::HAngle, {}), std::invalid_argument);
}

TEST(Sweep, VerticalCutoffRemovesTheAttack) {
  const auto points = sweep(short_wired(0, true, 3), SweepParam::VAngle, {0, 50}, true);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_GE(*points[0].result.report.camera->amplification, 5.0);
  EXPECT_NEAR(*points[1].result.report.camera->amplification, 1.0, 0.05);
}

TEST(Report, JsonShape) {
  const auto r = run_experiment(short_wired(83.2, true, 6), {true, nullptr});
  const Json j = to_json(r);
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["scenario_id"], "wired-83.2");
  EXPECT_TRUE(j["camera"]["amplification"].is_number());
  EXPECT_EQ(j["trace"]["hash"].get<std::string>().size(), 16u);
  const auto echo = resolve_path(j, "flows[name=echo].rtt.p95_ms");
  ASSERT_EQ(echo.size(), 1u);
  EXPECT_TRUE(echo[0].value.is_number());
  EXPECT_TRUE(resolve_path(j, "flows[name=camera].rtt")[0].value.is_null());
  EXPECT_EQ(resolve_path(j, "flows[name=camera].rtt_absent_reason")[0].value, "not a probe flow");
  EXPECT_TRUE(j["baseline"].is_object());
}

TEST(Report, FlowCsv) {
  const auto r = run_experiment(short_wired(0, false, 6));
  std::ostringstream out;
  write_flow_csv(out, r.report);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "flow_id,kind,payload_bytes,sent,delivered,dropped,drop_rate,rtt_mean_ms,rtt_p95_ms,throughput_mbps");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9) << line;
  }
  EXPECT_EQ(rows, static_cast<int>(r.report.flows.size()));
  // Camera has no RTT; its cells are empty.
  EXPECT_NE(out.str().find("0,camera,1472,"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find(",,,"), std::string::npos);
}

TEST(Check, ExpectationParsing) {
  const auto e = parse_expectations(
      "# comment\n"
      "camera.amplification Within 5 6.5\n"
      "flows[name=echo].drop_rate AtMost 0.1 tol=0.01  # trailing\n"
      "points[*].report.camera.mean_bitrate_mbps Monotone nonincreasing\n"
      "\n"
      "camera.mean_bitrate_mbps Within 14.4 tol=0.1\n");
  ASSERT_EQ(e.size(), 4u);
  EXPECT_EQ(e[0].comparator, Comparator::Within);
  EXPECT_EQ(e[0].values, (std::vector<double>{5, 6.5}));
  EXPECT_EQ(e[1].comparator, Comparator::AtMost);
  EXPECT_EQ(e[1].tolerance, 0.01);
  EXPECT_EQ(e[1].line, 3);
  EXPECT_EQ(e[2].direction, Direction::NonIncreasing);
  EXPECT_EQ(e[3].values.size(), 1u);

  EXPECT_THROW(parse_expectations("x Within 1\n"), CheckError);
  EXPECT_THROW(parse_expectations("x Within 2 1\n"), CheckError);
  EXPECT_THROW(parse_expectations("x Around 1\n"), CheckError);
  EXPECT_THROW(parse_expectations("x Monotone sideways\n"), CheckError);
  EXPECT_THROW(parse_expectations("x AtLeast one\n"), CheckError);
  EXPECT_THROW(parse_expectations("x AtLeast 1 tol=-1\n"), CheckError);
  EXPECT_THROW(parse_expectations("x[ AtLeast 1\n"), CheckError);
}

TEST(Check, Evaluation) {
  const Json doc = Json::parse(R"({
    "camera": {"amplification": 5.4, "baseline": null},
    "flows": [{"name": "a", "drop_rate": 0.2}, {"name": "b", "drop_rate": 0.05}],
    "points": [{"v": 1}, {"v": 2}, {"v": 2}, {"v": 3}]
  })");
  auto run = [&](const std::string& line) { return evaluate(doc, parse_expectations(line).at(0)); };
  EXPECT_TRUE(run("camera.amplification Within 5 6.5").pass);
  EXPECT_FALSE(run("camera.amplification Within 5.5 6.5").pass);
  EXPECT_TRUE(run("camera.amplification Within 5.5 6.5 tol=0.1").pass);
  EXPECT_TRUE(run("camera.amplification Within 5.41 tol=0.02").pass);
  EXPECT_TRUE(run("flows[*].drop_rate AtMost 0.2").pass);
  EXPECT_FALSE(run("flows[*].drop_rate AtLeast 0.1").pass);
  EXPECT_TRUE(run("flows[name=b].drop_rate AtMost 0.05").pass);
  EXPECT_TRUE(run("flows[1].drop_rate AtMost 0.05").pass);
  EXPECT_TRUE(run("points[*].v Monotone nondecreasing").pass);
  EXPECT_FALSE(run("points[*].v Monotone increasing").pass);
  const auto bad = run("points[*].v Monotone nonincreasing");
  EXPECT_FALSE(bad.pass);
  EXPECT_NE(bad.message.find("points[1]"), std::string::npos) << bad.message;
  const auto absent = run("camera.baseline AtLeast 0");
  EXPECT_FALSE(absent.pass);
  EXPECT_NE(absent.message.find("absent"), std::string::npos);
  EXPECT_THROW(run("camera.nothing AtLeast 0"), CheckError);
  EXPECT_THROW(run("flows[name=zzz].drop_rate AtLeast 0"), CheckError);

  const auto summary = check(doc, parse_expectations("camera.amplification AtLeast 5\nflows[0].drop_rate AtMost 0.1\n"));
  EXPECT_FALSE(summary.all_passed());
  EXPECT_TRUE(summary.results[0].pass);
}

TEST(Check, AgainstARealReport) {
  const auto r = run_experiment(short_wired(0, true, 4), {true, nullptr});
  const auto summary = check(to_json(r), parse_expectations("camera.amplification Within 5 6.5\n"
                                                            "flows[name=echo].drop_rate AtMost 0\n"
                                                            "ports[*].utilization AtMost 1\n"));
  for (const auto& res : summary.results) EXPECT_TRUE(res.pass) << res.message;
}
