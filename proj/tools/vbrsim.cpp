// Command-line front end: run, sweep, check, presets.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vbrsim/check.hpp"
#include "vbrsim/presets.hpp"
#include "vbrsim/report.hpp"

namespace fs = std::filesystem;
using namespace vbrsim;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    // lo:step:hi expands to an inclusive range.
    if (auto c1 = item.find(':'); c1 != std::string::npos) {
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos) throw std::runtime_error("range must be lo:step:hi, got '" + item + "'");
      const double lo = std::stod(item.substr(0, c1));
      const double step = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
      const double hi = std::stod(item.substr(c2 + 1));
      if (!(step > 0)) throw std::runtime_error("range step must be > 0");
      for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(lo + i * step);
    } else {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::runtime_error("bad value '" + item + "'");
      out.push_back(v);
    }
  }
  if (out.empty()) throw std::runtime_error("--values is empty");
  return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void print_summary(const MetricsReport& r) {
  std::cout << r.scenario_id << " (seed " << r.seed << ", attack " << (r.attack ? "on" : "off") << ")\n";
  if (r.camera) {
    std::cout << "  camera bitrate " << r.camera->mean_bitrate_mbps << " Mb/s";
    if (r.camera->amplification) std::cout << ", amplification " << *r.camera->amplification;
    std::cout << '\n';
  }
  for (const auto& f : r.flows) {
    if (f.kind == FlowKind::CameraStream) continue;
    std::cout << "  " << f.name << " [" << to_string(f.kind) << "] drop "
              << (f.drop_rate ? std::to_string(*f.drop_rate) : "-");
    if (f.rtt) std::cout << " rtt mean " << f.rtt->mean_ms << " ms p95 " << f.rtt->p95_ms << " ms";
    std::cout << " thr " << f.mean_throughput_mbps << " Mb/s";
    if (f.completion_s) std::cout << " done " << *f.completion_s << " s";
    std::cout << '\n';
  }
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, const std::string& out_dir,
            bool paired, bool trace) {
  ScenarioConfig config = load_scenario(scenario_path);
  if (seed) config.seed = *seed;

  std::unique_ptr<std::ofstream> trace_file;
  std::unique_ptr<StreamTrace> sink;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    if (trace) {
      trace_file = std::make_unique<std::ofstream>(fs::path(out_dir) / "trace.txt", std::ios::binary);
      sink = std::make_unique<StreamTrace>(*trace_file);
    }
  }
  const ExperimentResult result = run_experiment(config, RunOptions{paired, sink.get()});
  print_warnings(result.warnings);
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "report.json", to_json(result).dump(2) + "\n");
    std::ostringstream csv;
    write_flow_csv(csv, result.report);
    write_file(fs::path(out_dir) / "flows.csv", csv.str());
  }
  print_summary(result.report);
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& param_name, const std::string& values,
              const std::string& out_dir, bool paired) {
  const ScenarioConfig config = load_scenario(scenario_path);
  const auto param = parse_sweep_param(param_name);
  if (!param) throw std::runtime_error("unknown sweep parameter '" + param_name + "'");
  const auto points = sweep(config, *param, parse_values(values), paired);
  std::ostringstream csv;
  write_sweep_csv(csv, points, *param);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "sweep.json", to_json(points, *param).dump(2) + "\n");
    write_file(fs::path(out_dir) / "sweep.csv", csv.str());
  }
  std::cout << csv.str();
  return 0;
}

int cmd_check(const std::string& report_path, const std::string& expect_path) {
  const Json doc = Json::parse(slurp(report_path));
  const auto expectations = parse_expectations(slurp(expect_path));
  const CheckSummary summary = check(doc, expectations);
  for (const auto& r : summary.results) std::cout << (r.pass ? "PASS " : "FAIL ") << r.message << '\n';
  return summary.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of a VBR camera under a flicker attack"};
  app.require_subcommand(1);

  std::string scenario, out_dir, param, values, report, expect;
  std::optional<std::uint64_t> seed;
  bool paired = false, trace = false;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Directory for report.json, flows.csv and trace.txt");
  run->add_flag("--paired", paired, "Also run the attack-off twin for the amplification factor");
  run->add_flag("--trace", trace, "Write the packet trace (needs --out)");

  auto* sw = app.add_subcommand("sweep", "Sweep one parameter");
  sw->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sw->add_option("--param", param, "h_angle, v_angle, base_load_mbps or payload_size")->required();
  sw->add_option("--values", values, "Comma list; lo:step:hi ranges allowed")->required();
  sw->add_option("--out", out_dir, "Directory for sweep.json and sweep.csv");
  sw->add_flag("--paired", paired, "Pair every point with its attack-off twin");

  auto* chk = app.add_subcommand("check", "Compare a report against expectations");
  chk->add_option("--report", report, "report.json or sweep.json")->required()->check(CLI::ExistingFile);
  chk->add_option("--expect", expect, "Expectations file")->required()->check(CLI::ExistingFile);

  auto* pre = app.add_subcommand("presets", "List or print the built-in scenarios");
  pre->require_subcommand(1);
  pre->add_subcommand("list", "List preset names");
  std::string preset_name;
  auto* emit = pre->add_subcommand("emit", "Print a preset scenario file");
  emit->add_option("name", preset_name, "Preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (trace && out_dir.empty()) throw std::runtime_error("--trace needs --out");
      return cmd_run(scenario, seed, out_dir, paired, trace);
    }
    if (*sw) return cmd_sweep(scenario, param, values, out_dir, paired);
    if (*chk) return cmd_check(report, expect);
    if (*pre) {
      if (pre->got_subcommand("list")) {
        for (const auto& n : preset_names()) std::cout << n << '\n';
        return 0;
      }
      const auto p = preset(preset_name);
      if (!p) {
        std::cerr << "error: unknown preset '" << preset_name << "'\n";
        return 2;
      }
      std::cout << serialize_scenario(*p);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
