#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "vbrsim/harness.hpp"

namespace vbrsim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, const std::string& field, int line) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || std::isnan(out)) {
    throw ConfigError(field + ": expected a number, got '" + v + "'", line);
  }
  return out;
}

std::int64_t to_int(const std::string& v, const std::string& field, int line) {
  std::int64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(field + ": expected an integer, got '" + v + "'", line);
  }
  return out;
}

bool to_bool(const std::string& v, const std::string& field, int line) {
  if (v == "true" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "no") return false;
  throw ConfigError(field + ": expected true or false, got '" + v + "'", line);
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

template <class Target>
struct Field {
  const char* key;
  std::function<void(Target&, const std::string& value, const std::string& path, int line)> set;
  std::function<std::optional<std::string>(const Target&)> get;
};

template <class Target, class T>
Field<Target> num(const char* key, T Target::*member) {
  return {key,
          [member](Target& t, const std::string& v, const std::string& path, int line) {
            if constexpr (std::is_floating_point_v<T>) {
              t.*member = to_double(v, path, line);
            } else {
              t.*member = static_cast<T>(to_int(v, path, line));
            }
          },
          [member](const Target& t) -> std::optional<std::string> {
            if constexpr (std::is_floating_point_v<T>) {
              return fmt(static_cast<double>(t.*member));
            } else {
              return fmt(static_cast<std::int64_t>(t.*member));
            }
          }};
}

// Member of a nested struct, e.g. ScenarioConfig::network.channel_mbps.
template <class Outer, class Inner, class T>
Field<Outer> nested(const char* key, Inner Outer::*inner, T Inner::*member) {
  auto f = num<Inner, T>(key, member);
  return {key,
          [inner, set = f.set](Outer& o, const std::string& v, const std::string& path, int line) {
            set(o.*inner, v, path, line);
          },
          [inner, get = f.get](const Outer& o) { return get(o.*inner); }};
}

const std::vector<Field<ScenarioConfig>>& scenario_fields() {
  static const std::vector<Field<ScenarioConfig>> fields = {
      {"id", [](ScenarioConfig& c, const std::string& v, const std::string&, int) { c.id = v; },
       [](const ScenarioConfig& c) -> std::optional<std::string> { return c.id; }},
      {"topology",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         auto t = parse_topology(v);
         if (!t) throw ConfigError(path + ": unknown topology '" + v + "'", line);
         c.topology = *t;
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> { return to_string(c.topology); }},
      num("duration_s", &ScenarioConfig::duration_s),
      {"seed",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         std::uint64_t out = 0;
         const auto* end = v.data() + v.size();
         auto [ptr, ec] = std::from_chars(v.data(), end, out);
         if (ec != std::errc() || ptr != end) throw ConfigError(path + ": expected an unsigned integer", line);
         c.seed = out;
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }},
      num("base_load_mbps", &ScenarioConfig::base_load_mbps),
  };
  return fields;
}

const std::vector<Field<ScenarioConfig>>& attack_fields() {
  static const std::vector<Field<ScenarioConfig>> fields = {
      {"enabled",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         c.attack.enabled = to_bool(v, path, line);
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> { return fmt(c.attack.enabled); }},
      nested("h_angle", &ScenarioConfig::attack, &AttackConfig::h_angle),
      nested("v_angle", &ScenarioConfig::attack, &AttackConfig::v_angle),
      nested("flicker_hz", &ScenarioConfig::attack, &AttackConfig::flicker_hz),
  };
  return fields;
}

const std::vector<Field<ScenarioConfig>>& camera_fields() {
  static const std::vector<Field<ScenarioConfig>> fields = {
      nested("fps", &ScenarioConfig::camera, &CodecParams::fps),
      nested("gop_length", &ScenarioConfig::camera, &CodecParams::gop_length),
      nested("i_size_base", &ScenarioConfig::camera, &CodecParams::i_size_base),
      nested("p_size_base", &ScenarioConfig::camera, &CodecParams::p_size_base),
      nested("attack_frame_size", &ScenarioConfig::camera, &CodecParams::attack_frame_size),
      {"mode",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         if (v == "vbr") {
           c.camera.mode = RateMode::VariableBitrate;
         } else if (v == "cbr") {
           c.camera.mode = RateMode::ConstantBitrate;
         } else {
           throw ConfigError(path + ": expected vbr or cbr, got '" + v + "'", line);
         }
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> {
         return c.camera.mode == RateMode::VariableBitrate ? "vbr" : "cbr";
       }},
      {"cbr_target_mbps",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         c.camera.cbr_target_bps = to_double(v, path, line) * 1e6;
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> { return fmt(c.camera.cbr_target_bps / 1e6); }},
  };
  return fields;
}

const std::vector<Field<ScenarioConfig>>& mitigation_fields() {
  static const std::vector<Field<ScenarioConfig>> fields = {
      {"rate_limit_mbps",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         c.mitigations.rate_limit_mbps = to_double(v, path, line);
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> {
         if (!c.mitigations.rate_limit_mbps) return std::nullopt;
         return fmt(*c.mitigations.rate_limit_mbps);
       }},
      nested("rate_limit_burst_bytes", &ScenarioConfig::mitigations, &MitigationConfig::rate_limit_burst_bytes),
      {"cbr",
       [](ScenarioConfig& c, const std::string& v, const std::string& path, int line) {
         c.mitigations.cbr = to_bool(v, path, line);
       },
       [](const ScenarioConfig& c) -> std::optional<std::string> { return fmt(c.mitigations.cbr); }},
  };
  return fields;
}

const std::vector<Field<ScenarioConfig>>& network_fields() {
  using S = ScenarioConfig;
  using N = NetworkConfig;
  static const std::vector<Field<S>> fields = {
      nested("bottleneck_mbps", &S::network, &N::bottleneck_mbps),
      nested("access_mbps", &S::network, &N::access_mbps),
      nested("host_link_mbps", &S::network, &N::host_link_mbps),
      nested("propagation_us", &S::network, &N::propagation_us),
      nested("wired_queue_bytes", &S::network, &N::wired_queue_bytes),
      nested("wireless_queue_bytes", &S::network, &N::wireless_queue_bytes),
      nested("station_queue_bytes", &S::network, &N::station_queue_bytes),
      nested("channel_mbps", &S::network, &N::channel_mbps),
      nested("nano_cap_mbps", &S::network, &N::nano_cap_mbps),
      nested("fast_cap_mbps", &S::network, &N::fast_cap_mbps),
      nested("ap_cap_mbps", &S::network, &N::ap_cap_mbps),
      nested("ap_weight", &S::network, &N::ap_weight),
  };
  return fields;
}

const std::vector<Field<ScenarioConfig>>& angle_fields() {
  using S = ScenarioConfig;
  static const std::vector<Field<S>> fields = {
      nested("h_zero_deg", &S::angles, &AngleModel::h_zero_deg),
      nested("h_floor", &S::angles, &AngleModel::h_floor),
      nested("v_cutoff_deg", &S::angles, &AngleModel::v_cutoff_deg),
  };
  return fields;
}

const std::vector<Field<FlowSpec>>& flow_fields() {
  static const std::vector<Field<FlowSpec>> fields = {
      {"kind",
       [](FlowSpec& f, const std::string& v, const std::string& path, int line) {
         auto k = parse_flow_kind(v);
         if (!k) throw ConfigError(path + ": unknown flow kind '" + v + "'", line);
         f.kind = *k;
       },
       [](const FlowSpec& f) -> std::optional<std::string> { return to_string(f.kind); }},
      {"source", [](FlowSpec& f, const std::string& v, const std::string&, int) { f.source = v; },
       [](const FlowSpec& f) -> std::optional<std::string> {
         if (f.source.empty()) return std::nullopt;
         return f.source;
       }},
      {"sink", [](FlowSpec& f, const std::string& v, const std::string&, int) { f.sink = v; },
       [](const FlowSpec& f) -> std::optional<std::string> {
         if (f.sink.empty()) return std::nullopt;
         return f.sink;
       }},
      num("payload_bytes", &FlowSpec::payload_size),
      {"target_mbps",
       [](FlowSpec& f, const std::string& v, const std::string& path, int line) {
         f.target_rate_bps = to_double(v, path, line) * 1e6;
       },
       [](const FlowSpec& f) -> std::optional<std::string> { return fmt(f.target_rate_bps / 1e6); }},
      num("volume_bytes", &FlowSpec::volume),
      num("start_s", &FlowSpec::start_s),
      {"stop_s",
       [](FlowSpec& f, const std::string& v, const std::string& path, int line) {
         f.stop_s = to_double(v, path, line);
       },
       [](const FlowSpec& f) -> std::optional<std::string> {
         if (std::isinf(f.stop_s)) return std::nullopt;
         return fmt(f.stop_s);
       }},
      num("interval_s", &FlowSpec::interval_s),
  };
  return fields;
}

const std::vector<std::pair<const char*, const std::vector<Field<ScenarioConfig>>* (*)()>>& sections() {
  static const std::vector<std::pair<const char*, const std::vector<Field<ScenarioConfig>>* (*)()>> s = {
      {"scenario", [] { return &scenario_fields(); }},
      {"attack", [] { return &attack_fields(); }},
      {"camera", [] { return &camera_fields(); }},
      {"mitigation", [] { return &mitigation_fields(); }},
      {"network", [] { return &network_fields(); }},
      {"angles", [] { return &angle_fields(); }},
  };
  return s;
}

template <class Target>
const Field<Target>* find_field(const std::vector<Field<Target>>& fields, const std::string& key) {
  for (const auto& f : fields) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string raw;
  int line = 0;

  const std::vector<Field<ScenarioConfig>>* section = nullptr;
  std::string section_name;
  FlowSpec* flow = nullptr;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header '" + s + "'", line);
      const std::string header = trim(std::string_view(s).substr(1, s.size() - 2));
      section = nullptr;
      flow = nullptr;
      if (header.rfind("flow ", 0) == 0 || header == "flow") {
        const std::string name = trim(std::string_view(header).substr(4));
        if (name.empty()) throw ConfigError("flow section needs a name: [flow NAME]", line);
        for (const auto& f : config.flows) {
          if (f.name == name) throw ConfigError("duplicate flow '" + name + "'", line);
        }
        config.flows.push_back(FlowSpec{});
        flow = &config.flows.back();
        flow->name = name;
        section_name = "flow." + name;
      } else {
        for (const auto& [name, get] : sections()) {
          if (header == name) section = get();
        }
        if (section == nullptr) throw ConfigError("unknown section [" + header + "]", line);
        section_name = header;
      }
      if (!seen_sections.insert(section_name).second) {
        throw ConfigError("duplicate section [" + header + "]", line);
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    if (section == nullptr && flow == nullptr) throw ConfigError("key '" + key + "' outside any section", line);
    const std::string path = section_name + "." + key;
    if (!seen_keys.insert(path).second) throw ConfigError("duplicate key " + path, line);

    if (flow != nullptr) {
      const auto* f = find_field(flow_fields(), key);
      if (f == nullptr) throw ConfigError("unknown key " + path, line);
      f->set(*flow, value, path, line);
    } else {
      const auto* f = find_field(*section, key);
      if (f == nullptr) throw ConfigError("unknown key " + path, line);
      f->set(config, value, path, line);
    }
  }

  for (const char* required : {"scenario.id", "scenario.duration_s", "network.bottleneck_mbps"}) {
    if (!seen_keys.count(required)) throw ConfigError(std::string(required) + ": required");
  }
  for (const auto& f : config.flows) {
    if (!seen_keys.count("flow." + f.name + ".kind")) throw ConfigError("flow." + f.name + ".kind: required");
  }
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const ScenarioConfig& config) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, get] : sections()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& f : *get()) {
      if (auto v = f.get(config)) out << f.key << " = " << *v << '\n';
    }
  }
  for (const auto& flow : config.flows) {
    out << "\n[flow " << flow.name << "]\n";
    for (const auto& f : flow_fields()) {
      if (auto v = f.get(flow)) out << f.key << " = " << *v << '\n';
    }
  }
  return out.str();
}

}  // namespace vbrsim
