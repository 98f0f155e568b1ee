#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vbrsim/harness.hpp"

namespace vbrsim {

inline constexpr double kWiredBaseLoadsMbps[] = {83.2, 86.4, 89.6};
inline constexpr double kWirelessBaseLoadsMbps[] = {22.4, 25.6, 28.8};

// Names: wired-83.2, wired-86.4, wired-89.6, wireless-22.4, wireless-25.6,
// wireless-28.8 and wired-segmented-89.6.
std::vector<std::string> preset_names();

// Attack on, 60 s, an echo probe and a one-way TCP probe between the
// critical-traffic hosts.
std::optional<ScenarioConfig> preset(const std::string& name);

}  // namespace vbrsim
