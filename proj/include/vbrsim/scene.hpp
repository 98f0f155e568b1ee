#pragma once

#include <cstdint>
#include <vector>

namespace vbrsim {

struct SceneState {
  int frame_index = 0;
  double spatial_complexity = 0.0;
  double temporal_novelty = 0.0;

  bool operator==(const SceneState&) const = default;
};

enum class SceneKind { Static, NaturalMotion, Flicker };

struct SceneProfile {
  SceneKind kind = SceneKind::Static;
  double flicker_rate_hz = 0.0;
  double horizontal_angle_deg = 0.0;
  double vertical_angle_deg = 0.0;
  std::uint64_t rng_seed = 0;
};

// Shape of the incidence-angle response. Horizontal decays linearly from 1 at
// 0 deg to `h_floor` at `h_zero_deg`, then linearly to 0 at 90 deg. Vertical is
// a step: full effect below `v_cutoff_deg`, none at or above it.
struct AngleModel {
  double h_zero_deg = 60.0;
  double h_floor = 0.2;
  double v_cutoff_deg = 45.0;
  bool operator==(const AngleModel&) const = default;
};

struct AngleAttenuation {
  double factor = 1.0;
};

AngleAttenuation angle_attenuation(double h_deg, double v_deg, const AngleModel& model = {});

// Parameters of the natural-motion random walk.
struct MotionModel {
  double center = 0.05;
  double lo = 0.01;
  double hi = 0.1;
  double step = 0.01;
};

std::vector<SceneState> generate_scene(const SceneProfile& profile, double duration_s, int fps,
                                       const AngleModel& angles = {},
                                       const MotionModel& motion = {});

const char* to_string(SceneKind kind);

}  // namespace vbrsim
