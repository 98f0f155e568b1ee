#include "vbrsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vbrsim/rng.hpp"

namespace vbrsim {

AngleAttenuation angle_attenuation(double h_deg, double v_deg, const AngleModel& model) {
  const double h = std::min(std::abs(h_deg), 90.0);
  const double v = std::min(std::abs(v_deg), 90.0);

  double horizontal = 0.0;
  if (h <= model.h_zero_deg) {
    horizontal = 1.0 - (1.0 - model.h_floor) * (h / model.h_zero_deg);
  } else if (model.h_zero_deg < 90.0) {
    horizontal = model.h_floor * (90.0 - h) / (90.0 - model.h_zero_deg);
  }
  const double vertical = v < model.v_cutoff_deg ? 1.0 : 0.0;
  return {std::clamp(horizontal * vertical, 0.0, 1.0)};
}

std::vector<SceneState> generate_scene(const SceneProfile& profile, double duration_s, int fps,
                                       const AngleModel& angles, const MotionModel& motion) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration_s must be positive");
  if (fps < 24 || fps > 120) throw std::invalid_argument("fps must be within [24, 120]");
  if (profile.kind == SceneKind::Flicker && profile.flicker_rate_hz < 2.0 * fps) {
    throw std::invalid_argument("flicker_rate_hz must be at least twice the frame rate");
  }

  const auto count = static_cast<std::size_t>(std::ceil(duration_s * fps - 1e-9));
  std::vector<SceneState> states;
  states.reserve(count);

  Rng rng(derive_seed(profile.rng_seed, to_string(profile.kind)));
  const double flicker = angle_attenuation(profile.horizontal_angle_deg,
                                           profile.vertical_angle_deg, angles)
                             .factor;
  double walk = motion.center;

  for (std::size_t i = 0; i < count; ++i) {
    SceneState s;
    s.frame_index = static_cast<int>(i);
    switch (profile.kind) {
      case SceneKind::Static:
        s.spatial_complexity = 0.7;
        s.temporal_novelty = 0.0;
        break;
      case SceneKind::NaturalMotion:
        // Mean-reverting walk, so a long run stays centred on motion.center.
        walk += motion.step * (rng.uniform(-1.0, 1.0) + 0.2 * (motion.center - walk) / motion.step);
        walk = std::clamp(walk, motion.lo, motion.hi);
        s.spatial_complexity = std::clamp(0.7 + rng.uniform(-0.02, 0.02), 0.0, 1.0);
        s.temporal_novelty = walk;
        break;
      case SceneKind::Flicker:
        // Stripe patterns never repeat between frames at >= 2x fps, so the
        // whole frame is unpredictable wherever the beam still reaches.
        s.spatial_complexity = std::clamp(0.8 + rng.uniform(-0.05, 0.05), 0.0, 1.0);
        s.temporal_novelty = flicker;
        break;
    }
    states.push_back(s);
  }
  return states;
}

const char* to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::Static: return "static";
    case SceneKind::NaturalMotion: return "natural";
    case SceneKind::Flicker: return "flicker";
  }
  return "?";
}

}  // namespace vbrsim
