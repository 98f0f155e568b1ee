#include "vbrsim/codec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vbrsim {

void CodecParams::validate() const {
  auto fail = [](const char* field, const char* why) {
    throw std::invalid_argument(std::string("camera.") + field + ": " + why);
  };
  if (fps < 24 || fps > 120) fail("fps", "must be within [24, 120]");
  if (gop_length < 1) fail("gop_length", "must be >= 1");
  if (i_size_base <= 0) fail("i_size_base", "must be > 0");
  if (p_size_base <= 0) fail("p_size_base", "must be > 0");
  if (attack_frame_size <= 0) fail("attack_frame_size", "must be > 0");
  if (p_size_base >= i_size_base) fail("p_size_base", "must be smaller than i_size_base");
  if (mode == RateMode::ConstantBitrate && !(cbr_target_bps > 0)) {
    fail("cbr_target_mbps", "must be > 0 in constant-bitrate mode");
  }
}

FrameType frame_type_at(int frame_index, const CodecParams& params) {
  return frame_index % params.gop_length == 0 ? FrameType::I : FrameType::P;
}

std::int64_t frame_size(const SceneState& state, FrameType type, const CodecParams& params) {
  if (params.mode == RateMode::ConstantBitrate) {
    return std::max<std::int64_t>(1, std::llround(params.cbr_target_bps / (8.0 * params.fps)));
  }
  const double base = static_cast<double>(type == FrameType::I ? params.i_size_base
                                                               : params.p_size_base);
  const double novelty = std::clamp(state.temporal_novelty, 0.0, 1.0);
  const double size = base + (static_cast<double>(params.attack_frame_size) - base) * novelty;
  return std::max<std::int64_t>(1, std::llround(size));
}

std::vector<FrameRecord> encode_stream(std::span<const SceneState> scene,
                                       const CodecParams& params) {
  params.validate();
  std::vector<FrameRecord> frames;
  frames.reserve(scene.size());
  for (const auto& s : scene) {
    FrameRecord f;
    f.frame_index = s.frame_index;
    f.frame_type = frame_type_at(s.frame_index, params);
    f.size = frame_size(s, f.frame_type, params);
    f.timestamp = static_cast<double>(s.frame_index) / params.fps;
    frames.push_back(f);
  }
  return frames;
}

double stream_bitrate(std::span<const FrameRecord> frames, double window_s, double start_s) {
  if (!(window_s > 0)) throw std::invalid_argument("window_s must be positive");
  const double end = start_s + window_s;
  double bytes = 0.0;
  for (const auto& f : frames) {
    if (f.timestamp < start_s - 1e-12) continue;
    if (f.timestamp >= end - 1e-12) break;
    bytes += static_cast<double>(f.size);
  }
  return bytes * 8.0 / window_s;
}

std::vector<Packet> packetize(const FrameRecord& frame, std::int32_t mtu_payload,
                              std::int32_t header_bytes) {
  if (mtu_payload <= 0) throw std::invalid_argument("mtu_payload must be positive");
  std::vector<Packet> out;
  const auto count = static_cast<std::uint16_t>((frame.size + mtu_payload - 1) / mtu_payload);
  out.reserve(count);
  std::int64_t remaining = frame.size;
  for (std::uint16_t i = 0; i < count; ++i) {
    const auto chunk = static_cast<std::int32_t>(std::min<std::int64_t>(remaining, mtu_payload));
    Packet p;
    p.kind = PacketKind::Video;
    p.payload = chunk;
    p.size = chunk + header_bytes;
    p.seq = static_cast<std::uint64_t>(frame.frame_index);
    p.frag_index = i;
    p.frag_count = count;
    out.push_back(p);
    remaining -= chunk;
  }
  return out;
}

const char* to_string(FrameType t) { return t == FrameType::I ? "I" : "P"; }
const char* to_string(RateMode m) {
  return m == RateMode::VariableBitrate ? "vbr" : "cbr";
}

}  // namespace vbrsim
