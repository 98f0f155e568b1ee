#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vbrsim/packet.hpp"
#include "vbrsim/scene.hpp"

namespace vbrsim {

enum class RateMode { VariableBitrate, ConstantBitrate };
enum class FrameType { I, P };

// GOP model of the camera. Sizes are bytes of encoded video per frame.
struct CodecParams {
  int fps = 60;
  int gop_length = 120;
  std::int64_t i_size_base = 75'000;
  std::int64_t p_size_base = 5'000;
  std::int64_t attack_frame_size = 30'000;
  RateMode mode = RateMode::VariableBitrate;
  double cbr_target_bps = 2.5e6;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool operator==(const CodecParams&) const = default;
};

struct FrameRecord {
  int frame_index = 0;
  FrameType frame_type = FrameType::I;
  std::int64_t size = 0;
  double timestamp = 0.0;
};

// RTP(12) + UDP(8) + IPv4(20) + Ethernet(14).
inline constexpr std::int32_t kVideoHeaderBytes = 54;
inline constexpr std::int32_t kVideoMtuPayload = 1'472;

std::int64_t frame_size(const SceneState& state, FrameType type, const CodecParams& params);

FrameType frame_type_at(int frame_index, const CodecParams& params);

std::vector<FrameRecord> encode_stream(std::span<const SceneState> scene,
                                       const CodecParams& params);

// Mean bitrate over [start_s, start_s + window_s). Frames must be sorted.
double stream_bitrate(std::span<const FrameRecord> frames, double window_s, double start_s = 0.0);

// Splits a frame into full `mtu_payload` packets plus a remainder. Only the
// payload, size and kind fields are filled; ids and routing belong to the sender.
std::vector<Packet> packetize(const FrameRecord& frame, std::int32_t mtu_payload = kVideoMtuPayload,
                              std::int32_t header_bytes = kVideoHeaderBytes);

const char* to_string(FrameType t);
const char* to_string(RateMode m);

}  // namespace vbrsim
