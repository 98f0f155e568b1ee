#pragma once

#include <cstdint>

#include "vbrsim/time.hpp"

namespace vbrsim {

using NodeId = int;
using FlowId = int;

enum class PacketKind : std::uint8_t { Video, BaseLoad, Echo, EchoReply, Data, Ack, Stream };

// Unit of simulated transmission. `size` is what a link serializes; `payload`
// is the application bytes the packet carries.
struct Packet {
  std::uint64_t id = 0;
  FlowId flow_id = -1;
  PacketKind kind = PacketKind::Video;
  std::int32_t size = 0;
  std::int32_t payload = 0;
  SimTime created_at = 0;
  NodeId src = -1;
  NodeId dst = -1;

  // Flow-defined fields: message/probe/segment number, fragment position,
  // and a timestamp echoed back by the receiver.
  std::uint64_t seq = 0;
  std::uint64_t ack = 0;
  std::uint16_t frag_index = 0;
  std::uint16_t frag_count = 1;
  SimTime ts_echo = 0;
  bool retransmit = false;
};

constexpr const char* to_string(PacketKind k) {
  switch (k) {
    case PacketKind::Video: return "video";
    case PacketKind::BaseLoad: return "baseload";
    case PacketKind::Echo: return "echo";
    case PacketKind::EchoReply: return "echo-reply";
    case PacketKind::Data: return "data";
    case PacketKind::Ack: return "ack";
    case PacketKind::Stream: return "stream";
  }
  return "?";
}

}  // namespace vbrsim
