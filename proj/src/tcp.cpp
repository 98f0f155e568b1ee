#include <algorithm>
#include <cmath>

#include "vbrsim/traffic.hpp"

namespace vbrsim {

TcpState TcpState::initial(const TcpConfig& cfg) {
  TcpState s;
  s.mss = cfg.mss;
  s.cwnd = cfg.initial_cwnd_segments * cfg.mss;
  s.rto = cfg.rto_initial_s;
  s.rto_min = cfg.rto_min_s;
  s.rto_max = cfg.rto_max_s;
  return s;
}

TcpState tcp_on_ack(TcpState s, std::int64_t acked_bytes) {
  if (acked_bytes <= 0) return s;
  switch (s.phase) {
    case TcpPhase::SlowStart:
      s.cwnd += acked_bytes;
      if (s.cwnd >= s.ssthresh) {
        s.cwnd = std::max(s.ssthresh, s.mss);
        s.phase = TcpPhase::CongestionAvoidance;
        s.acked_in_round = 0;
      }
      break;
    case TcpPhase::CongestionAvoidance:
      // Appropriate byte counting: +1 MSS per full window acknowledged.
      s.acked_in_round += acked_bytes;
      while (s.acked_in_round >= s.cwnd) {
        s.acked_in_round -= s.cwnd;
        s.cwnd += s.mss;
      }
      break;
    case TcpPhase::Recovery:
      break;
  }
  return s;
}

TcpState tcp_on_loss(TcpState s, LossKind kind) {
  const std::int64_t two = 2 * s.mss;
  switch (kind) {
    case LossKind::TripleDup:
      s.ssthresh = std::max(s.cwnd / 2, two);
      s.cwnd = s.ssthresh;
      s.phase = TcpPhase::Recovery;
      break;
    case LossKind::Timeout:
      s.ssthresh = std::max(s.in_flight / 2, two);
      s.cwnd = s.mss;
      s.rto = std::min(2.0 * s.rto, s.rto_max);
      s.phase = TcpPhase::SlowStart;
      break;
  }
  s.acked_in_round = 0;
  return s;
}

TcpState tcp_exit_recovery(TcpState s) {
  if (s.phase != TcpPhase::Recovery) return s;
  s.cwnd = std::max(s.ssthresh, s.mss);
  s.phase = TcpPhase::CongestionAvoidance;
  s.acked_in_round = 0;
  return s;
}

TcpState tcp_on_rtt_sample(TcpState s, double rtt) {
  if (!s.has_rtt) {
    s.srtt = rtt;
    s.rttvar = rtt / 2.0;
    s.has_rtt = true;
  } else {
    s.rttvar = 0.75 * s.rttvar + 0.25 * std::abs(s.srtt - rtt);
    s.srtt = 0.875 * s.srtt + 0.125 * rtt;
  }
  s.rto = std::clamp(s.srtt + 4.0 * s.rttvar, s.rto_min, s.rto_max);
  return s;
}

}  // namespace vbrsim
