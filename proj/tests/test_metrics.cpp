#include <gtest/gtest.h>

#include "vbrsim/metrics.hpp"

using namespace vbrsim;

namespace {

FlowResult probes(std::vector<double> rtts_ms, int lost) {
  FlowResult f;
  f.kind = FlowKind::EchoRoundtrip;
  std::uint64_t seq = 0;
  for (double ms : rtts_ms) {
    ProbeRecord p;
    p.seq = seq++;
    p.rtt = from_seconds(ms / 1e3);
    p.outcome = ProbeRecord::Outcome::Answered;
    f.probes.push_back(p);
  }
  for (int i = 0; i < lost; ++i) {
    ProbeRecord p;
    p.seq = seq++;
    p.outcome = ProbeRecord::Outcome::RequestLost;
    f.probes.push_back(p);
  }
  f.sent = static_cast<std::int64_t>(f.probes.size());
  f.delivered = static_cast<std::int64_t>(rtts_ms.size());
  f.dropped = lost;
  return f;
}

}  // namespace

TEST(NearestRank, SmallSamples) {
  const std::vector<double> s{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(nearest_rank(s, 50), 5);
  EXPECT_EQ(nearest_rank(s, 95), 10);
  EXPECT_EQ(nearest_rank(s, 90), 9);
  EXPECT_EQ(nearest_rank(s, 100), 10);
  EXPECT_EQ(nearest_rank(s, 0.1), 1);
  EXPECT_EQ(nearest_rank({42}, 95), 42);
  EXPECT_THROW(nearest_rank({}, 50), std::invalid_argument);
}

TEST(NearestRank, TwentySamples) {
  std::vector<double> s;
  for (int i = 1; i <= 20; ++i) s.push_back(i * 10);
  EXPECT_EQ(nearest_rank(s, 95), 190);  // ceil(0.95 * 20) = 19
}

TEST(RttStats, IgnoresLostProbes) {
  const auto f = probes({10, 20, 30, 40}, 3);
  const auto r = rtt_stats(f);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->samples, 4);
  EXPECT_NEAR(r->mean_ms, 25.0, 1e-9);
  EXPECT_NEAR(r->p50_ms, 20.0, 1e-9);
  EXPECT_NEAR(r->p95_ms, 40.0, 1e-9);
  EXPECT_NEAR(r->max_ms, 40.0, 1e-9);
  EXPECT_NEAR(*drop_rate(f), 3.0 / 7.0, 1e-12);
}

TEST(RttStats, AbsentWithReason) {
  EXPECT_FALSE(rtt_stats(probes({}, 5)).has_value());
  const auto all_lost = summarize(probes({}, 5));
  EXPECT_FALSE(all_lost.rtt);
  EXPECT_EQ(all_lost.rtt_absent_reason, "no completed probes");
  EXPECT_EQ(*all_lost.drop_rate, 1.0);

  const auto none = summarize(probes({}, 0));
  EXPECT_FALSE(none.drop_rate);
  EXPECT_EQ(none.rtt_absent_reason, "no probes sent");

  FlowResult udp;
  udp.kind = FlowKind::UdpStress;
  EXPECT_EQ(summarize(udp).rtt_absent_reason, "not a probe flow");
}

TEST(Throughput, WholeSecondsInsideActiveWindow) {
  FlowResult f;
  f.kind = FlowKind::UdpStress;
  f.start_s = 1.5;
  f.stop_s = 5.0;
  f.bin_bytes = {0, 500'000, 1'000'000, 1'250'000, 250'000, 0, 0};
  // Seconds 2, 3 and 4; second 1 is only half active.
  EXPECT_EQ(throughput_series_mbps(f), (std::vector<double>{8.0, 10.0, 2.0}));
  EXPECT_NEAR(mean_throughput_mbps(f), 20.0 / 3.0, 1e-12);
  f.start_s = 6.0;
  f.stop_s = 7.0;
  EXPECT_EQ(mean_throughput_mbps(f), 0.0);
}

TEST(Amplification, RatioAndErrors) {
  MetricsReport attack, base;
  EXPECT_THROW(amplification(attack, base), std::domain_error);
  attack.camera = CameraMetrics{14.4, std::nullopt, std::nullopt};
  base.camera = CameraMetrics{0.0, std::nullopt, std::nullopt};
  EXPECT_THROW(amplification(attack, base), std::domain_error);
  base.camera->mean_bitrate_mbps = 2.68;
  EXPECT_NEAR(amplification(attack, base), 14.4 / 2.68, 1e-12);
}

TEST(Report, FindByNameAndKind) {
  MetricsReport r;
  FlowMetrics a;
  a.name = "echo";
  a.kind = FlowKind::EchoRoundtrip;
  FlowMetrics b;
  b.name = "bulk";
  b.kind = FlowKind::TcpStress;
  r.flows = {a, b};
  EXPECT_EQ(r.find_flow("bulk")->kind, FlowKind::TcpStress);
  EXPECT_EQ(r.find_kind(FlowKind::EchoRoundtrip)->name, "echo");
  EXPECT_EQ(r.find_flow("nope"), nullptr);
  EXPECT_EQ(r.find_kind(FlowKind::FileTransfer), nullptr);
}
