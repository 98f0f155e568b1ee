#include <gtest/gtest.h>

#include <sstream>

#include "vbrsim/netsim.hpp"
#include "vbrsim/rng.hpp"

using namespace vbrsim;

namespace {

// Sends scripted packets and records what arrives.
class ScriptFlow : public Flow {
 public:
  struct Shot {
    double at_s;
    std::int32_t size;
  };

  ScriptFlow(NodeId src, NodeId dst, std::vector<Shot> shots)
      : Flow("script"), src_(src), dst_(dst), shots_(std::move(shots)) {}

  std::vector<std::pair<NodeId, NodeId>> endpoints() const override { return {{src_, dst_}}; }

  void start(Engine& e) override {
    for (std::size_t i = 0; i < shots_.size(); ++i) e.schedule(from_seconds(shots_[i].at_s), *this, i);
  }

  void on_timer(Engine& e, std::uint64_t token) override {
    Packet p;
    p.flow_id = id();
    p.src = src_;
    p.dst = dst_;
    p.size = shots_[token].size;
    p.payload = p.size;
    p.seq = token;
    e.send(p);
  }

  void on_receive(Engine& e, const Packet& p) override { arrivals.push_back({p.seq, e.now() - p.created_at}); }

  std::vector<std::pair<std::uint64_t, SimTime>> arrivals;

 private:
  NodeId src_, dst_;
  std::vector<Shot> shots_;
};

ScriptFlow* add_script(Engine& e, NodeId src, NodeId dst, std::vector<ScriptFlow::Shot> shots) {
  auto f = std::make_unique<ScriptFlow>(src, dst, std::move(shots));
  auto* raw = f.get();
  e.add_flow(std::move(f));
  return raw;
}

std::vector<ScriptFlow::Shot> burst(int n, std::int32_t size, double at = 0.0) {
  return std::vector<ScriptFlow::Shot>(static_cast<std::size_t>(n), {at, size});
}

}  // namespace

TEST(Time, TransmissionTimeExamples) {
  EXPECT_EQ(transmission_time(1'500, 100e6), 120'000);
  EXPECT_EQ(transmission_time(1'526, 1e9), 12'208);
  EXPECT_EQ(transmission_time(1, 3e9), 3);  // 2.67 ns rounds up
  EXPECT_EQ(from_seconds(1.5), 1'500'000'000);
}

TEST(Rng, DeriveSeedDependsOnNameOnly) {
  EXPECT_EQ(derive_seed(1, "echo"), derive_seed(1, "echo"));
  EXPECT_NE(derive_seed(1, "echo"), derive_seed(1, "oneway"));
  EXPECT_NE(derive_seed(1, "echo"), derive_seed(2, "echo"));
  EXPECT_EQ(fnv1a(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(Rng, UniformInRange) {
  Rng r(3);
  for (int i = 0; i < 10'000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Netsim, SinglePacketLatencyIsSerializationPlusPropagation) {
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  const auto c = t.add_node("c");
  t.add_link(a, b, 100e6, 50e-6, 100'000, 100'000);
  t.add_link(b, c, 10e6, 1e-3, 100'000, 100'000);
  Engine e(std::move(t));
  auto* f = add_script(e, a, c, {{0.0, 1'250}});
  e.run(from_seconds(1.0));
  ASSERT_EQ(f->arrivals.size(), 1u);
  // 1,250 B: 100 us at 100 Mb/s, 1 ms at 10 Mb/s.
  const SimTime expected = 100'000 + 50'000 + 1'000'000 + 1'000'000;
  EXPECT_EQ(f->arrivals[0].second, expected);
  EXPECT_EQ(e.unloaded_latency(a, c, 1'250), expected);
  EXPECT_EQ(e.route(a, c), (std::vector<NodeId>{a, b, c}));
}

TEST(Netsim, FifoBackToBackSpacing) {
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  t.add_link(a, b, 8e6, 0.0, 1'000'000, 1'000'000);
  Engine e(std::move(t));
  auto* f = add_script(e, a, b, burst(4, 1'000));
  e.run(from_seconds(1.0));
  ASSERT_EQ(f->arrivals.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(f->arrivals[i].first, i);
    EXPECT_EQ(f->arrivals[i].second, static_cast<SimTime>(i + 1) * 1'000'000);
  }
}

TEST(Netsim, TailDropCountsPacketInServiceOutsideQueue) {
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  t.add_link(a, b, 1e6, 0.0, 3'000, 3'000);
  Engine e(std::move(t));
  auto* f = add_script(e, a, b, burst(5, 1'500));
  e.run(from_seconds(1.0));
  // One in service, two queued, two dropped.
  EXPECT_EQ(f->arrivals.size(), 3u);
  const auto& c = e.counters(f->id());
  EXPECT_EQ(c.emitted, 5);
  EXPECT_EQ(c.delivered, 3);
  EXPECT_EQ(c.dropped, 2);
  EXPECT_EQ(c.in_flight(), 0);
  const auto& q = e.ports()[static_cast<std::size_t>(e.topology().port_towards(a, b))].state;
  EXPECT_EQ(q.arrivals, 5);
  EXPECT_EQ(q.drops_total, 2);
  EXPECT_EQ(q.peak_bytes, 3'000);
  EXPECT_EQ(q.arrivals, q.enqueues_total + q.drops_total);
  EXPECT_EQ(q.occupancy_bytes, 0);
}

TEST(Netsim, OverloadDropFractionMatchesFluidModel) {
  // 110 Mb/s offered into 100 Mb/s for 20 s.
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  t.add_link(a, b, 100e6, 0.0, 64'000, 64'000);
  Engine e(std::move(t));
  std::vector<ScriptFlow::Shot> shots;
  const double gap = 1'250.0 * 8 / 110e6;
  for (int i = 0; i * gap < 20.0; ++i) shots.push_back({i * gap, 1'250});
  auto* f = add_script(e, a, b, shots);
  e.run(from_seconds(25.0));
  const auto& c = e.counters(f->id());
  const double drop = static_cast<double>(c.dropped) / static_cast<double>(c.emitted);
  EXPECT_NEAR(drop, 1.0 - 100.0 / 110.0, 0.005);
  EXPECT_EQ(c.in_flight(), 0);
}

TEST(Netsim, RateLimiterTokenBucket) {
  RateLimiter lim(8e6, 2'000);  // 1 byte per us
  EXPECT_EQ(lim.admit(1'500, 0), RateLimiter::Verdict::Pass);
  EXPECT_EQ(lim.admit(1'500, 0), RateLimiter::Verdict::Drop);
  EXPECT_EQ(lim.admit(1'500, 999'000), RateLimiter::Verdict::Drop);  // 500 + 999 tokens
  EXPECT_EQ(lim.admit(1'500, 1'000'000), RateLimiter::Verdict::Pass);
  EXPECT_NEAR(lim.tokens(), 0.0, 1e-6);
  EXPECT_EQ(lim.admit(100, from_seconds(10.0)), RateLimiter::Verdict::Pass);
  EXPECT_NEAR(lim.tokens(), 1'900.0, 1e-6);  // capped at the burst
  EXPECT_THROW(RateLimiter(-1, 0), std::invalid_argument);
}

TEST(Netsim, IngressLimiterPolicesLongRunRate) {
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  t.add_link(a, b, 100e6, 0.0, 1'000'000, 1'000'000);
  t.add_ingress_limiter(b, a, 4e6, 10'000);
  Engine e(std::move(t));
  std::vector<ScriptFlow::Shot> shots;
  for (int i = 0; i < 10'000; ++i) shots.push_back({i * 1e-3, 1'000});  // 8 Mb/s for 10 s
  auto* f = add_script(e, a, b, shots);
  e.run(from_seconds(11.0));
  const double delivered_bps = static_cast<double>(f->arrivals.size()) * 8'000 / 10.0;
  EXPECT_NEAR(delivered_bps, 4e6 + 10'000 * 8 / 10.0, 0.01e6);
  EXPECT_EQ(e.limiter_drops(), e.counters(f->id()).dropped);
}

TEST(Netsim, SharedMediumRelayCostsTwoAirtimes) {
  Topology t;
  const auto ap = t.add_node("ap");
  const auto s1 = t.add_node("s1");
  const auto s2 = t.add_node("s2");
  MediumSpec m;
  m.name = "wlan";
  m.access_point = ap;
  m.channel_bps = 10e6;
  m.ap_queue_bytes = 100'000;
  m.stations = {{s1, 0.0, 100'000}, {s2, 0.0, 100'000}};
  t.add_medium(m);
  Engine e(std::move(t));
  auto* single = add_script(e, s1, s2, {{0.0, 1'250}});
  auto* f = add_script(e, s1, s2, burst(3, 1'250, 0.5));
  e.run(from_seconds(1.0));
  // Each packet needs 1 ms uplink and 1 ms downlink on one channel.
  ASSERT_EQ(single->arrivals.size(), 1u);
  EXPECT_EQ(single->arrivals[0].second, 2'000'000);
  EXPECT_EQ(e.unloaded_latency(s1, s2, 1'250), 2'000'000);
  ASSERT_EQ(f->arrivals.size(), 3u);
  EXPECT_EQ(f->arrivals.back().second, 6'000'000);
}

TEST(Netsim, SharedMediumEqualAirtimeAcrossRates) {
  Topology t;
  const auto ap = t.add_node("ap");
  const auto slow = t.add_node("slow");
  const auto fast = t.add_node("fast");
  const auto wired = t.add_node("wired");
  t.add_link(ap, wired, 1e9, 0.0, 10'000'000, 10'000'000);
  MediumSpec m;
  m.name = "wlan";
  m.access_point = ap;
  m.channel_bps = 40e6;
  m.ap_queue_bytes = 10'000'000;
  m.stations = {{slow, 10e6, 10'000'000}, {fast, 40e6, 10'000'000}};
  t.add_medium(m);
  Engine e(std::move(t));
  auto* a = add_script(e, slow, wired, burst(4'000, 1'000));
  auto* b = add_script(e, fast, wired, burst(4'000, 1'000));
  e.run(from_seconds(1.0));
  const double slow_air = static_cast<double>(a->arrivals.size()) * 8'000 / 10e6;
  const double fast_air = static_cast<double>(b->arrivals.size()) * 8'000 / 40e6;
  EXPECT_NEAR(slow_air, 0.5, 0.02);
  EXPECT_NEAR(fast_air, 0.5, 0.02);
}

TEST(Netsim, UnreachableSinkIsRejected) {
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  Engine e(std::move(t));
  add_script(e, a, b, {{0.0, 100}});
  EXPECT_THROW(e.run(from_seconds(1.0)), TopologyError);
}

TEST(Netsim, TopologyErrors) {
  Topology t;
  t.add_node("a");
  EXPECT_THROW(t.add_node("a"), TopologyError);
  EXPECT_THROW(t.node("zz"), TopologyError);
  MediumSpec m;
  EXPECT_THROW(t.add_medium(m), TopologyError);
}

TEST(Netsim, SameInstantEventsKeepScheduleOrder) {
  Topology t;
  const auto a = t.add_node("a");
  const auto b = t.add_node("b");
  t.add_link(a, b, 1e9, 0.0, 1'000'000, 1'000'000);
  Engine e(std::move(t));
  EventTrace trace;
  e.set_trace(&trace);
  auto* f = add_script(e, a, b, burst(10, 100, 0.5));
  e.run(from_seconds(1.0));
  for (std::size_t i = 0; i < f->arrivals.size(); ++i) EXPECT_EQ(f->arrivals[i].first, i);
  std::uint64_t prev_id = 0;
  for (const auto& r : trace.records) {
    if (r.event != TraceEvent::Emit) continue;
    EXPECT_GT(r.packet_id, prev_id);
    prev_id = r.packet_id;
  }
}

TEST(Trace, LineFormat) {
  std::ostringstream out;
  write_trace_line(out, {1'500'000'123, 3, 42, TraceEvent::Drop, 2, 1'526});
  EXPECT_EQ(out.str(), "1.500000123 3 42 DROP 2 1526\n");
}

TEST(Trace, HashTraceMatchesEventTrace) {
  auto run = [](TraceSink& sink) {
    Topology t;
    const auto a = t.add_node("a");
    const auto b = t.add_node("b");
    t.add_link(a, b, 1e6, 1e-3, 3'000, 3'000);
    Engine e(std::move(t));
    e.set_trace(&sink);
    add_script(e, a, b, burst(6, 1'000));
    e.run(from_seconds(1.0));
  };
  EventTrace full;
  HashTrace rolling;
  run(full);
  run(rolling);
  EXPECT_EQ(full.hash(), rolling.value());
  EXPECT_EQ(static_cast<std::int64_t>(full.records.size()), rolling.count());
  // 6 emits, 4 enqueued (one goes straight into service), 2 drops, 4 delivers.
  EXPECT_EQ(full.records.size(), 16u);
}

TEST(Engine, RunOnceAndPositiveDuration) {
  Topology t;
  t.add_node("a");
  Engine e(std::move(t));
  EXPECT_THROW(e.run(0), std::invalid_argument);
  e.run(10);
  EXPECT_THROW(e.run(10), std::logic_error);
}
