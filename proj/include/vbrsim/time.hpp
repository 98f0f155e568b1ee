#pragma once

#include <cmath>
#include <cstdint>

namespace vbrsim {

// Simulation time in integer nanoseconds; all event arithmetic is exact.
using SimTime = std::int64_t;

constexpr SimTime kNanosPerSecond = 1'000'000'000;

constexpr SimTime from_seconds(double s) {
  return static_cast<SimTime>(s * 1e9 + (s >= 0 ? 0.5 : -0.5));
}
constexpr double to_seconds(SimTime t) { return static_cast<double>(t) * 1e-9; }
constexpr double to_millis(SimTime t) { return static_cast<double>(t) * 1e-6; }

// Serialization time of `bytes` on a link of `bits_per_s`, rounded up to 1 ns.
constexpr SimTime transmission_time(std::int64_t bytes, double bits_per_s) {
  const double ns = static_cast<double>(bytes) * 8.0 * 1e9 / bits_per_s;
  const auto whole = static_cast<SimTime>(ns);
  return static_cast<double>(whole) < ns ? whole + 1 : whole;
}

}  // namespace vbrsim
