#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrhost/core/vec.hpp"

namespace mrhost {

// Milliseconds since session start.
using TimeMs = std::uint64_t;

struct DeviceMetrics {
    double fps = 0.0;          // Hz
    double battery = 1.0;      // [0,1]
    double cpu = 0.0;          // [0,1]
    double gpu = 0.0;          // [0,1]
    double net_in_bps = 0.0;
    double net_out_bps = 0.0;
    double latency_ms = 0.0;

    bool valid() const;
    friend bool operator==(const DeviceMetrics&, const DeviceMetrics&) = default;
};

// OpenXR joint order: palm, wrist, 4 thumb joints, then 5 joints for each of
// the four fingers.
inline constexpr std::size_t kHandJointCount = 26;

struct HandFrame {
    bool tracked = false;
    std::vector<Pose> joints;  // kHandJointCount entries when tracked, else empty

    bool valid() const { return tracked ? joints.size() == kHandJointCount : joints.empty(); }
    friend bool operator==(const HandFrame&, const HandFrame&) = default;
};

struct TelemetrySample {
    TimeMs t = 0;
    Pose head;
    std::optional<HandFrame> left;
    std::optional<HandFrame> right;
    std::optional<DeviceMetrics> metrics;

    friend bool operator==(const TelemetrySample&, const TelemetrySample&) = default;
};

}  // namespace mrhost
