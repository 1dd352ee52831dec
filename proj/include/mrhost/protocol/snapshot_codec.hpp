#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "mrhost/session/trace.hpp"
#include "mrhost/viz/primitives.hpp"

namespace mrhost::protocol {

// Every real number in a snapshot is rounded to this many decimals before it
// is printed, so equal inputs serialize to equal bytes on every platform.
inline constexpr int kSnapshotDecimals = 5;

double fixed(double v);

nlohmann::ordered_json primitive_to_json(const viz::GeometryPrimitive& p);
nlohmann::ordered_json snapshot_to_json(const viz::SceneSnapshot& snap);

// Single-line JSON without a trailing newline (one WebSocket text frame).
std::string encode_snapshot(const viz::SceneSnapshot& snap);

std::string encode_history(const std::string& visitor, TimeMs up_to_t,
                           std::span<const session::TraceSample> samples);

std::string encode_error(const std::string& message);

}  // namespace mrhost::protocol
