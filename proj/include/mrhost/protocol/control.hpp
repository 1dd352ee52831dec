#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "mrhost/protocol/codec.hpp"

namespace mrhost::protocol {

// Dashboard -> server messages on the WebSocket.

struct SetVizConfig {
    nlohmann::json patch;  // flat object of VizConfig fields
    friend bool operator==(const SetVizConfig&, const SetVizConfig&) = default;
};

struct RequestHistory {
    std::string visitor_id;
    TimeMs up_to_t = std::numeric_limits<TimeMs>::max();
    friend bool operator==(const RequestHistory&, const RequestHistory&) = default;
};

struct SetHostPose {
    Pose pose;
    friend bool operator==(const SetHostPose&, const SetHostPose&) = default;
};

using ControlMessage = std::variant<SetVizConfig, RequestHistory, SetHostPose>;
using ControlDecodeResult = std::variant<ControlMessage, ProtocolError>;

std::string encode_control(const ControlMessage& msg);

// Patches are checked against the VizConfig field set here; unknown keys and
// mistyped values come back as BadValue naming the field.
ControlDecodeResult decode_control(std::string_view text);

}  // namespace mrhost::protocol
