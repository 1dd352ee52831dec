#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mrhost/core/types.hpp"

namespace mrhost::protocol {

enum class Role { Visitor, Host };

struct Hello {
    Role role = Role::Visitor;
    std::string model;
    friend bool operator==(const Hello&, const Hello&) = default;
};

struct Heartbeat {
    TimeMs t = 0;
    friend bool operator==(const Heartbeat&, const Heartbeat&) = default;
};

struct PoseMsg {
    TimeMs t = 0;
    Pose head;
    std::optional<HandFrame> left;
    std::optional<HandFrame> right;
    friend bool operator==(const PoseMsg&, const PoseMsg&) = default;
};

struct MetricsMsg {
    TimeMs t = 0;
    DeviceMetrics metrics;
    friend bool operator==(const MetricsMsg&, const MetricsMsg&) = default;
};

enum class EventKind { Calibration, TrackingLost, TrackingRecovered };

struct EventMsg {
    TimeMs t = 0;
    EventKind kind = EventKind::Calibration;
    std::optional<std::string> station;  // required for Calibration
    friend bool operator==(const EventMsg&, const EventMsg&) = default;
};

enum class FrameFormat { Rgb8, Stub };

struct ViewFrame {
    TimeMs t = 0;
    std::uint32_t w = 0;
    std::uint32_t h = 0;
    FrameFormat fmt = FrameFormat::Stub;
    std::vector<std::uint8_t> data;
    friend bool operator==(const ViewFrame&, const ViewFrame&) = default;
};

using ClientBody = std::variant<Hello, Heartbeat, PoseMsg, MetricsMsg, EventMsg, ViewFrame>;

// Every line on the ingress stream names its sender.
struct ClientMessage {
    std::string id;
    ClientBody body;

    // Timestamp of the body; Hello carries none.
    std::optional<TimeMs> time() const;
    // Checks the invariants the decoder enforces (unit quaternions, metric
    // ranges, hand joint counts, station on calibration, rgb8 byte length).
    bool valid() const;
    friend bool operator==(const ClientMessage&, const ClientMessage&) = default;
};

const char* to_string(Role r);
const char* to_string(EventKind k);
const char* to_string(FrameFormat f);
std::optional<Role> parse_role(std::string_view s);
std::optional<EventKind> parse_event_kind(std::string_view s);
std::optional<FrameFormat> parse_frame_format(std::string_view s);

}  // namespace mrhost::protocol
