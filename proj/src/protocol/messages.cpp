#include "mrhost/protocol/messages.hpp"

namespace mrhost::protocol {

namespace {

bool pose_valid(const Pose& p) {
    const Quat& q = p.orientation;
    return is_finite(p.position) && std::isfinite(q.x) && std::isfinite(q.y) &&
           std::isfinite(q.z) && std::isfinite(q.w) && q.is_unit();
}

bool hand_valid(const std::optional<HandFrame>& h) {
    if (!h) return true;
    if (!h->valid()) return false;
    for (const Pose& j : h->joints) {
        if (!pose_valid(j)) return false;
    }
    return true;
}

struct BodyValidator {
    bool operator()(const Hello&) const { return true; }
    bool operator()(const Heartbeat&) const { return true; }
    bool operator()(const PoseMsg& m) const {
        return pose_valid(m.head) && hand_valid(m.left) && hand_valid(m.right);
    }
    bool operator()(const MetricsMsg& m) const { return m.metrics.valid(); }
    bool operator()(const EventMsg& m) const {
        return m.kind != EventKind::Calibration || (m.station && !m.station->empty());
    }
    bool operator()(const ViewFrame& m) const {
        if (m.fmt == FrameFormat::Rgb8) {
            return static_cast<std::uint64_t>(m.w) * m.h * 3 == m.data.size();
        }
        return true;
    }
};

}  // namespace

std::optional<TimeMs> ClientMessage::time() const {
    return std::visit(
        [](const auto& b) -> std::optional<TimeMs> {
            if constexpr (std::is_same_v<std::decay_t<decltype(b)>, Hello>) {
                return std::nullopt;
            } else {
                return b.t;
            }
        },
        body);
}

bool ClientMessage::valid() const {
    return !id.empty() && std::visit(BodyValidator{}, body);
}

const char* to_string(Role r) { return r == Role::Host ? "host" : "visitor"; }

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Calibration: return "calibration";
        case EventKind::TrackingLost: return "tracking_lost";
        case EventKind::TrackingRecovered: return "tracking_recovered";
    }
    return "calibration";
}

const char* to_string(FrameFormat f) { return f == FrameFormat::Rgb8 ? "rgb8" : "stub"; }

std::optional<Role> parse_role(std::string_view s) {
    if (s == "visitor") return Role::Visitor;
    if (s == "host") return Role::Host;
    return std::nullopt;
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
    if (s == "calibration") return EventKind::Calibration;
    if (s == "tracking_lost") return EventKind::TrackingLost;
    if (s == "tracking_recovered") return EventKind::TrackingRecovered;
    return std::nullopt;
}

std::optional<FrameFormat> parse_frame_format(std::string_view s) {
    if (s == "rgb8") return FrameFormat::Rgb8;
    if (s == "stub") return FrameFormat::Stub;
    return std::nullopt;
}

}  // namespace mrhost::protocol
