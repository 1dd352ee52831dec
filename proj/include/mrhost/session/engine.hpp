#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mrhost/protocol/messages.hpp"
#include "mrhost/session/trace.hpp"

namespace mrhost::session {

using ConnId = std::uint64_t;

namespace event {
struct WentOffline {
    std::optional<Vec3> last_position;
};
struct CameOnline {};
struct TrackingLost {};
struct TrackingRecovered {};
struct Calibration {
    std::string station;
    int cumulative_count = 0;
};
}  // namespace event

struct SystemEvent {
    TimeMs t = 0;
    std::string visitor_id;
    std::variant<event::WentOffline, event::CameOnline, event::TrackingLost,
                 event::TrackingRecovered, event::Calibration>
        kind;
};

const char* kind_name(const SystemEvent& e);

struct Online {};
struct Offline {
    TimeMs since = 0;
    std::optional<Vec3> last_position;  // head position of the last received pose
};
struct TrackingOk {};
struct TrackingLost {
    TimeMs since = 0;
    std::optional<Vec3> position;
};

struct ViewRef {
    std::string ref;  // "<visitor>@<t>"
    protocol::ViewFrame frame;
};

struct VisitorState {
    std::string id;
    protocol::Role role = protocol::Role::Visitor;
    std::string model;
    std::size_t join_index = 0;
    std::variant<Online, Offline> connection;
    std::variant<TrackingOk, TrackingLost> tracking;
    // latest.t is session time; has_pose tells whether head is meaningful.
    TelemetrySample latest;
    bool has_pose = false;
    TrajectoryTrace history;
    std::map<std::string, int> calibration_count_by_station;
    std::optional<ViewRef> view;

    TimeMs last_heard = 0;           // server receive clock
    std::optional<TimeMs> last_msg_t;  // sender clock, for staleness
    std::optional<std::int64_t> clock_offset;  // session time minus sender time

    bool online() const { return std::holds_alternative<Online>(connection); }
    bool tracking_ok() const { return std::holds_alternative<TrackingOk>(tracking); }
};

enum class IngestError { UnknownVisitor, StaleTimestamp };
const char* to_string(IngestError e);

struct IngestOutcome {
    std::vector<SystemEvent> events;
    std::optional<IngestError> error;
};

struct EngineConfig {
    TimeMs heartbeat_timeout_ms = 1500;
    FilterParams filter;
};

struct Diagnostics {
    std::uint64_t stale_samples = 0;
    std::uint64_t decode_errors = 0;
    std::uint64_t unknown_visitor = 0;
};

// Point-in-time copy of one visitor, restricted to what geometry needs; the
// trail covers only the live truncation window.
struct VisitorView {
    std::string id;
    protocol::Role role = protocol::Role::Visitor;
    std::size_t join_index = 0;
    bool online = true;
    std::optional<Offline> offline;
    std::optional<TrackingLost> lost;
    std::optional<TelemetrySample> latest;  // absent until the first pose
    std::optional<DeviceMetrics> metrics;
    TimeMs last_t = 0;
    std::vector<FadedSample> trail;
    std::map<std::string, int> calibrations;
    std::optional<std::string> view_ref;

    // Head position, or the last known one when offline.
    std::optional<Vec3> position() const;
};

struct SessionView {
    TimeMs now = 0;
    std::vector<VisitorView> visitors;  // ordered by id
    std::optional<Pose> host_pose;      // from a connected role=host client
    Diagnostics diagnostics;
    std::size_t connected = 0;
};

// Authoritative per-visitor state. Not internally synchronized: the owner
// serializes calls (the server holds one mutex around ingest, sweep and view).
class SessionEngine {
public:
    explicit SessionEngine(EngineConfig config = {});

    // Observers for recording; called synchronously from ingest/sweep.
    std::function<void(const std::string& visitor, const TraceSample&)> on_kept;
    std::function<void(const SystemEvent&)> on_event;

    // `received_at` is the server's session clock (ms). Sender timestamps are
    // mapped onto it with a per-visitor offset fixed at the first timed message.
    IngestOutcome ingest(const protocol::ClientMessage& msg, ConnId conn, TimeMs received_at);

    // Connection closed: the visitor goes offline immediately.
    std::vector<SystemEvent> disconnect(ConnId conn, TimeMs now);

    // Online visitors silent for more than the timeout go offline.
    std::vector<SystemEvent> heartbeat_sweep(TimeMs now);

    // Cumulative kept history up to `up_to_t`, not subject to the live window.
    // Throws std::out_of_range for an unknown visitor.
    std::span<const TraceSample> get_history(const std::string& visitor, TimeMs up_to_t) const;

    void note_decode_error() { ++diagnostics_.decode_errors; }
    void set_trail_window(double window_ms, double fade_ms);

    SessionView view(TimeMs now) const;

    const VisitorState* visitor(const std::string& id) const;
    const std::map<std::string, VisitorState>& visitors() const { return visitors_; }
    const Diagnostics& diagnostics() const { return diagnostics_; }
    const EngineConfig& config() const { return config_; }
    std::size_t connected() const { return conns_.size(); }

private:
    void emit(std::vector<SystemEvent>& out, SystemEvent e);
    void mark_online(VisitorState& v, TimeMs now, std::vector<SystemEvent>& out);
    void mark_offline(VisitorState& v, TimeMs now, std::vector<SystemEvent>& out);
    TimeMs session_time(VisitorState& v, TimeMs sender_t, TimeMs received_at);

    EngineConfig config_;
    std::map<std::string, VisitorState> visitors_;
    std::map<ConnId, std::string> conns_;
    std::size_t next_join_index_ = 0;
    Diagnostics diagnostics_;
};

}  // namespace mrhost::session
