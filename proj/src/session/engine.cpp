#include "mrhost/session/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace mrhost::session {

using protocol::ClientMessage;
using protocol::Role;

const char* kind_name(const SystemEvent& e) {
    struct Namer {
        const char* operator()(const event::WentOffline&) const { return "went_offline"; }
        const char* operator()(const event::CameOnline&) const { return "came_online"; }
        const char* operator()(const event::TrackingLost&) const { return "tracking_lost"; }
        const char* operator()(const event::TrackingRecovered&) const {
            return "tracking_recovered";
        }
        const char* operator()(const event::Calibration&) const { return "calibration"; }
    };
    return std::visit(Namer{}, e.kind);
}

const char* to_string(IngestError e) {
    return e == IngestError::UnknownVisitor ? "UnknownVisitor" : "StaleTimestamp";
}

std::optional<Vec3> VisitorView::position() const {
    if (offline) return offline->last_position;
    if (latest) return latest->head.position;
    return std::nullopt;
}

SessionEngine::SessionEngine(EngineConfig config) : config_(config) {}

void SessionEngine::emit(std::vector<SystemEvent>& out, SystemEvent e) {
    if (on_event) on_event(e);
    out.push_back(std::move(e));
}

void SessionEngine::mark_online(VisitorState& v, TimeMs now, std::vector<SystemEvent>& out) {
    if (v.online()) return;
    v.connection = Online{};
    if (v.role == Role::Visitor) emit(out, {now, v.id, event::CameOnline{}});
}

void SessionEngine::mark_offline(VisitorState& v, TimeMs now, std::vector<SystemEvent>& out) {
    if (!v.online()) return;
    std::optional<Vec3> last;
    if (v.has_pose) last = v.latest.head.position;
    v.connection = Offline{now, last};
    if (v.role == Role::Visitor) emit(out, {now, v.id, event::WentOffline{last}});
}

TimeMs SessionEngine::session_time(VisitorState& v, TimeMs sender_t, TimeMs received_at) {
    if (!v.clock_offset) {
        v.clock_offset = static_cast<std::int64_t>(received_at) - static_cast<std::int64_t>(sender_t);
    }
    const std::int64_t t = static_cast<std::int64_t>(sender_t) + *v.clock_offset;
    return t < 0 ? 0 : static_cast<TimeMs>(t);
}

IngestOutcome SessionEngine::ingest(const ClientMessage& msg, ConnId conn, TimeMs received_at) {
    IngestOutcome out;

    if (const auto* hello = std::get_if<protocol::Hello>(&msg.body)) {
        conns_[conn] = msg.id;
        auto [it, inserted] = visitors_.try_emplace(msg.id);
        VisitorState& v = it->second;
        if (inserted) {
            v.id = msg.id;
            v.role = hello->role;
            v.history = TrajectoryTrace(config_.filter);
            if (v.role == Role::Visitor) v.join_index = next_join_index_++;
        }
        v.model = hello->model;
        v.last_heard = received_at;
        mark_online(v, received_at, out.events);
        return out;
    }

    auto conn_it = conns_.find(conn);
    if (conn_it == conns_.end() || conn_it->second != msg.id) {
        ++diagnostics_.unknown_visitor;
        out.error = IngestError::UnknownVisitor;
        return out;
    }
    VisitorState& v = visitors_.at(conn_it->second);

    const TimeMs sender_t = msg.time().value_or(0);
    if (v.last_msg_t && sender_t < *v.last_msg_t) {
        ++diagnostics_.stale_samples;
        out.error = IngestError::StaleTimestamp;
        return out;
    }
    v.last_msg_t = sender_t;
    v.last_heard = received_at;
    const TimeMs t = session_time(v, sender_t, received_at);
    mark_online(v, received_at, out.events);

    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, protocol::PoseMsg>) {
                v.latest.t = t;
                v.latest.head = body.head;
                v.latest.left = body.left;
                v.latest.right = body.right;
                v.has_pose = true;
                std::optional<double> fps;
                if (v.latest.metrics) fps = v.latest.metrics->fps;
                const TraceSample sample{t, body.head, fps};
                if (v.role == Role::Visitor && v.history.offer(sample) && on_kept) {
                    on_kept(v.id, sample);
                }
            } else if constexpr (std::is_same_v<T, protocol::MetricsMsg>) {
                v.latest.metrics = body.metrics;
            } else if constexpr (std::is_same_v<T, protocol::EventMsg>) {
                switch (body.kind) {
                    case protocol::EventKind::Calibration: {
                        const std::string& station = body.station.value_or("");
                        const int count = ++v.calibration_count_by_station[station];
                        emit(out.events, {t, v.id, event::Calibration{station, count}});
                        break;
                    }
                    case protocol::EventKind::TrackingLost:
                        if (v.tracking_ok()) {
                            std::optional<Vec3> where;
                            if (v.has_pose) where = v.latest.head.position;
                            v.tracking = TrackingLost{t, where};
                            emit(out.events, {t, v.id, event::TrackingLost{}});
                        }
                        break;
                    case protocol::EventKind::TrackingRecovered:
                        if (!v.tracking_ok()) {
                            v.tracking = TrackingOk{};
                            emit(out.events, {t, v.id, event::TrackingRecovered{}});
                        }
                        break;
                }
            } else if constexpr (std::is_same_v<T, protocol::ViewFrame>) {
                v.view = ViewRef{v.id + "@" + std::to_string(t), body};
            }
        },
        msg.body);
    return out;
}

std::vector<SystemEvent> SessionEngine::disconnect(ConnId conn, TimeMs now) {
    std::vector<SystemEvent> out;
    auto it = conns_.find(conn);
    if (it == conns_.end()) return out;
    const std::string id = it->second;
    conns_.erase(it);
    for (const auto& [other, vid] : conns_) {
        if (vid == id) return out;  // still reachable over a newer connection
    }
    mark_offline(visitors_.at(id), now, out);
    return out;
}

std::vector<SystemEvent> SessionEngine::heartbeat_sweep(TimeMs now) {
    std::vector<SystemEvent> out;
    for (auto& [id, v] : visitors_) {
        if (v.online() && now > v.last_heard && now - v.last_heard > config_.heartbeat_timeout_ms) {
            mark_offline(v, now, out);
        }
    }
    return out;
}

std::span<const TraceSample> SessionEngine::get_history(const std::string& visitor,
                                                        TimeMs up_to_t) const {
    auto it = visitors_.find(visitor);
    if (it == visitors_.end() || it->second.role != Role::Visitor) {
        throw std::out_of_range("unknown visitor: " + visitor);
    }
    return it->second.history.up_to(up_to_t);
}

void SessionEngine::set_trail_window(double window_ms, double fade_ms) {
    config_.filter.window = window_ms;
    config_.filter.alpha_fade = fade_ms;
    for (auto& [id, v] : visitors_) v.history.set_window(window_ms, fade_ms);
}

const VisitorState* SessionEngine::visitor(const std::string& id) const {
    auto it = visitors_.find(id);
    return it == visitors_.end() ? nullptr : &it->second;
}

SessionView SessionEngine::view(TimeMs now) const {
    SessionView out;
    out.now = now;
    out.diagnostics = diagnostics_;
    out.connected = conns_.size();
    const double window = config_.filter.window;
    const double fade = config_.filter.alpha_fade;
    const double start = static_cast<double>(now) - window;
    const TimeMs cutoff = start <= 0.0 ? 0 : static_cast<TimeMs>(std::ceil(start));

    for (const auto& [id, v] : visitors_) {
        if (v.role == Role::Host) {
            if (v.online() && v.has_pose && !out.host_pose) out.host_pose = v.latest.head;
            continue;
        }
        VisitorView vv;
        vv.id = id;
        vv.role = v.role;
        vv.join_index = v.join_index;
        vv.online = v.online();
        if (const auto* off = std::get_if<Offline>(&v.connection)) vv.offline = *off;
        if (const auto* lost = std::get_if<TrackingLost>(&v.tracking)) vv.lost = *lost;
        if (v.has_pose) vv.latest = v.latest;
        vv.metrics = v.latest.metrics;
        vv.last_t = v.latest.t;
        vv.trail = truncate_and_alpha(v.history.since(cutoff), now, window, fade);
        vv.calibrations = v.calibration_count_by_station;
        if (v.view) vv.view_ref = v.view->ref;
        out.visitors.push_back(std::move(vv));
    }
    return out;
}

}  // namespace mrhost::session
