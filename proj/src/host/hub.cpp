#include "mrhost/host/hub.hpp"

#include <algorithm>
#include <stdexcept>

#include "mrhost/host/recorder.hpp"
#include "mrhost/protocol/codec.hpp"
#include "mrhost/protocol/control.hpp"
#include "mrhost/protocol/snapshot_codec.hpp"

namespace mrhost::host {

namespace {

session::EngineConfig engine_config(const ServerConfig& c) {
    session::EngineConfig e;
    e.heartbeat_timeout_ms = c.heartbeat_timeout_ms;
    e.filter = c.filter;
    e.filter.window = c.viz.trail_window_ms;
    e.filter.alpha_fade = c.viz.trail_fade_ms;
    return e;
}

}  // namespace

Hub::Hub(const ServerConfig& config)
    : engine_(engine_config(config)),
      viz_(config.viz),
      scene_(config.scene),
      default_host_pose_(config.host_pose) {
    if (config.record_dir) {
        recorder_ = std::make_unique<Recorder>(*config.record_dir);
        recorder_->attach(engine_);
    }
}

Hub::~Hub() = default;

session::ConnId Hub::open_ingest() {
    std::lock_guard lock(mu_);
    return next_conn_++;
}

std::variant<session::IngestOutcome, protocol::ProtocolError> Hub::ingest_line(
    session::ConnId conn, std::string_view line, TimeMs received_at) {
    auto decoded = protocol::decode(line);
    if (auto* err = std::get_if<protocol::ProtocolError>(&decoded)) {
        note_decode_error();
        return *err;
    }
    return ingest(conn, std::get<protocol::ClientMessage>(decoded), received_at);
}

session::IngestOutcome Hub::ingest(session::ConnId conn, const protocol::ClientMessage& msg,
                                   TimeMs received_at) {
    std::lock_guard lock(mu_);
    if (!unreflected_since_) unreflected_since_ = received_at;
    return engine_.ingest(msg, conn, received_at);
}

void Hub::note_decode_error() {
    std::lock_guard lock(mu_);
    engine_.note_decode_error();
}

std::vector<session::SystemEvent> Hub::close_ingest(session::ConnId conn, TimeMs now) {
    std::lock_guard lock(mu_);
    return engine_.disconnect(conn, now);
}

void Hub::submit_control(DashId from, std::string text) {
    std::lock_guard lock(mu_);
    controls_.emplace_back(from, std::move(text));
}

Pose Hub::host_pose(const session::SessionView& view) const {
    if (view.host_pose) return *view.host_pose;
    if (dashboard_host_pose_) return *dashboard_host_pose_;
    return default_host_pose_;
}

TickResult Hub::tick(TimeMs now, std::optional<std::uint64_t> index) {
    TickResult out;
    ticks_ = index ? *index : ticks_ + 1;
    out.tick = ticks_;
    out.t = now;
    session::SessionView view;
    viz::VizConfig cfg;
    Pose host;
    {
        std::lock_guard lock(mu_);
        for (auto& [from, text] : controls_) {
            auto decoded = protocol::decode_control(text);
            if (auto* err = std::get_if<protocol::ProtocolError>(&decoded)) {
                out.replies.emplace_back(
                    from, protocol::encode_error(std::string(protocol::to_string(err->kind)) +
                                                 ": " + err->detail));
                continue;
            }
            const auto& msg = std::get<protocol::ControlMessage>(decoded);
            if (const auto* m = std::get_if<protocol::SetVizConfig>(&msg)) {
                try {
                    viz_ = viz::apply_patch(viz_, m->patch);
                    engine_.set_trail_window(viz_.trail_window_ms, viz_.trail_fade_ms);
                } catch (const ConfigError& e) {
                    out.replies.emplace_back(from, protocol::encode_error(e.what()));
                }
            } else if (const auto* m = std::get_if<protocol::RequestHistory>(&msg)) {
                try {
                    out.replies.emplace_back(
                        from, protocol::encode_history(m->visitor_id, m->up_to_t,
                                                       engine_.get_history(m->visitor_id, m->up_to_t)));
                } catch (const std::out_of_range&) {
                    out.replies.emplace_back(
                        from, protocol::encode_error("unknown visitor '" + m->visitor_id + "'"));
                }
            } else if (const auto* m = std::get_if<protocol::SetHostPose>(&msg)) {
                dashboard_host_pose_ = m->pose;
            }
        }
        controls_.clear();

        out.events = engine_.heartbeat_sweep(now);
        view = engine_.view(now);
        if (unreflected_since_) {
            const double lag = now > *unreflected_since_
                                   ? static_cast<double>(now - *unreflected_since_)
                                   : 0.0;
            max_ingest_lag_ms_ = std::max(max_ingest_lag_ms_, lag);
            unreflected_since_.reset();
        }
        cfg = viz_;
        host = host_pose(view);
    }

    out.snapshot = viz::build_snapshot(view, host, scene_, cfg, area_);
    viz::Diagnostics d;
    d.stale_samples = view.diagnostics.stale_samples;
    d.decode_errors = view.diagnostics.decode_errors;
    d.unknown_visitor = view.diagnostics.unknown_visitor;
    d.connected = view.connected;
    d.tick = out.tick;
    {
        std::lock_guard lock(mu_);
        d.max_ingest_lag_ms = max_ingest_lag_ms_;
    }
    out.snapshot.diagnostics = d;
    out.snapshot.config = viz::to_json(cfg);
    out.encoded = protocol::encode_snapshot(out.snapshot);
    return out;
}

viz::VizConfig Hub::viz_config() const {
    std::lock_guard lock(mu_);
    return viz_;
}

std::optional<session::ViewRef> Hub::view_frame(const std::string& visitor) const {
    std::lock_guard lock(mu_);
    const session::VisitorState* v = engine_.visitor(visitor);
    if (!v) return std::nullopt;
    return v->view;
}

session::Diagnostics Hub::diagnostics() const {
    std::lock_guard lock(mu_);
    return engine_.diagnostics();
}

std::size_t Hub::connected() const {
    std::lock_guard lock(mu_);
    return engine_.connected();
}

}  // namespace mrhost::host
