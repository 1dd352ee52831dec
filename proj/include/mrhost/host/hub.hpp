#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mrhost/host/server_config.hpp"
#include "mrhost/protocol/codec.hpp"
#include "mrhost/session/engine.hpp"
#include "mrhost/viz/geometry.hpp"

namespace mrhost::host {

class Recorder;

using DashId = std::uint64_t;

struct TickResult {
    std::uint64_t tick = 0;
    TimeMs t = 0;
    viz::SceneSnapshot snapshot;
    std::string encoded;
    // One-off replies (history, errors) addressed to a single dashboard.
    std::vector<std::pair<DashId, std::string>> replies;
    std::vector<session::SystemEvent> events;  // from this tick's sweep (Replay adds ingest events)
};

// Transport-free service core: the session engine, the active VizConfig and
// the queued control messages. Thread-safe; ingestion and tick() may run on
// different threads. Geometry is built in tick() from a copied view, outside
// the lock.
class Hub {
public:
    explicit Hub(const ServerConfig& config);
    ~Hub();

    session::ConnId open_ingest();
    // Decodes one line; decode failures are counted and reported.
    std::variant<session::IngestOutcome, protocol::ProtocolError> ingest_line(
        session::ConnId conn, std::string_view line, TimeMs received_at);
    session::IngestOutcome ingest(session::ConnId conn, const protocol::ClientMessage& msg,
                                  TimeMs received_at);
    void note_decode_error();
    std::vector<session::SystemEvent> close_ingest(session::ConnId conn, TimeMs now);

    // Queued; applied at the start of the next tick, in arrival order.
    void submit_control(DashId from, std::string text);

    // Drain controls, sweep, snapshot. `index` overrides the tick counter so a
    // caller that skips late ticks leaves a visible gap.
    TickResult tick(TimeMs now, std::optional<std::uint64_t> index = std::nullopt);

    viz::VizConfig viz_config() const;
    std::optional<session::ViewRef> view_frame(const std::string& visitor) const;
    session::Diagnostics diagnostics() const;
    std::size_t connected() const;

private:
    Pose host_pose(const session::SessionView& view) const;

    mutable std::mutex mu_;
    session::SessionEngine engine_;
    std::unique_ptr<Recorder> recorder_;
    viz::VizConfig viz_;
    sim::SceneConfig scene_;
    Pose default_host_pose_;
    std::optional<Pose> dashboard_host_pose_;
    std::vector<std::pair<DashId, std::string>> controls_;
    session::ConnId next_conn_ = 1;
    std::optional<TimeMs> unreflected_since_;
    double max_ingest_lag_ms_ = 0.0;

    // Tick thread only.
    viz::AreaState area_;
    std::uint64_t ticks_ = 0;
};

}  // namespace mrhost::host
