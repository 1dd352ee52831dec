#include "mrhost/host/replay.hpp"

#include <cmath>

namespace mrhost::host {

Replay::Replay(const ServerConfig& server, const sim::SimConfig& sim, double duration_s)
    : hub_(server),
      fleet_(server.scene, sim, duration_s),
      tick_ms_(server.tick_ms()),
      duration_ms_(static_cast<TimeMs>(std::llround(duration_s * 1000.0))) {
    for (std::size_t i = 0; i < fleet_.client_count(); ++i) conns_.push_back(hub_.open_ingest());
    pending_ = fleet_.next();
}

std::optional<TickResult> Replay::step() {
    const TimeMs now = (ticks_ + 1) * tick_ms_;
    if (now > duration_ms_) return std::nullopt;
    ++ticks_;
    std::vector<session::SystemEvent> events;
    while (pending_ && pending_->msg.time().value_or(0) <= now) {
        auto r = hub_.ingest(conns_[pending_->client], pending_->msg,
                             pending_->msg.time().value_or(0));
        for (auto& e : r.events) events.push_back(std::move(e));
        pending_ = fleet_.next();
    }
    TickResult out = hub_.tick(now);
    events.insert(events.end(), out.events.begin(), out.events.end());
    out.events = std::move(events);
    return out;
}

void replay(const ServerConfig& server, const sim::SimConfig& sim, double duration_s,
            const std::function<void(const TickResult&)>& on_tick) {
    Replay r(server, sim, duration_s);
    while (auto t = r.step()) on_tick(*t);
}

}  // namespace mrhost::host
