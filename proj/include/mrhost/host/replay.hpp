#pragma once

#include <functional>
#include <optional>

#include "mrhost/host/hub.hpp"
#include "mrhost/sim/simulator.hpp"

namespace mrhost::host {

// Drives a Hub from the simulator in virtual time: every message is received
// at its sender timestamp, and tick k fires at k * tick_ms after all messages
// stamped at or before it. Output depends only on the configs and the seed.
class Replay {
public:
    Replay(const ServerConfig& server, const sim::SimConfig& sim, double duration_s);

    // Runs the next tick; nullopt once past the duration.
    std::optional<TickResult> step();

    Hub& hub() { return hub_; }
    std::uint64_t ticks() const { return ticks_; }

private:
    Hub hub_;
    sim::FleetSimulator fleet_;
    std::vector<session::ConnId> conns_;
    std::optional<sim::SimMessage> pending_;
    TimeMs tick_ms_;
    TimeMs duration_ms_;
    std::uint64_t ticks_ = 0;
};

// Convenience: runs to the end, calling `on_tick` for every tick.
void replay(const ServerConfig& server, const sim::SimConfig& sim, double duration_s,
            const std::function<void(const TickResult&)>& on_tick);

}  // namespace mrhost::host
