#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include "mrhost/sim/simulator.hpp"

namespace mrhost::sim {

struct LiveOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 7401;
    double speed = 1.0;  // simulated seconds per wall second
    double reconnect_s = 2.0;
    const std::atomic<bool>* stop = nullptr;
    std::function<void(const std::string&)> log;
};

struct LiveResult {
    std::uint64_t sent = 0;
    std::uint64_t dropped = 0;  // messages produced while a client was disconnected
    std::uint64_t reconnects = 0;
    bool interrupted = false;
};

// Streams the fleet to a server, one TCP connection per client, paced to
// wall time by `speed`. A client whose write fails reconnects after
// reconnect_s with the same id (Hello first). Throws std::runtime_error if the
// initial connections cannot be made.
LiveResult run_live(const SceneConfig& scene, const SimConfig& sim, double duration_s,
                    const LiveOptions& options);

}  // namespace mrhost::sim
