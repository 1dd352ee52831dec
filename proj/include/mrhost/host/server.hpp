#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "mrhost/host/hub.hpp"
#include "mrhost/host/server_config.hpp"

namespace mrhost::host {

struct ServerStats {
    std::atomic<std::uint64_t> ticks{0};
    std::atomic<std::uint64_t> missed_ticks{0};    // deadlines skipped by a late tick loop
    std::atomic<std::uint64_t> max_tick_late_us{0};  // worst wake-up delay past a deadline
    std::atomic<std::uint64_t> frames_queued{0};   // snapshot frames handed to dashboards
    std::atomic<std::uint64_t> frames_dropped{0};  // discarded by a full dashboard queue
    std::atomic<std::uint64_t> ingest_connections{0};
    std::atomic<std::uint64_t> dashboard_connections{0};
};

// TCP ingest on ingest_port, HTTP + WebSocket (/ws) on dash_port, and the
// tick loop. Binding happens in the constructor, so a port in use fails
// there with std::runtime_error. Port 0 picks a free port.
class Server {
public:
    explicit Server(ServerConfig config);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Blocks until stop(). Runs the io loop on the calling thread and the tick
    // loop on a second thread.
    void run();
    // Safe from any thread or a signal-watching thread.
    void stop();

    std::uint16_t ingest_port() const;
    std::uint16_t dash_port() const;
    const ServerStats& stats() const;
    Hub& hub();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mrhost::host
