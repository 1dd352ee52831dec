#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrhost/protocol/messages.hpp"
#include "mrhost/sim/scene.hpp"

namespace mrhost::sim {

enum class IncidentKind { FpsDip, Offline, TrackingLoss };

struct Incident {
    double t_start = 0.0;   // seconds
    double duration = 0.0;  // seconds
    std::string visitor;    // visitor id, e.g. "v03"
    IncidentKind kind = IncidentKind::Offline;
};

struct SimConfig {
    std::uint64_t seed = 42;
    std::size_t n_visitors = 8;
    double walk_speed = 1.2;         // m/s
    double pose_hz = 20.0;
    double metrics_hz = 1.0;
    double battery_drain = 1.67e-4;  // fraction per second
    double fps_base = 72.0;
    double fps_noise_sd = 1.5;
    std::vector<Incident> scripted_incidents;
    double calibration_rate = 0.2;   // events per minute per visitor
    double heartbeat_ms = 500.0;
    double view_hz = 0.2;            // stub rendered-view frames; 0 disables
    double max_turn_deg_s = 90.0;
    bool hands = true;
    bool include_host = false;       // adds a stationary "h01" host client

    // Throws ConfigError naming the field. `duration_s` bounds incidents.
    void validate(const SceneConfig& scene, double duration_s) const;
};

SimConfig sim_config_from_json(const nlohmann::json& j);
SimConfig load_sim_config(const std::filesystem::path& path);

// "v01", "v02", ...
std::string visitor_id(std::size_t index);

struct SimMessage {
    std::size_t client = 0;  // visitor index; the host (if any) comes last
    protocol::ClientMessage msg;
};

class ClientStream;

// Deterministic fleet: every client is an independent stream seeded from the
// master seed, merged here in (time, client) order. Streams start with Hello,
// then carry strictly increasing timestamps up to the duration.
class FleetSimulator {
public:
    FleetSimulator(SceneConfig scene, SimConfig sim, double duration_s);
    ~FleetSimulator();
    FleetSimulator(FleetSimulator&&) noexcept;
    FleetSimulator& operator=(FleetSimulator&&) noexcept;

    std::optional<SimMessage> next();

    std::size_t client_count() const;
    std::string client_id(std::size_t client) const;
    // Sender time of the next message of `client`, or nullopt when exhausted.
    std::optional<TimeMs> peek_time(std::size_t client) const;

private:
    std::shared_ptr<const void> state_;
    std::vector<std::unique_ptr<ClientStream>> clients_;
};

// Runs the whole simulation and collects the stream.
std::vector<SimMessage> simulate(const SceneConfig& scene, const SimConfig& sim, double duration_s);

}  // namespace mrhost::sim
