#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mrhost/session/trace.hpp"
#include "mrhost/sim/scene.hpp"
#include "mrhost/viz/config.hpp"

namespace mrhost::host {

struct ServerConfig {
    std::string bind_address = "0.0.0.0";
    std::uint16_t ingest_port = 7401;
    std::uint16_t dash_port = 7402;
    double tick_hz = 10.0;
    std::uint64_t heartbeat_timeout_ms = 1500;
    sim::SceneConfig scene;
    viz::VizConfig viz;
    session::FilterParams filter;  // window/alpha_fade follow viz.trail_*
    // Used until a role=host client or a dashboard supplies one.
    Pose host_pose{{0.0, 1.7, 0.0}, Quat::identity()};
    std::optional<std::filesystem::path> record_dir;
    std::optional<std::filesystem::path> static_dir;

    std::uint64_t tick_ms() const;
    // Throws ConfigError naming the field.
    void validate() const;
};

// Relative paths ("scene" given as a file name, record_dir, static_dir) are
// resolved against `base_dir`. Unknown keys are rejected.
ServerConfig server_config_from_json(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir = {});
ServerConfig load_server_config(const std::filesystem::path& path);

}  // namespace mrhost::host
