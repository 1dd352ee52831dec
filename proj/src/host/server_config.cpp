#include "mrhost/host/server_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mrhost/core/error.hpp"
#include "mrhost/protocol/codec.hpp"

namespace mrhost::host {

using nlohmann::json;

namespace {

std::uint16_t port(const json& v, const char* key) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 65535) {
        throw ConfigError(key, "expected a port number in [0, 65535]");
    }
    return static_cast<std::uint16_t>(v.get<std::uint64_t>());
}

std::filesystem::path path_value(const json& v, const char* key,
                                 const std::filesystem::path& base) {
    if (!v.is_string()) throw ConfigError(key, "expected a path string");
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

std::uint64_t ServerConfig::tick_ms() const {
    return static_cast<std::uint64_t>(std::llround(1000.0 / tick_hz));
}

void ServerConfig::validate() const {
    if (!std::isfinite(tick_hz) || tick_hz < 1.0 || tick_hz > 60.0) {
        throw ConfigError("tick_hz", "must be in [1, 60]");
    }
    if (heartbeat_timeout_ms == 0) throw ConfigError("heartbeat_timeout_ms", "must be > 0");
    if (!filter.valid()) throw ConfigError("filter", "eps_pos, eps_ang and t_max must be > 0");
    if (!host_pose.orientation.is_unit()) throw ConfigError("host_pose", "quaternion must be unit");
    scene.validate();
    viz::validate(viz);
}

ServerConfig server_config_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    ServerConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "bind") {
            if (!v.is_string()) throw ConfigError("bind", "expected an address string");
            c.bind_address = v.get<std::string>();
        } else if (key == "ingest_port") {
            c.ingest_port = port(v, "ingest_port");
        } else if (key == "dash_port") {
            c.dash_port = port(v, "dash_port");
        } else if (key == "tick_hz") {
            if (!v.is_number()) throw ConfigError("tick_hz", "expected a number");
            c.tick_hz = v.get<double>();
        } else if (key == "heartbeat_timeout_ms") {
            if (!v.is_number_unsigned()) {
                throw ConfigError("heartbeat_timeout_ms", "expected a positive integer");
            }
            c.heartbeat_timeout_ms = v.get<std::uint64_t>();
        } else if (key == "scene") {
            if (v.is_string()) {
                c.scene = sim::load_scene(path_value(v, "scene", base_dir));
            } else {
                c.scene = sim::scene_from_json(v);
            }
        } else if (key == "viz") {
            c.viz = viz::merge_patch(c.viz, v);
        } else if (key == "filter") {
            if (!v.is_object()) throw ConfigError("filter", "expected an object");
            for (const auto& [fk, fv] : v.items()) {
                const std::string field = "filter." + fk;
                if (!fv.is_number()) throw ConfigError(field, "expected a number");
                if (fk == "eps_pos") {
                    c.filter.eps_pos = fv.get<double>();
                } else if (fk == "eps_ang") {
                    c.filter.eps_ang = fv.get<double>();
                } else if (fk == "t_max") {
                    c.filter.t_max = fv.get<double>();
                } else {
                    throw ConfigError(field, "unknown field");
                }
            }
        } else if (key == "host_pose") {
            try {
                c.host_pose = protocol::pose_from_json(v);
            } catch (const protocol::ProtocolErrorException& e) {
                throw ConfigError("host_pose", e.error.detail);
            }
        } else if (key == "record_dir") {
            if (!v.is_null()) c.record_dir = path_value(v, "record_dir", base_dir);
        } else if (key == "static_dir") {
            if (!v.is_null()) c.static_dir = path_value(v, "static_dir", base_dir);
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    c.filter.window = c.viz.trail_window_ms;
    c.filter.alpha_fade = c.viz.trail_fade_ms;
    return c;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config", "malformed JSON in " + path.string());
    return server_config_from_json(j, path.parent_path());
}

}  // namespace mrhost::host
