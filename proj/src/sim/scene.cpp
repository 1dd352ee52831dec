#include "mrhost/sim/scene.hpp"

#include <algorithm>
#include <fstream>

#include "mrhost/core/error.hpp"
#include "mrhost/protocol/codec.hpp"

namespace mrhost::sim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Vec3 vec_field(const json& j, const std::string& field) {
    try {
        return protocol::vec_from_json(j);
    } catch (const protocol::ProtocolErrorException&) {
        throw ConfigError(field, "expected [x,y,z] of finite numbers");
    }
}

Aabb box_field(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("min") || !j.contains("max")) {
        throw ConfigError(field, "expected {\"min\":[x,y,z],\"max\":[x,y,z]}");
    }
    Aabb b{vec_field(j["min"], field + ".min"), vec_field(j["max"], field + ".max")};
    if (b.min.x > b.max.x || b.min.y > b.max.y || b.min.z > b.max.z) {
        throw ConfigError(field, "min must not exceed max");
    }
    return b;
}

ordered_json box_json(const Aabb& b) {
    ordered_json j;
    j["min"] = protocol::vec_to_json(b.min);
    j["max"] = protocol::vec_to_json(b.max);
    return j;
}

}  // namespace

double floor_below(const std::vector<double>& floors, double y) {
    if (floors.empty()) return 0.0;
    double best = *std::min_element(floors.begin(), floors.end());
    for (double f : floors) {
        if (f <= y + 1e-9 && f > best) best = f;
    }
    return best;
}

double SceneConfig::floor_below(double y) const { return sim::floor_below(floors, y); }

void SceneConfig::validate() const {
    if (floors.empty()) throw ConfigError("floors", "at least one floor level is required");
    for (std::size_t i = 0; i < floors.size(); ++i) {
        if (floors[i] < bounds.min.y || floors[i] > bounds.max.y) {
            throw ConfigError("floors[" + std::to_string(i) + "]", "outside bounds");
        }
    }
    for (std::size_t i = 0; i < stations.size(); ++i) {
        if (stations[i].id.empty()) {
            throw ConfigError("stations[" + std::to_string(i) + "].id", "must be non-empty");
        }
        if (!bounds.contains(stations[i].position)) {
            throw ConfigError("stations[" + std::to_string(i) + "].position", "outside bounds");
        }
    }
    for (std::size_t i = 0; i < stairs.size(); ++i) {
        Vec3 p = stairs[i];
        p.y = bounds.min.y;
        if (!bounds.contains(p)) {
            throw ConfigError("stairs[" + std::to_string(i) + "]", "outside bounds");
        }
    }
}

SceneConfig scene_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scene", "expected a JSON object");
    static const char* kKnown[] = {"bounds", "floors", "stations", "obstacles", "stairs"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
            throw ConfigError(key, "unknown field");
        }
    }
    SceneConfig s;
    if (j.contains("bounds")) s.bounds = box_field(j["bounds"], "bounds");
    if (j.contains("floors")) {
        if (!j["floors"].is_array()) throw ConfigError("floors", "expected an array");
        s.floors.clear();
        for (const json& f : j["floors"]) {
            if (!f.is_number()) throw ConfigError("floors", "expected numbers");
            s.floors.push_back(f.get<double>());
        }
    }
    if (j.contains("stations")) {
        if (!j["stations"].is_array()) throw ConfigError("stations", "expected an array");
        for (std::size_t i = 0; i < j["stations"].size(); ++i) {
            const json& st = j["stations"][i];
            const std::string field = "stations[" + std::to_string(i) + "]";
            if (!st.is_object() || !st.contains("id") || !st["id"].is_string() ||
                !st.contains("position")) {
                throw ConfigError(field, "expected {\"id\":string,\"position\":[x,y,z]}");
            }
            s.stations.push_back(
                {st["id"].get<std::string>(), vec_field(st["position"], field + ".position")});
        }
    }
    if (j.contains("obstacles")) {
        if (!j["obstacles"].is_array()) throw ConfigError("obstacles", "expected an array");
        for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
            s.obstacles.push_back(
                box_field(j["obstacles"][i], "obstacles[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("stairs")) {
        if (!j["stairs"].is_array()) throw ConfigError("stairs", "expected an array");
        for (std::size_t i = 0; i < j["stairs"].size(); ++i) {
            s.stairs.push_back(vec_field(j["stairs"][i], "stairs[" + std::to_string(i) + "]"));
        }
    }
    s.validate();
    return s;
}

ordered_json to_json(const SceneConfig& s) {
    ordered_json j;
    j["bounds"] = box_json(s.bounds);
    j["floors"] = s.floors;
    j["stations"] = ordered_json::array();
    for (const Station& st : s.stations) {
        j["stations"].push_back({{"id", st.id}, {"position", protocol::vec_to_json(st.position)}});
    }
    j["obstacles"] = ordered_json::array();
    for (const Aabb& b : s.obstacles) j["obstacles"].push_back(box_json(b));
    j["stairs"] = ordered_json::array();
    for (const Vec3& p : s.stairs) j["stairs"].push_back(protocol::vec_to_json(p));
    return j;
}

SceneConfig load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scene", "cannot open " + path.string());
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("scene", "malformed JSON in " + path.string());
    return scene_from_json(j);
}

}  // namespace mrhost::sim
