#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrhost/core/vec.hpp"

namespace mrhost::sim {

struct Aabb {
    Vec3 min;
    Vec3 max;

    bool contains(Vec3 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
               p.z <= max.z;
    }
    // Strict interior in XZ only; obstacles block walking regardless of height.
    bool blocks_xz(Vec3 p) const {
        return p.x > min.x && p.x < max.x && p.z > min.z && p.z < max.z;
    }
};

struct Station {
    std::string id;
    Vec3 position;
};

struct SceneConfig {
    Aabb bounds{{-15.0, 0.0, -10.0}, {15.0, 4.0, 10.0}};
    std::vector<double> floors{0.0};  // y-levels
    std::vector<Station> stations;
    std::vector<Aabb> obstacles;
    // XZ spots where visitors may change floors. Empty means no floor changes.
    std::vector<Vec3> stairs;

    // Highest floor level at or below `y`; the lowest floor if none is below.
    double floor_below(double y) const;
    // Throws viz::ConfigError naming the offending field.
    void validate() const;
};

SceneConfig scene_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SceneConfig& scene);
SceneConfig load_scene(const std::filesystem::path& path);

// Highest level in `floors` at or below y; lowest level otherwise; 0 if empty.
double floor_below(const std::vector<double>& floors, double y);

}  // namespace mrhost::sim
