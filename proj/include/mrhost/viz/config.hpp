#pragma once

#include <string>

#include <json.hpp>

#include "mrhost/core/error.hpp"
#include "mrhost/core/types.hpp"

namespace mrhost::viz {

enum class Placement { SubjectCentric, HostCentric };
enum class Level { Eye, Floor };
enum class GridMode { Auto, ForceGrid, ForceSphere };

struct VizFlags {
    bool rendered_view = true;
    bool frustum = true;
    bool arrow = true;
    bool link_curve = true;
    bool area = true;
    bool panel = true;
    bool bbox = true;
    bool fps_line = false;
    bool hand_skeleton = true;
    bool net_traffic = false;
    bool trajectory = true;
    bool offline_markers = true;
    bool calib_circles = true;

    friend bool operator==(const VizFlags&, const VizFlags&) = default;
};

// Host-adjustable switches and parameters for every visualization. Lengths in
// meters, angles in degrees.
struct VizConfig {
    VizFlags enabled;
    Placement placement = Placement::SubjectCentric;
    Level level = Level::Eye;
    double hemisphere_radius = 1.5;
    GridMode grid_mode = GridMode::Auto;
    double curve_w_min = 0.01;
    double curve_w_max = 0.15;
    bool flatten_links = false;
    double exclusion_dist = 2.0;
    double exclusion_half_angle = 40.0;
    double frustum_depth = 0.5;
    double fov_h = 90.0;
    double fov_v = 90.0;
    double mini_frustum_spacing = 0.5;
    double arrow_height = 0.6;
    double panel_distance = 1.2;
    double area_margin = 0.5;
    double area_smoothing = 0.5;  // seconds
    // Live trail truncation for trajectories.
    double trail_window_ms = 120000.0;
    double trail_fade_ms = 10000.0;
    // Server end of the network-traffic curves.
    Vec3 server_anchor{0.0, 3.0, 0.0};

    friend bool operator==(const VizConfig&, const VizConfig&) = default;
};

// Throws ConfigError on the first violated invariant.
void validate(const VizConfig& cfg);

// Copies `base` with the patch's fields overwritten. Checks keys and value
// types only; throws ConfigError on an unknown key or a mistyped value.
VizConfig merge_patch(const VizConfig& base, const nlohmann::json& patch);

// Applies a flat JSON patch ({"area": false, "curve_w_max": 0.2, ...}) to a
// copy of `base` and validates the result. Unknown keys are rejected.
VizConfig apply_patch(const VizConfig& base, const nlohmann::json& patch);

nlohmann::ordered_json to_json(const VizConfig& cfg);

}  // namespace mrhost::viz
