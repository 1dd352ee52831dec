#include "mrhost/viz/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "mrhost/protocol/codec.hpp"

namespace mrhost::viz {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

bool& flag_ref(VizFlags& f, std::string_view key, bool& found) {
    found = true;
    if (key == "rendered_view") return f.rendered_view;
    if (key == "frustum") return f.frustum;
    if (key == "arrow") return f.arrow;
    if (key == "link_curve") return f.link_curve;
    if (key == "area") return f.area;
    if (key == "panel") return f.panel;
    if (key == "bbox") return f.bbox;
    if (key == "fps_line") return f.fps_line;
    if (key == "hand_skeleton") return f.hand_skeleton;
    if (key == "net_traffic") return f.net_traffic;
    if (key == "trajectory") return f.trajectory;
    if (key == "offline_markers") return f.offline_markers;
    if (key == "calib_circles") return f.calib_circles;
    found = false;
    return f.rendered_view;
}

constexpr const char* kFlagKeys[] = {"rendered_view", "frustum",       "arrow",     "link_curve",
                                     "area",          "panel",         "bbox",      "fps_line",
                                     "hand_skeleton", "net_traffic",   "trajectory",
                                     "offline_markers", "calib_circles"};

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
    return d;
}

template <typename Enum>
Enum enum_value(const json& v, const std::string& key,
                std::initializer_list<std::pair<const char*, Enum>> options) {
    if (v.is_string()) {
        for (const auto& [name, value] : options) {
            if (v.get_ref<const std::string&>() == name) return value;
        }
    }
    std::string allowed;
    for (const auto& [name, value] : options) {
        if (!allowed.empty()) allowed += "|";
        allowed += name;
    }
    throw ConfigError(key, "expected one of " + allowed);
}

using Setter = std::function<void(VizConfig&, const json&, const std::string&)>;

Setter number_setter(double VizConfig::*member) {
    return [member](VizConfig& c, const json& v, const std::string& k) { c.*member = number(v, k); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"placement",
         [](VizConfig& c, const json& v, const std::string& k) {
             c.placement = enum_value<Placement>(
                 v, k, {{"subject", Placement::SubjectCentric}, {"host", Placement::HostCentric}});
         }},
        {"level",
         [](VizConfig& c, const json& v, const std::string& k) {
             c.level = enum_value<Level>(v, k, {{"eye", Level::Eye}, {"floor", Level::Floor}});
         }},
        {"grid_mode",
         [](VizConfig& c, const json& v, const std::string& k) {
             c.grid_mode = enum_value<GridMode>(v, k,
                                                {{"auto", GridMode::Auto},
                                                 {"grid", GridMode::ForceGrid},
                                                 {"sphere", GridMode::ForceSphere}});
         }},
        {"flatten_links",
         [](VizConfig& c, const json& v, const std::string& k) {
             if (!v.is_boolean()) throw ConfigError(k, "expected a boolean");
             c.flatten_links = v.get<bool>();
         }},
        {"server_anchor",
         [](VizConfig& c, const json& v, const std::string& k) {
             try {
                 c.server_anchor = protocol::vec_from_json(v);
             } catch (const protocol::ProtocolErrorException&) {
                 throw ConfigError(k, "expected [x,y,z]");
             }
         }},
        {"hemisphere_radius", number_setter(&VizConfig::hemisphere_radius)},
        {"curve_w_min", number_setter(&VizConfig::curve_w_min)},
        {"curve_w_max", number_setter(&VizConfig::curve_w_max)},
        {"exclusion_dist", number_setter(&VizConfig::exclusion_dist)},
        {"exclusion_half_angle", number_setter(&VizConfig::exclusion_half_angle)},
        {"frustum_depth", number_setter(&VizConfig::frustum_depth)},
        {"fov_h", number_setter(&VizConfig::fov_h)},
        {"fov_v", number_setter(&VizConfig::fov_v)},
        {"mini_frustum_spacing", number_setter(&VizConfig::mini_frustum_spacing)},
        {"arrow_height", number_setter(&VizConfig::arrow_height)},
        {"panel_distance", number_setter(&VizConfig::panel_distance)},
        {"area_margin", number_setter(&VizConfig::area_margin)},
        {"area_smoothing", number_setter(&VizConfig::area_smoothing)},
        {"trail_window_ms", number_setter(&VizConfig::trail_window_ms)},
        {"trail_fade_ms", number_setter(&VizConfig::trail_fade_ms)},
    };
    return table;
}

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be > 0");
}

}  // namespace

void validate(const VizConfig& c) {
    require_positive(c.hemisphere_radius, "hemisphere_radius");
    require_positive(c.curve_w_min, "curve_w_min");
    require_positive(c.curve_w_max, "curve_w_max");
    if (c.curve_w_min > c.curve_w_max) throw ConfigError("curve_w_min", "must be <= curve_w_max");
    require_positive(c.exclusion_dist, "exclusion_dist");
    require_positive(c.exclusion_half_angle, "exclusion_half_angle");
    if (c.exclusion_half_angle > 180.0) throw ConfigError("exclusion_half_angle", "must be <= 180");
    require_positive(c.frustum_depth, "frustum_depth");
    require_positive(c.fov_h, "fov_h");
    require_positive(c.fov_v, "fov_v");
    if (c.fov_h >= 180.0) throw ConfigError("fov_h", "must be < 180");
    if (c.fov_v >= 180.0) throw ConfigError("fov_v", "must be < 180");
    require_positive(c.mini_frustum_spacing, "mini_frustum_spacing");
    require_positive(c.arrow_height, "arrow_height");
    require_positive(c.panel_distance, "panel_distance");
    require_positive(c.area_margin, "area_margin");
    require_positive(c.area_smoothing, "area_smoothing");
    require_positive(c.trail_window_ms, "trail_window_ms");
    require_positive(c.trail_fade_ms, "trail_fade_ms");
    if (!is_finite(c.server_anchor)) throw ConfigError("server_anchor", "must be finite");
}

VizConfig merge_patch(const VizConfig& base, const json& patch) {
    if (!patch.is_object()) throw ConfigError("patch", "expected a JSON object");
    VizConfig out = base;
    for (const auto& [key, value] : patch.items()) {
        bool is_flag = false;
        bool& flag = flag_ref(out.enabled, key, is_flag);
        if (is_flag) {
            if (!value.is_boolean()) throw ConfigError(key, "expected a boolean");
            flag = value.get<bool>();
            continue;
        }
        auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, "unknown field");
        it->second(out, value, key);
    }
    return out;
}

VizConfig apply_patch(const VizConfig& base, const json& patch) {
    VizConfig out = merge_patch(base, patch);
    validate(out);
    return out;
}

ordered_json to_json(const VizConfig& c) {
    ordered_json j;
    VizFlags flags = c.enabled;
    for (const char* key : kFlagKeys) {
        bool found = false;
        j[key] = flag_ref(flags, key, found);
    }
    j["placement"] = c.placement == Placement::HostCentric ? "host" : "subject";
    j["level"] = c.level == Level::Floor ? "floor" : "eye";
    j["grid_mode"] = c.grid_mode == GridMode::ForceGrid     ? "grid"
                     : c.grid_mode == GridMode::ForceSphere ? "sphere"
                                                            : "auto";
    j["hemisphere_radius"] = c.hemisphere_radius;
    j["curve_w_min"] = c.curve_w_min;
    j["curve_w_max"] = c.curve_w_max;
    j["flatten_links"] = c.flatten_links;
    j["exclusion_dist"] = c.exclusion_dist;
    j["exclusion_half_angle"] = c.exclusion_half_angle;
    j["frustum_depth"] = c.frustum_depth;
    j["fov_h"] = c.fov_h;
    j["fov_v"] = c.fov_v;
    j["mini_frustum_spacing"] = c.mini_frustum_spacing;
    j["arrow_height"] = c.arrow_height;
    j["panel_distance"] = c.panel_distance;
    j["area_margin"] = c.area_margin;
    j["area_smoothing"] = c.area_smoothing;
    j["trail_window_ms"] = c.trail_window_ms;
    j["trail_fade_ms"] = c.trail_fade_ms;
    j["server_anchor"] = protocol::vec_to_json(c.server_anchor);
    return j;
}

}  // namespace mrhost::viz
