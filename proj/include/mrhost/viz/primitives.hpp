#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mrhost/core/color.hpp"
#include "mrhost/core/types.hpp"

namespace mrhost::viz {

// Renderer-agnostic drawables. Positions are world meters; angles degrees.

enum class RibbonPattern { Arrowed, Plain };

struct Ribbon {
    std::vector<Vec3> points;
    std::vector<double> widths;
    std::vector<Rgba> colors;
    RibbonPattern pattern = RibbonPattern::Plain;
    double anim_speed = 0.0;  // pattern units per second along point order
    bool bidirectional = false;
    std::string owner;        // visitor id, empty if none
};

enum class PanelPurpose { View, Info };

struct Panel {
    Vec3 center;
    Vec3 normal;
    Vec3 up;
    std::pair<double, double> size;  // width, height
    std::vector<std::string> lines;
    std::string owner;
    PanelPurpose purpose = PanelPurpose::Info;
};

struct FrustumWire {
    Pose apex;
    double fov_h = 90.0;
    double fov_v = 90.0;
    double depth = 0.5;
    Rgba color;
    std::optional<std::string> face_texture_ref;
    std::string owner;
};

struct BoxWire {
    Vec3 center;
    Vec3 half_extents;
    Rgba color;
    std::string owner;
};

struct Arrow {
    Vec3 position;
    double height = 0.6;
    Rgba color;
    std::string owner;
};

struct CircleSet {
    Vec3 center;
    std::vector<double> radii;  // strictly increasing
    std::vector<Rgba> colors;
    std::string station;
};

struct SquareOutline {
    double center_x = 0.0;
    double center_z = 0.0;
    double y = 0.0;
    double side = 0.0;
    Rgba color;

    // XZ containment with a small tolerance for rounding.
    bool contains_xz(double x, double z, double tol = 1e-9) const;
};

enum class Hand { Left, Right };

struct Skeleton {
    std::vector<Pose> joints;
    double axis_len = 0.02;
    Hand hand = Hand::Left;
    std::string owner;
};

struct HeadMarker {
    Pose pose;
    std::string owner;
};

enum class MarkerKind { Offline, TrackingLost };

struct EventMarker {
    Vec3 position;
    MarkerKind kind = MarkerKind::Offline;
    double age_s = 0.0;
    std::string owner;
};

using GeometryPrimitive = std::variant<Ribbon, Panel, FrustumWire, BoxWire, Arrow, CircleSet,
                                       SquareOutline, Skeleton, HeadMarker, EventMarker>;

// Wire tag of a primitive ("ribbon", "panel", "frustum", "box", "arrow",
// "circles", "square", "skeleton", "head", "event").
const char* kind_name(const GeometryPrimitive& p);

// Per-visitor line of the dashboard's roster.
struct VisitorSummary {
    std::string id;
    std::string role;
    bool online = true;
    bool tracking = true;
    std::optional<Vec3> position;
    std::optional<double> fps;
    std::optional<double> battery;
    Rgba color;
    TimeMs last_t = 0;
    std::map<std::string, int> calibrations;
};

struct Diagnostics {
    std::uint64_t stale_samples = 0;
    std::uint64_t decode_errors = 0;
    std::uint64_t unknown_visitor = 0;
    std::size_t connected = 0;
    std::uint64_t tick = 0;
    double max_ingest_lag_ms = 0.0;
};

struct SceneSnapshot {
    TimeMs t = 0;
    std::vector<VisitorSummary> visitors;
    std::vector<GeometryPrimitive> primitives;
    // Present on server snapshots; a bare snapshot serializes without them.
    std::optional<Diagnostics> diagnostics;
    std::optional<nlohmann::ordered_json> config;
};

}  // namespace mrhost::viz
