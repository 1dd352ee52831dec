#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrhost/session/engine.hpp"
#include "mrhost/sim/scene.hpp"
#include "mrhost/viz/config.hpp"
#include "mrhost/viz/primitives.hpp"

namespace mrhost::viz {

using session::VisitorView;

// Where the host stands: head pose plus the floor level under it.
struct HostContext {
    Pose pose;
    double floor_y = 0.0;
};

inline constexpr std::size_t kCurveSamples = 32;
inline constexpr double kSubjectViewOffset = 0.45;
inline constexpr double kViewPanelSize = 0.3;
inline constexpr double kViewGridPitch = 0.34;
inline constexpr double kGridCellAzDeg = 18.0;
inline constexpr double kGridCellElDeg = 12.0;
inline constexpr double kFloorLayoutDistance = 2.0;
inline constexpr double kInfoPanelPitch = 0.25;
inline constexpr double kMiniFrustumDepth = 0.15;
inline constexpr double kTrailWidth = 0.03;
inline constexpr std::size_t kMaxCalibrationCircles = 8;

using BezierControls = std::array<Vec3, 4>;

Vec3 bezier_point(const BezierControls& c, double u);
// `n` points at u = i/(n-1).
std::vector<Vec3> sample_bezier(const BezierControls& c, std::size_t n = kCurveSamples);

// Rendered view and frustum ---------------------------------------------------

FrustumWire view_frustum(const VisitorView& visitor, const VizConfig& cfg);
// Far-face corners in world space: top-left, top-right, bottom-right, bottom-left.
std::array<Vec3, 4> frustum_far_corners(const FrustumWire& f);

// View panel beside the visitor's head, on whichever side sits farther from
// the host's line of sight to the visitor, billboarded to the host.
Panel place_view_subject(const VisitorView& visitor, const Pose& host);

enum class ViewLayout { Sphere, Grid };

struct ViewArray {
    ViewLayout layout = ViewLayout::Sphere;
    std::size_t columns = 0;
    std::size_t rows = 0;
    std::vector<Panel> panels;
};

// Host-centric views on a hemisphere around the host's head, falling back to a
// body-centric grid when two views would overlap (or when forced).
ViewArray place_views_host(std::span<const VisitorView> visitors, const HostContext& host,
                           const VizConfig& cfg);

// Locators ---------------------------------------------------------------------

Arrow locator_arrow(const VisitorView& visitor, const VizConfig& cfg);

BezierControls link_controls(const Pose& host, Vec3 visitor_head);
bool link_excluded(const Pose& host, Vec3 visitor_head, const VizConfig& cfg);

// nullopt when the visitor is close and in front of the host.
std::optional<Ribbon> link_curve(const HostContext& host, const VisitorView& visitor,
                                 const VizConfig& cfg);

// Square on the floor around all online visitors, smoothed over time but
// always containing every visitor. nullopt with no online visitor.
std::optional<SquareOutline> area_indicator(std::span<const VisitorView> visitors,
                                            const std::optional<SquareOutline>& prev, double dt_s,
                                            const std::vector<double>& floors,
                                            const VizConfig& cfg);

// Performance ------------------------------------------------------------------

std::vector<std::string> info_lines(const VisitorView& visitor);
Panel info_panel_subject(const VisitorView& visitor, const Pose& host);
// Panels for every visitor under the configured placement and level.
std::vector<Panel> info_panels(std::span<const VisitorView> visitors, const HostContext& host,
                               const VizConfig& cfg);

BoxWire perf_bbox(const VisitorView& visitor, const std::vector<double>& floors);

std::optional<Ribbon> fps_line(const HostContext& host, const VisitorView& visitor,
                               const VizConfig& cfg);

struct PoseGlyphs {
    std::vector<Skeleton> hands;
    HeadMarker head;
};
PoseGlyphs hand_skeleton(const VisitorView& visitor);

double bandwidth_width(double bps, const VizConfig& cfg);
double latency_anim_speed(double latency_ms);
// Two parallel ribbons 0.1 m apart: [0] device -> server sized by upload,
// [1] server -> device sized by download. Empty if the endpoints coincide.
std::vector<Ribbon> net_traffic_curve(Vec3 device, Vec3 server, const DeviceMetrics& metrics,
                                      const VizConfig& cfg, const std::string& owner = {});

struct TrajectoryGlyphs {
    std::optional<Ribbon> ribbon;
    std::vector<FrustumWire> mini_frustums;
};
// Indices of trail samples that get a mini-frustum.
std::vector<std::size_t> mini_frustum_indices(std::span<const Vec3> points, double spacing);
TrajectoryGlyphs trajectory_geometry(std::span<const session::FadedSample> trail,
                                     const VizConfig& cfg, const std::string& owner = {});

// Events -----------------------------------------------------------------------

EventMarker offline_marker(const session::SystemEvent& went_offline, TimeMs now);
CircleSet calib_circles(const sim::Station& station, int count);

// Snapshot ---------------------------------------------------------------------

struct AreaState {
    std::optional<SquareOutline> square;
    std::optional<TimeMs> t;
};

// Concatenates every enabled visualization, ordered by visualization kind and
// then visitor id. `area` carries the smoothed square between ticks.
SceneSnapshot build_snapshot(const session::SessionView& session, const Pose& host_pose,
                             const sim::SceneConfig& scene, const VizConfig& cfg, AreaState& area);

VisitorSummary summarize(const VisitorView& visitor);

}  // namespace mrhost::viz
