#include "mrhost/viz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mrhost::viz {

namespace {

constexpr double kEyeHeightOffset = 0.3;   // info panel above the head
constexpr double kBoxHeadroom = 0.2;
constexpr double kBoxHalfWidth = 0.3;
constexpr double kSkeletonAxisLen = 0.02;
constexpr double kFlattenLift = 0.01;
constexpr double kNetLaneOffset = 0.05;

Vec3 host_forward_h(const Pose& host) { return horizontal(host.forward()); }
Vec3 host_right_h(const Pose& host) { return cross(host_forward_h(host), kWorldUp); }

// Normal from `center` toward `target`, or `fallback` when they coincide.
Vec3 facing(Vec3 center, Vec3 target, Vec3 fallback) {
    return normalize_or(target - center, normalize_or(fallback, {0.0, 0.0, 1.0}));
}

Rgba fps_or_gray(const std::optional<DeviceMetrics>& m) {
    return m ? fps_color(m->fps) : colors::kNeutralGray;
}

Ribbon curve_ribbon(const BezierControls& ctrl, const VizConfig& cfg, std::optional<double> flat_y) {
    Ribbon r;
    r.points = sample_bezier(ctrl, kCurveSamples);
    if (flat_y) {
        for (Vec3& p : r.points) p.y = *flat_y;
    }
    r.widths.resize(r.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(r.points.size() - 1);
        r.widths[i] = cfg.curve_w_min + (cfg.curve_w_max - cfg.curve_w_min) * u;
    }
    return r;
}

std::string format(const char* fmt, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, a);
    return buf;
}

}  // namespace

Vec3 bezier_point(const BezierControls& c, double u) {
    const double v = 1.0 - u;
    return c[0] * (v * v * v) + c[1] * (3.0 * v * v * u) + c[2] * (3.0 * v * u * u) +
           c[3] * (u * u * u);
}

std::vector<Vec3> sample_bezier(const BezierControls& c, std::size_t n) {
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(bezier_point(c, static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return out;
}

FrustumWire view_frustum(const VisitorView& visitor, const VizConfig& cfg) {
    FrustumWire f;
    f.apex = visitor.latest ? visitor.latest->head : Pose{};
    f.fov_h = cfg.fov_h;
    f.fov_v = cfg.fov_v;
    f.depth = cfg.frustum_depth;
    f.color = identity_color(visitor.join_index);
    f.face_texture_ref = visitor.view_ref;
    f.owner = visitor.id;
    return f;
}

std::array<Vec3, 4> frustum_far_corners(const FrustumWire& f) {
    const double hx = std::tan(deg_to_rad(f.fov_h / 2.0)) * f.depth;
    const double hy = std::tan(deg_to_rad(f.fov_v / 2.0)) * f.depth;
    const std::array<Vec3, 4> local{Vec3{-hx, hy, -f.depth}, Vec3{hx, hy, -f.depth},
                                    Vec3{hx, -hy, -f.depth}, Vec3{-hx, -hy, -f.depth}};
    std::array<Vec3, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = f.apex.position + rotate(f.apex.orientation, local[i]);
    }
    return out;
}

Panel place_view_subject(const VisitorView& visitor, const Pose& host) {
    const Pose head = visitor.latest ? visitor.latest->head : Pose{};
    const Vec3 right = head.right();
    const Vec3 axis = head.position - host.position;
    const Vec3 right_center = head.position + right * kSubjectViewOffset;
    const Vec3 left_center = head.position - right * kSubjectViewOffset;
    const double right_angle = angle_between_deg(right_center - host.position, axis);
    const double left_angle = angle_between_deg(left_center - host.position, axis);

    Panel p;
    p.center = left_angle > right_angle ? left_center : right_center;
    p.normal = facing(p.center, host.position, head.forward());
    p.up = kWorldUp;
    p.size = {kViewPanelSize, kViewPanelSize};
    p.owner = visitor.id;
    p.purpose = PanelPurpose::View;
    return p;
}

namespace {

struct Bearing {
    double az_deg;
    double el_deg;
};

Bearing bearing_of(Vec3 dir) {
    return {rad_to_deg(std::atan2(dir.x, -dir.z)),
            rad_to_deg(std::asin(std::clamp(dir.y, -1.0, 1.0)))};
}

double wrapped_diff_deg(double a, double b) {
    double d = std::fmod(std::abs(a - b), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

}  // namespace

ViewArray place_views_host(std::span<const VisitorView> visitors, const HostContext& host,
                           const VizConfig& cfg) {
    const Vec3 head = host.pose.position;
    const Vec3 fwd = host_forward_h(host.pose);
    const Vec3 right = host_right_h(host.pose);

    std::vector<const VisitorView*> shown;
    for (const VisitorView& v : visitors) {
        if (v.online && v.latest) shown.push_back(&v);
    }

    ViewArray out;
    std::vector<Vec3> dirs;
    for (const VisitorView* v : shown) {
        Vec3 d = normalize_or(v->latest->head.position - head, fwd);
        if (cfg.level == Level::Eye && d.y < 0.0) {
            d.y = 0.0;
            d = normalize_or(d, fwd);
        }
        dirs.push_back(d);
    }

    bool overlap = false;
    for (std::size_t i = 0; i < dirs.size() && !overlap; ++i) {
        const Bearing bi = bearing_of(dirs[i]);
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            const Bearing bj = bearing_of(dirs[j]);
            if (wrapped_diff_deg(bi.az_deg, bj.az_deg) < kGridCellAzDeg &&
                std::abs(bi.el_deg - bj.el_deg) < kGridCellElDeg) {
                overlap = true;
                break;
            }
        }
    }
    const bool grid = cfg.grid_mode == GridMode::ForceGrid ||
                      (cfg.grid_mode == GridMode::Auto && overlap);

    if (!grid) {
        out.layout = ViewLayout::Sphere;
        for (std::size_t i = 0; i < shown.size(); ++i) {
            Panel p;
            p.center = head + dirs[i] * cfg.hemisphere_radius;
            p.normal = -dirs[i];
            p.up = kWorldUp;
            p.size = {kViewPanelSize, kViewPanelSize};
            p.owner = shown[i]->id;
            p.purpose = PanelPurpose::View;
            out.panels.push_back(std::move(p));
        }
        return out;
    }

    // Row-major by bearing from the host's left to right, then id.
    std::vector<std::pair<double, const VisitorView*>> ordered;
    for (const VisitorView* v : shown) {
        const Vec3 d = v->latest->head.position - head;
        ordered.emplace_back(rad_to_deg(std::atan2(dot(d, right), dot(d, fwd))), v);
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->id < b.second->id;
    });

    const std::size_t n = ordered.size();
    out.layout = ViewLayout::Grid;
    out.columns = n == 0 ? 0 : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    out.rows = n == 0 ? 0 : (n + out.columns - 1) / out.columns;

    const bool floor = cfg.level == Level::Floor;
    const Vec3 origin = floor ? Vec3{head.x, host.floor_y + kFlattenLift, head.z} +
                                    fwd * kFloorLayoutDistance
                              : head + fwd * cfg.hemisphere_radius;
    const Vec3 row_axis = floor ? fwd : kWorldUp;
    for (std::size_t i = 0; i < n; ++i) {
        const double col = static_cast<double>(i % out.columns);
        const double row = static_cast<double>(i / out.columns);
        const double x = (col - (static_cast<double>(out.columns) - 1.0) / 2.0) * kViewGridPitch;
        const double y = ((static_cast<double>(out.rows) - 1.0) / 2.0 - row) * kViewGridPitch;
        Panel p;
        p.center = origin + right * x + row_axis * y;
        p.normal = floor ? kWorldUp : -fwd;
        p.up = floor ? fwd : kWorldUp;
        p.size = {kViewPanelSize, kViewPanelSize};
        p.owner = ordered[i].second->id;
        p.purpose = PanelPurpose::View;
        out.panels.push_back(std::move(p));
    }
    return out;
}

Arrow locator_arrow(const VisitorView& visitor, const VizConfig& cfg) {
    const Vec3 anchor = visitor.position().value_or(Vec3{});
    Arrow a;
    a.position = anchor + Vec3{0.0, cfg.arrow_height, 0.0};
    a.height = cfg.arrow_height;
    const Rgba base = identity_color(visitor.join_index);
    a.color = visitor.online ? base : desaturate(base);
    a.owner = visitor.id;
    return a;
}

BezierControls link_controls(const Pose& host, Vec3 visitor_head) {
    const Vec3 fwd = host.forward();
    const Vec3 anchor = host.position + fwd * 0.4 - kWorldUp * 0.2;
    return {anchor, anchor + fwd * 1.0, visitor_head + kWorldUp * 1.0, visitor_head};
}

bool link_excluded(const Pose& host, Vec3 visitor_head, const VizConfig& cfg) {
    const Vec3 to_visitor = visitor_head - host.position;
    return norm(to_visitor) < cfg.exclusion_dist &&
           angle_between_deg(host.forward(), to_visitor) < cfg.exclusion_half_angle;
}

std::optional<Ribbon> link_curve(const HostContext& host, const VisitorView& visitor,
                                 const VizConfig& cfg) {
    if (!visitor.latest) return std::nullopt;
    const Vec3 target = visitor.latest->head.position;
    if (link_excluded(host.pose, target, cfg)) return std::nullopt;
    std::optional<double> flat;
    if (cfg.flatten_links) flat = host.floor_y + kFlattenLift;
    Ribbon r = curve_ribbon(link_controls(host.pose, target), cfg, flat);
    r.colors.assign(r.points.size(), identity_color(visitor.join_index));
    r.pattern = RibbonPattern::Arrowed;
    r.anim_speed = 1.0;
    r.owner = visitor.id;
    return r;
}

std::optional<SquareOutline> area_indicator(std::span<const VisitorView> visitors,
                                            const std::optional<SquareOutline>& prev, double dt_s,
                                            const std::vector<double>& floors,
                                            const VizConfig& cfg) {
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -min_x, min_z = min_x, max_z = -min_x;
    double floor_y = std::numeric_limits<double>::infinity();
    std::vector<Vec3> points;
    for (const VisitorView& v : visitors) {
        if (!v.online || !v.latest) continue;
        const Vec3 p = v.latest->head.position;
        points.push_back(p);
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_z = std::min(min_z, p.z);
        max_z = std::max(max_z, p.z);
        floor_y = std::min(floor_y, sim::floor_below(floors, p.y));
    }
    if (points.empty()) return std::nullopt;

    SquareOutline raw;
    raw.center_x = (min_x + max_x) / 2.0;
    raw.center_z = (min_z + max_z) / 2.0;
    raw.side = std::max(max_x - min_x, max_z - min_z) + 2.0 * cfg.area_margin;
    raw.y = floor_y;
    raw.color = Rgba{1.0, 0.85, 0.2, 1.0};
    if (!prev) return raw;

    const double alpha = dt_s > 0.0 ? 1.0 - std::exp(-dt_s / cfg.area_smoothing) : 0.0;
    SquareOutline out = raw;
    out.center_x = prev->center_x + (raw.center_x - prev->center_x) * alpha;
    out.center_z = prev->center_z + (raw.center_z - prev->center_z) * alpha;
    out.side = prev->side + (raw.side - prev->side) * alpha;
    double reach = 0.0;
    for (const Vec3& p : points) {
        reach = std::max({reach, std::abs(p.x - out.center_x), std::abs(p.z - out.center_z)});
    }
    out.side = std::max(out.side, 2.0 * reach);
    return out;
}

std::vector<std::string> info_lines(const VisitorView& visitor) {
    std::string status = "ONLINE";
    if (!visitor.online) {
        status = "OFFLINE";
    } else if (visitor.lost) {
        status = "TRACKING LOST";
    }
    if (!visitor.metrics) return {visitor.id, "no data", status};
    const DeviceMetrics& m = *visitor.metrics;
    const auto pct = [](double f) { return std::to_string(std::lround(f * 100.0)) + "%"; };
    return {visitor.id, format("FPS %.1f", m.fps), "BAT " + pct(m.battery),
            "CPU " + pct(m.cpu) + " GPU " + pct(m.gpu), status};
}

Panel info_panel_subject(const VisitorView& visitor, const Pose& host) {
    const Vec3 anchor = visitor.position().value_or(Vec3{});
    const Vec3 fwd = visitor.latest ? visitor.latest->head.forward() : Vec3{0.0, 0.0, -1.0};
    Panel p;
    p.center = anchor + Vec3{0.0, kEyeHeightOffset, 0.0};
    p.normal = facing(p.center, host.position, fwd);
    p.up = kWorldUp;
    p.size = {0.5, 0.22};
    p.lines = info_lines(visitor);
    p.owner = visitor.id;
    p.purpose = PanelPurpose::Info;
    return p;
}

std::vector<Panel> info_panels(std::span<const VisitorView> visitors, const HostContext& host,
                               const VizConfig& cfg) {
    std::vector<Panel> out;
    if (cfg.placement == Placement::SubjectCentric) {
        for (const VisitorView& v : visitors) {
            if (v.position()) out.push_back(info_panel_subject(v, host.pose));
        }
        return out;
    }
    const Vec3 head = host.pose.position;
    const Vec3 fwd = host_forward_h(host.pose);
    const double n = static_cast<double>(visitors.size());
    for (std::size_t i = 0; i < visitors.size(); ++i) {
        Panel p;
        const double k = static_cast<double>(i);
        if (cfg.level == Level::Eye) {
            p.center = head + fwd * cfg.panel_distance +
                       kWorldUp * (((n - 1.0) / 2.0 - k) * kInfoPanelPitch);
            p.normal = -fwd;
            p.up = kWorldUp;
        } else {
            p.center = Vec3{head.x, host.floor_y + kFlattenLift, head.z} +
                       fwd * (kFloorLayoutDistance + k * kInfoPanelPitch);
            p.normal = kWorldUp;
            p.up = fwd;
        }
        p.size = {0.5, 0.22};
        p.lines = info_lines(visitors[i]);
        p.owner = visitors[i].id;
        p.purpose = PanelPurpose::Info;
        out.push_back(std::move(p));
    }
    return out;
}

BoxWire perf_bbox(const VisitorView& visitor, const std::vector<double>& floors) {
    const Vec3 head = visitor.position().value_or(Vec3{});
    const double floor_y = sim::floor_below(floors, head.y);
    const double top = head.y + kBoxHeadroom;
    BoxWire b;
    b.center = {head.x, (floor_y + top) / 2.0, head.z};
    b.half_extents = {kBoxHalfWidth, (top - floor_y) / 2.0, kBoxHalfWidth};
    b.color = fps_or_gray(visitor.metrics);
    b.owner = visitor.id;
    return b;
}

std::optional<Ribbon> fps_line(const HostContext& host, const VisitorView& visitor,
                               const VizConfig& cfg) {
    std::optional<Ribbon> r = link_curve(host, visitor, cfg);
    if (!r) return r;
    r->colors.assign(r->points.size(), fps_or_gray(visitor.metrics));
    r->pattern = RibbonPattern::Plain;
    r->anim_speed = 0.0;
    return r;
}

PoseGlyphs hand_skeleton(const VisitorView& visitor) {
    PoseGlyphs out;
    if (!visitor.latest) return out;
    const auto add = [&](const std::optional<HandFrame>& h, Hand which) {
        if (h && h->tracked && h->joints.size() == kHandJointCount) {
            out.hands.push_back({h->joints, kSkeletonAxisLen, which, visitor.id});
        }
    };
    add(visitor.latest->left, Hand::Left);
    add(visitor.latest->right, Hand::Right);
    out.head = {visitor.latest->head, visitor.id};
    return out;
}

double bandwidth_width(double bps, const VizConfig& cfg) {
    const double u = bps > 0.0 ? std::clamp((std::log10(bps) - 3.0) / 5.0, 0.0, 1.0) : 0.0;
    return cfg.curve_w_min + (cfg.curve_w_max - cfg.curve_w_min) * u;
}

double latency_anim_speed(double latency_ms) {
    return 2.0 / std::max(latency_ms / 100.0, 0.1);
}

std::vector<Ribbon> net_traffic_curve(Vec3 device, Vec3 server, const DeviceMetrics& metrics,
                                      const VizConfig& cfg, const std::string& owner) {
    const double span = distance(device, server);
    if (span < 1e-9) return {};
    const Vec3 side = normalize_or(cross(server - device, kWorldUp), {1.0, 0.0, 0.0});
    const Vec3 lift = kWorldUp * (0.3 * span);
    const double speed = latency_anim_speed(metrics.latency_ms);

    const auto lane = [&](Vec3 from, Vec3 to, Vec3 offset, double bps) {
        const BezierControls c{from + offset, from + lift + offset, to + lift + offset, to + offset};
        Ribbon r;
        r.points = sample_bezier(c, kCurveSamples);
        r.widths.assign(r.points.size(), bandwidth_width(bps, cfg));
        r.colors.assign(r.points.size(), Rgba{0.2, 0.8, 1.0, 1.0});
        r.pattern = RibbonPattern::Arrowed;
        r.anim_speed = speed;
        r.bidirectional = true;
        r.owner = owner;
        return r;
    };
    return {lane(device, server, side * kNetLaneOffset, metrics.net_out_bps),
            lane(server, device, side * -kNetLaneOffset, metrics.net_in_bps)};
}

std::vector<std::size_t> mini_frustum_indices(std::span<const Vec3> points, double spacing) {
    std::vector<std::size_t> out;
    if (points.empty()) return out;
    out.push_back(0);
    double run = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        run += distance(points[i - 1], points[i]);
        if (run >= spacing - 1e-9) {
            out.push_back(i);
            run = 0.0;
        }
    }
    return out;
}

TrajectoryGlyphs trajectory_geometry(std::span<const session::FadedSample> trail,
                                     const VizConfig& cfg, const std::string& owner) {
    TrajectoryGlyphs out;
    if (trail.empty()) return out;
    std::vector<Vec3> points;
    std::vector<Rgba> colors;
    points.reserve(trail.size());
    for (const session::FadedSample& s : trail) {
        points.push_back(s.sample.pose.position);
        Rgba c = s.sample.fps ? fps_color(*s.sample.fps) : colors::kNeutralGray;
        c.a = s.alpha;
        colors.push_back(c);
    }
    for (std::size_t i : mini_frustum_indices(points, cfg.mini_frustum_spacing)) {
        FrustumWire f;
        f.apex = trail[i].sample.pose;
        f.fov_h = cfg.fov_h;
        f.fov_v = cfg.fov_v;
        f.depth = kMiniFrustumDepth;
        f.color = colors[i];
        f.owner = owner;
        out.mini_frustums.push_back(std::move(f));
    }
    if (points.size() >= 2) {
        Ribbon r;
        r.widths.assign(points.size(), kTrailWidth);
        r.points = std::move(points);
        r.colors = std::move(colors);
        r.pattern = RibbonPattern::Plain;
        r.owner = owner;
        out.ribbon = std::move(r);
    }
    return out;
}

EventMarker offline_marker(const session::SystemEvent& went_offline, TimeMs now) {
    EventMarker m;
    if (const auto* off = std::get_if<session::event::WentOffline>(&went_offline.kind)) {
        m.position = off->last_position.value_or(Vec3{});
    }
    m.kind = MarkerKind::Offline;
    m.age_s = now >= went_offline.t ? static_cast<double>(now - went_offline.t) / 1000.0 : 0.0;
    m.owner = went_offline.visitor_id;
    return m;
}

CircleSet calib_circles(const sim::Station& station, int count) {
    CircleSet c;
    c.center = station.position;
    c.station = station.id;
    const std::size_t n = count <= 0 ? 0 : std::min<std::size_t>(count, kMaxCalibrationCircles);
    for (std::size_t i = 0; i < n; ++i) {
        c.radii.push_back(0.4 + 0.15 * static_cast<double>(i));
        const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        c.colors.push_back(lerp_color(colors::kBlue, colors::kRed, u));
    }
    return c;
}

VisitorSummary summarize(const VisitorView& v) {
    VisitorSummary s;
    s.id = v.id;
    s.role = protocol::to_string(v.role);
    s.online = v.online;
    s.tracking = !v.lost.has_value();
    s.position = v.position();
    if (v.metrics) {
        s.fps = v.metrics->fps;
        s.battery = v.metrics->battery;
    }
    s.color = identity_color(v.join_index);
    s.last_t = v.last_t;
    s.calibrations = v.calibrations;
    return s;
}

SceneSnapshot build_snapshot(const session::SessionView& session, const Pose& host_pose,
                             const sim::SceneConfig& scene, const VizConfig& cfg, AreaState& area) {
    SceneSnapshot snap;
    snap.t = session.now;
    const std::span<const VisitorView> visitors = session.visitors;
    for (const VisitorView& v : visitors) snap.visitors.push_back(summarize(v));

    const HostContext host{host_pose, scene.floor_below(host_pose.position.y)};
    const VizFlags& on = cfg.enabled;
    auto& prims = snap.primitives;
    const auto live = [](const VisitorView& v) { return v.online && v.latest.has_value(); };

    if (on.rendered_view) {
        if (cfg.placement == Placement::SubjectCentric) {
            for (const VisitorView& v : visitors) {
                if (live(v)) prims.emplace_back(place_view_subject(v, host_pose));
            }
        } else {
            for (Panel& p : place_views_host(visitors, host, cfg).panels) {
                prims.emplace_back(std::move(p));
            }
        }
    }
    if (on.frustum) {
        for (const VisitorView& v : visitors) {
            if (live(v)) prims.emplace_back(view_frustum(v, cfg));
        }
    }
    if (on.arrow) {
        for (const VisitorView& v : visitors) {
            if (v.position()) prims.emplace_back(locator_arrow(v, cfg));
        }
    }
    if (on.link_curve) {
        for (const VisitorView& v : visitors) {
            if (!live(v)) continue;
            if (auto r = link_curve(host, v, cfg)) prims.emplace_back(std::move(*r));
        }
    }
    if (on.area) {
        const double dt = area.t && session.now > *area.t
                              ? static_cast<double>(session.now - *area.t) / 1000.0
                              : 0.0;
        area.square = area_indicator(visitors, area.square, dt, scene.floors, cfg);
        area.t = session.now;
        if (area.square) prims.emplace_back(*area.square);
    } else {
        area = {};
    }
    if (on.panel) {
        for (Panel& p : info_panels(visitors, host, cfg)) {
            prims.emplace_back(std::move(p));
        }
    }
    if (on.bbox) {
        for (const VisitorView& v : visitors) {
            if (live(v)) prims.emplace_back(perf_bbox(v, scene.floors));
        }
    }
    if (on.fps_line) {
        for (const VisitorView& v : visitors) {
            if (!live(v)) continue;
            if (auto r = fps_line(host, v, cfg)) prims.emplace_back(std::move(*r));
        }
    }
    if (on.hand_skeleton) {
        for (const VisitorView& v : visitors) {
            if (!live(v)) continue;
            PoseGlyphs g = hand_skeleton(v);
            for (Skeleton& s : g.hands) prims.emplace_back(std::move(s));
            prims.emplace_back(std::move(g.head));
        }
    }
    if (on.net_traffic) {
        for (const VisitorView& v : visitors) {
            if (!live(v) || !v.metrics) continue;
            for (Ribbon& r : net_traffic_curve(v.latest->head.position, cfg.server_anchor,
                                               *v.metrics, cfg, v.id)) {
                prims.emplace_back(std::move(r));
            }
        }
    }
    if (on.trajectory) {
        for (const VisitorView& v : visitors) {
            TrajectoryGlyphs g = trajectory_geometry(v.trail, cfg, v.id);
            if (g.ribbon) prims.emplace_back(std::move(*g.ribbon));
            for (FrustumWire& f : g.mini_frustums) prims.emplace_back(std::move(f));
        }
    }
    if (on.offline_markers) {
        for (const VisitorView& v : visitors) {
            if (v.offline && v.offline->last_position) {
                const session::SystemEvent e{v.offline->since, v.id,
                                             session::event::WentOffline{v.offline->last_position}};
                prims.emplace_back(offline_marker(e, session.now));
            } else if (v.online && v.lost && v.lost->position) {
                EventMarker m;
                m.position = *v.lost->position;
                m.kind = MarkerKind::TrackingLost;
                m.age_s = session.now >= v.lost->since
                              ? static_cast<double>(session.now - v.lost->since) / 1000.0
                              : 0.0;
                m.owner = v.id;
                prims.emplace_back(m);
            }
        }
    }
    if (on.calib_circles) {
        std::vector<sim::Station> stations = scene.stations;
        std::sort(stations.begin(), stations.end(),
                  [](const auto& a, const auto& b) { return a.id < b.id; });
        for (const sim::Station& st : stations) {
            int total = 0;
            for (const VisitorView& v : visitors) {
                if (auto it = v.calibrations.find(st.id); it != v.calibrations.end()) {
                    total += it->second;
                }
            }
            if (total > 0) prims.emplace_back(calib_circles(st, total));
        }
    }
    return snap;
}

}  // namespace mrhost::viz
