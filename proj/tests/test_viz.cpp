#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mrhost/protocol/snapshot_codec.hpp"
#include "mrhost/viz/geometry.hpp"
#include "support/generators.hpp"

using namespace mrhost;
using namespace mrhost::viz;
using doctest::Approx;
using testing::visitor_at;

namespace {

const Pose kHost{{0.0, 1.7, 0.0}, Quat::identity()};
const HostContext kHostCtx{kHost, 0.0};

bool near(Vec3 a, Vec3 b, double eps = 1e-9) { return distance(a, b) <= eps; }

Pose random_head(Rng& rng, double spread = 8.0) {
    return {{rng.uniform(-spread, spread), rng.uniform(1.5, 1.8), rng.uniform(-spread, spread)},
            Quat::from_yaw(rng.uniform(-3.14, 3.14))};
}

// Mini-frustum indices from cumulative arc length.
std::vector<std::size_t> arc_length_oracle(const std::vector<Vec3>& pts, double spacing) {
    std::vector<std::size_t> out;
    if (pts.empty()) return out;
    std::vector<double> s(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const Vec3 d = pts[i] - pts[i - 1];
        s[i] = s[i - 1] + std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    }
    out.push_back(0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (s[i] - s[out.back()] >= spacing - 1e-9) out.push_back(i);
    }
    return out;
}

struct Rigid {
    Quat q;
    Vec3 t;
    Vec3 point(Vec3 p) const { return rotate(q, p) + t; }
    Pose pose(const Pose& p) const { return {point(p.position), q * p.orientation}; }
};

}  // namespace

TEST_CASE("frustum far corners match the trig oracle") {
    auto v = visitor_at("v01", {{1, 2, 3}, Quat::identity()});
    VizConfig cfg;
    const auto c = frustum_far_corners(view_frustum(v, cfg));
    CHECK(near(c[0], {0.5, 2.5, 2.5}));
    CHECK(near(c[1], {1.5, 2.5, 2.5}));
    CHECK(near(c[2], {1.5, 1.5, 2.5}));
    CHECK(near(c[3], {0.5, 1.5, 2.5}));

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        cfg.fov_h = rng.uniform(10, 150);
        cfg.fov_v = rng.uniform(10, 150);
        cfg.frustum_depth = rng.uniform(0.1, 2.0);
        const double yaw = rng.uniform(-3, 3);
        v = visitor_at("v", {{0, 0, 0}, Quat::from_yaw(yaw)});
        const auto k = frustum_far_corners(view_frustum(v, cfg));
        const double hx = std::tan(cfg.fov_h * std::numbers::pi / 360.0) * cfg.frustum_depth;
        const double hy = std::tan(cfg.fov_v * std::numbers::pi / 360.0) * cfg.frustum_depth;
        const Vec3 fwd{-std::sin(yaw), 0, -std::cos(yaw)};
        const Vec3 right{std::cos(yaw), 0, -std::sin(yaw)};
        CHECK(near(k[1], fwd * cfg.frustum_depth + right * hx + Vec3{0, hy, 0}, 1e-9));
        CHECK(near(k[3], fwd * cfg.frustum_depth - right * hx - Vec3{0, hy, 0}, 1e-9));
    }
}

TEST_CASE("link curve widths are monotone with exact endpoints") {
    Rng rng(8);
    VizConfig cfg;
    int produced = 0;
    for (int i = 0; i < 500; ++i) {
        cfg.curve_w_min = rng.uniform(0.001, 0.1);
        cfg.curve_w_max = cfg.curve_w_min + rng.uniform(0.0, 0.3);
        cfg.flatten_links = rng.uniform() < 0.3;
        const Pose head = random_head(rng, 20.0);
        const auto r = link_curve(kHostCtx, visitor_at("v", head), cfg);
        if (!r) {
            CHECK(link_excluded(kHost, head.position, cfg));
            continue;
        }
        ++produced;
        REQUIRE(r->widths.size() == r->points.size());
        CHECK(r->widths.front() == cfg.curve_w_min);
        CHECK(r->widths.back() == cfg.curve_w_max);
        for (std::size_t k = 1; k < r->widths.size(); ++k) CHECK(r->widths[k] >= r->widths[k - 1]);
        const auto ctrl = link_controls(kHost, head.position);
        if (cfg.flatten_links) {
            for (const Vec3& p : r->points) CHECK(p.y == Approx(0.01));
        } else {
            CHECK(r->points.front() == ctrl[0]);
            CHECK(r->points.back() == head.position);
        }
        CHECK(r->pattern == RibbonPattern::Arrowed);
    }
    CHECK(produced > 400);
}

TEST_CASE("link curve proximity exclusion") {
    VizConfig cfg;
    CHECK(!link_curve(kHostCtx, visitor_at("v", {{0, 1.7, -1.5}, {}}), cfg));
    CHECK(link_curve(kHostCtx, visitor_at("v", {{0, 1.7, 1.5}, {}}), cfg));   // behind
    CHECK(link_curve(kHostCtx, visitor_at("v", {{0, 1.7, -2.5}, {}}), cfg));  // far
    CHECK(link_curve(kHostCtx, visitor_at("v", {{1.5, 1.7, -0.5}, {}}), cfg));  // wide angle
}

TEST_CASE("hemisphere panels lie on the configured radius") {
    Rng rng(12);
    VizConfig cfg;
    cfg.placement = Placement::HostCentric;
    cfg.grid_mode = GridMode::ForceSphere;
    for (int run = 0; run < 100; ++run) {
        cfg.hemisphere_radius = rng.uniform(0.5, 3.0);
        cfg.level = rng.uniform() < 0.5 ? Level::Eye : Level::Floor;
        std::vector<session::VisitorView> vs;
        for (int i = 0; i < 6; ++i) vs.push_back(visitor_at("v" + std::to_string(i), random_head(rng)));
        const ViewArray a = place_views_host(vs, kHostCtx, cfg);
        CHECK(a.layout == ViewLayout::Sphere);
        REQUIRE(a.panels.size() == vs.size());
        for (const Panel& p : a.panels) {
            CHECK(std::abs(distance(p.center, kHost.position) - cfg.hemisphere_radius) <= 1e-6);
            CHECK(near(p.normal, normalize_or(kHost.position - p.center, {}), 1e-9));
            if (cfg.level == Level::Eye) CHECK(p.center.y >= kHost.position.y - 1e-12);
        }
    }
}

TEST_CASE("overlapping views fall back to a grid") {
    VizConfig cfg;
    cfg.placement = Placement::HostCentric;
    std::vector<session::VisitorView> vs = {visitor_at("a", {{0, 1.7, -5}, {}}),
                                            visitor_at("b", {{0.5, 1.7, -5}, {}}),
                                            visitor_at("c", {{5, 1.7, 0}, {}})};
    ViewArray a = place_views_host(vs, kHostCtx, cfg);
    CHECK(a.layout == ViewLayout::Grid);
    CHECK(a.columns == 2);
    CHECK(a.rows == 2);
    // left to right by bearing: a (0 deg), b (~5.7 deg), c (90 deg)
    CHECK(a.panels[0].owner == "a");
    CHECK(a.panels[1].owner == "b");
    CHECK(a.panels[2].owner == "c");
    CHECK(distance(a.panels[0].center, a.panels[1].center) == Approx(kViewGridPitch));

    vs.pop_back();
    vs[1] = visitor_at("b", {{5, 1.7, -5}, {}});
    CHECK(place_views_host(vs, kHostCtx, cfg).layout == ViewLayout::Sphere);

    cfg.level = Level::Floor;
    cfg.grid_mode = GridMode::ForceGrid;
    a = place_views_host(vs, kHostCtx, cfg);
    for (const Panel& p : a.panels) {
        CHECK(p.center.y == Approx(0.01));
        CHECK(p.normal == kWorldUp);
    }
}

TEST_CASE("subject view sits on the side away from the host's line of sight") {
    // Visitor ahead of the host, facing the host: their right is world -X.
    const auto v = visitor_at("v", {{1.0, 1.7, -4.0}, Quat::from_yaw(std::numbers::pi)});
    // atan(0.55/4) is 6.2 deg off the host->visitor axis, atan(1.45/4) only 5.9
    const Panel p = place_view_subject(v, kHost);
    CHECK(p.center.x == Approx(0.55));
    // ties go to the visitor's right
    const auto w = visitor_at("w", {{0.0, 1.7, -4.0}, Quat::from_yaw(std::numbers::pi)});
    CHECK(place_view_subject(w, kHost).center.x == Approx(-0.45));
    CHECK(dot(p.normal, kHost.position - p.center) > 0.0);
}

TEST_CASE("area square contains every visitor (box oracle)") {
    Rng rng(21);
    VizConfig cfg;
    std::optional<SquareOutline> sq;
    std::vector<Vec3> pos(6);
    for (auto& p : pos) p = {rng.uniform(-5, 5), 1.7, rng.uniform(-5, 5)};
    for (int step = 0; step < 2000; ++step) {
        // occasional teleports stress the smoothing
        for (auto& p : pos) {
            if (rng.uniform() < 0.01) {
                p = {rng.uniform(-12, 12), 1.7, rng.uniform(-8, 8)};
            } else {
                p += Vec3{rng.gaussian(0, 0.1), 0.0, rng.gaussian(0, 0.1)};
            }
        }
        std::vector<session::VisitorView> vs;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            vs.push_back(visitor_at("v" + std::to_string(i), {pos[i], {}}));
            if (rng.uniform() < 0.1) vs.back().online = false;
        }
        sq = area_indicator(vs, sq, 0.1, {0.0}, cfg);
        bool any = false;
        for (const auto& v : vs) {
            if (!v.online) continue;
            any = true;
            const Vec3 p = v.latest->head.position;
            const double half = sq->side / 2.0;
            const bool inside = p.x >= sq->center_x - half - 1e-9 &&
                                p.x <= sq->center_x + half + 1e-9 &&
                                p.z >= sq->center_z - half - 1e-9 &&
                                p.z <= sq->center_z + half + 1e-9;
            CHECK(inside);
        }
        if (!any) sq.reset();
    }
}

TEST_CASE("calibration circles") {
    const sim::Station st{"s01", {1, 0, 2}};
    for (int c = 0; c <= 20; ++c) {
        const CircleSet cs = calib_circles(st, c);
        const std::size_t n = static_cast<std::size_t>(std::min(c, 8));
        REQUIRE(cs.radii.size() == n);
        REQUIRE(cs.colors.size() == n);
        if (n == 0) continue;
        CHECK(cs.colors.front() == colors::kBlue);
        if (n > 1) CHECK(cs.colors.back() == colors::kRed);
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(cs.radii[i] > cs.radii[i - 1]);
            CHECK(cs.colors[i].r > cs.colors[i - 1].r);
            CHECK(cs.colors[i].b < cs.colors[i - 1].b);
        }
    }
}

TEST_CASE("mini-frustum count matches the arc-length oracle on 1000 polylines") {
    Rng rng(1000);
    for (int i = 0; i < 1000; ++i) {
        std::vector<Vec3> pts;
        Vec3 p{};
        const std::size_t n = testing::pick(rng, 200);
        for (std::size_t k = 0; k < n; ++k) {
            p += Vec3{rng.gaussian(0, 0.2), rng.gaussian(0, 0.02), rng.gaussian(0, 0.2)};
            pts.push_back(p);
        }
        const double spacing = rng.uniform(0.05, 2.0);
        CHECK(mini_frustum_indices(pts, spacing) == arc_length_oracle(pts, spacing));
    }
}

TEST_CASE("trajectory glyphs carry fade alpha") {
    std::vector<session::FadedSample> trail;
    for (int i = 0; i < 20; ++i) {
        trail.push_back({{static_cast<TimeMs>(i * 100), {{0.2 * i, 1.7, 0}, {}}, 72.0}, i / 19.0});
    }
    VizConfig cfg;
    const auto g = trajectory_geometry(trail, cfg, "v01");
    REQUIRE(g.ribbon);
    CHECK(g.ribbon->colors.back().a == 1.0);
    CHECK(g.ribbon->colors.front().a == 0.0);
    CHECK(g.mini_frustums.size() == arc_length_oracle(g.ribbon->points, 0.5).size());
    CHECK(!trajectory_geometry(std::span(trail).first(1), cfg).ribbon);
}

TEST_CASE("network traffic lanes") {
    VizConfig cfg;
    DeviceMetrics m;
    m.net_out_bps = 1e8;
    m.net_in_bps = 1e3;
    m.latency_ms = 50;
    const auto lanes = net_traffic_curve({0, 1.7, -4}, {0, 3, 0}, m, cfg, "v01");
    REQUIRE(lanes.size() == 2);
    CHECK(lanes[0].widths.front() == Approx(cfg.curve_w_max));
    CHECK(lanes[1].widths.front() == Approx(cfg.curve_w_min));
    CHECK(distance(lanes[0].points.front(), {0, 1.7, -4}) == Approx(0.05));
    CHECK(distance(lanes[1].points.back(), {0, 1.7, -4}) == Approx(0.05));
    CHECK(lanes[0].anim_speed == Approx(4.0));
    CHECK(net_traffic_curve({1, 1, 1}, {1, 1, 1}, m, cfg).empty());
}

TEST_CASE("point-anchored primitives are equivariant under yaw and translation") {
    Rng rng(77);
    VizConfig cfg;
    for (int i = 0; i < 300; ++i) {
        const Rigid T{Quat::from_yaw(rng.uniform(-3.1, 3.1)),
                      {rng.uniform(-10, 10), rng.uniform(-1, 1), rng.uniform(-10, 10)}};
        const Pose head = random_head(rng);
        const Pose host{{rng.uniform(-3, 3), 1.7, rng.uniform(-3, 3)},
                        Quat::from_yaw(rng.uniform(-3, 3))};
        auto v = visitor_at("v", head);
        auto vt = visitor_at("v", T.pose(head));

        CHECK(near(locator_arrow(vt, cfg).position, T.point(locator_arrow(v, cfg).position), 1e-9));
        CHECK(near(view_frustum(vt, cfg).apex.position, T.point(head.position), 1e-9));
        const auto c = frustum_far_corners(view_frustum(v, cfg));
        const auto ct = frustum_far_corners(view_frustum(vt, cfg));
        for (int k = 0; k < 4; ++k) CHECK(near(ct[k], T.point(c[k]), 1e-9));
        CHECK(near(place_view_subject(vt, T.pose(host)).center,
                   T.point(place_view_subject(v, host).center), 1e-9));
        CHECK(near(info_panel_subject(vt, T.pose(host)).center,
                   T.point(info_panel_subject(v, host).center), 1e-9));

        const HostContext hc{host, 0.0};
        const HostContext hct{T.pose(host), 0.0};
        const auto r = link_curve(hc, v, cfg);
        const auto rt = link_curve(hct, vt, cfg);
        REQUIRE(r.has_value() == rt.has_value());
        if (r) {
            for (std::size_t k = 0; k < r->points.size(); ++k) {
                CHECK(near(rt->points[k], T.point(r->points[k]), 1e-8));
            }
        }
    }
}

TEST_CASE("snapshot respects flags and orders by kind") {
    session::SessionView sv;
    sv.now = 1000;
    for (int i = 0; i < 3; ++i) {
        auto v = visitor_at("v0" + std::to_string(i + 1), {{2.0 * i, 1.7, -4}, {}}, i);
        v.metrics = DeviceMetrics{72, 0.9, 0.4, 0.5, 1e5, 1e5, 20};
        sv.visitors.push_back(v);
    }
    sim::SceneConfig scene;
    VizConfig cfg;
    AreaState area;
    auto snap = build_snapshot(sv, kHost, scene, cfg, area);
    const auto kinds = [&] {
        std::vector<std::string> out;
        for (const auto& p : snap.primitives) out.push_back(kind_name(p));
        return out;
    };
    auto k = kinds();
    CHECK(std::count(k.begin(), k.end(), "square") == 1);
    CHECK(std::count(k.begin(), k.end(), "arrow") == 3);
    CHECK(std::count(k.begin(), k.end(), "box") == 3);
    CHECK(std::count(k.begin(), k.end(), "head") == 3);
    // kind blocks are contiguous
    std::vector<std::string> blocks;
    for (const auto& s : k) {
        if (blocks.empty() || blocks.back() != s) blocks.push_back(s);
    }
    CHECK(blocks.front() == "panel");

    cfg.enabled.area = false;
    cfg.enabled.bbox = false;
    snap = build_snapshot(sv, kHost, scene, cfg, area);
    k = kinds();
    CHECK(std::count(k.begin(), k.end(), "square") == 0);
    CHECK(std::count(k.begin(), k.end(), "box") == 0);
}

TEST_CASE("info panel text") {
    auto v = visitor_at("v01", {});
    CHECK(info_lines(v) == std::vector<std::string>{"v01", "no data", "ONLINE"});
    v.metrics = DeviceMetrics{71.94, 0.456, 0.5, 0.25, 0, 0, 0};
    v.online = false;
    CHECK(info_lines(v) ==
          std::vector<std::string>{"v01", "FPS 71.9", "BAT 46%", "CPU 50% GPU 25%", "OFFLINE"});
}
