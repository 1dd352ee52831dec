#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mrhost/core/color.hpp"
#include "mrhost/core/rng.hpp"
#include "mrhost/core/vec.hpp"

using namespace mrhost;
using doctest::Approx;

namespace {

// Closed-form HSV conversion, independent of the sector table in color.cpp.
Rgba hsv_oracle(double h, double s, double v) {
    auto f = [&](double n) {
        const double k = std::fmod(n + h / 60.0, 6.0);
        return v - v * s * std::max(0.0, std::min({k, 4.0 - k, 1.0}));
    };
    return {f(5.0), f(3.0), f(1.0), 1.0};
}

void check_vec(Vec3 a, Vec3 b, double eps = 1e-12) {
    CHECK(a.x == Approx(b.x).epsilon(eps));
    CHECK(a.y == Approx(b.y).epsilon(eps));
    CHECK(a.z == Approx(b.z).epsilon(eps));
}

}  // namespace

TEST_CASE("hsv matches the closed-form oracle") {
    for (double h = 0.0; h < 360.0; h += 7.5) {
        for (double s : {0.0, 0.3, 0.75, 1.0}) {
            for (double v : {0.0, 0.5, 0.95, 1.0}) {
                const Rgba got = hsv_to_rgb(h, s, v);
                const Rgba want = hsv_oracle(h, s, v);
                CHECK(got.r == Approx(want.r).epsilon(1e-12));
                CHECK(got.g == Approx(want.g).epsilon(1e-12));
                CHECK(got.b == Approx(want.b).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("fps color ramps red to green through yellow") {
    CHECK(fps_hue_deg(10.0) == 0.0);
    CHECK(fps_hue_deg(30.0) == 0.0);
    CHECK(fps_hue_deg(51.0) == Approx(60.0));
    CHECK(fps_hue_deg(72.0) == 120.0);
    CHECK(fps_hue_deg(200.0) == 120.0);
    CHECK(fps_hue_deg(std::nan("")) == 0.0);
    CHECK(fps_color(20.0) == colors::kRed);
    CHECK(fps_color(90.0) == colors::kGreen);
    const Rgba mid = fps_color(51.0);
    CHECK(mid.r == Approx(1.0));
    CHECK(mid.g == Approx(1.0));
    CHECK(mid.b == Approx(0.0));
    for (double fps = 30.0; fps < 72.0; fps += 0.5) {
        CHECK(fps_hue_deg(fps) <= fps_hue_deg(fps + 0.5));
    }
}

TEST_CASE("identity palette has twelve distinct colors and wraps") {
    std::set<std::tuple<double, double, double>> seen;
    for (std::size_t i = 0; i < kPaletteSize; ++i) {
        const Rgba c = identity_color(i);
        seen.insert({c.r, c.g, c.b});
        CHECK(identity_color(i + kPaletteSize) == c);
    }
    CHECK(seen.size() == kPaletteSize);
}

TEST_CASE("desaturate keeps luminance ordering and alpha") {
    const Rgba d = desaturate(colors::kRed);
    CHECK(d.a == 1.0);
    CHECK(d.r > d.g);
    CHECK(d.g == Approx(d.b));
    CHECK(lerp_color(colors::kBlue, colors::kRed, 2.0) == colors::kRed);
}

TEST_CASE("quaternion yaw rotates forward about +Y") {
    for (double yaw = -3.0; yaw <= 3.0; yaw += 0.25) {
        const Pose p{{}, Quat::from_yaw(yaw)};
        check_vec(p.forward(), {-std::sin(yaw), 0.0, -std::cos(yaw)});
        CHECK(norm(p.right()) == Approx(1.0));
        CHECK(dot(p.right(), p.forward()) == Approx(0.0).epsilon(1e-12));
    }
    check_vec(Pose{}.forward(), {0.0, 0.0, -1.0});
    check_vec(Pose{}.right(), {1.0, 0.0, 0.0});
}

TEST_CASE("rotation angle and slerp") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const Vec3 axis = normalize_or({rng.gaussian(0, 1), rng.gaussian(0, 1), rng.gaussian(0, 1)},
                                       kWorldUp);
        const double angle = rng.uniform(0.0, std::numbers::pi);
        const Quat a = Quat::from_axis_angle(normalize_or({1, 2, 3}, kWorldUp), rng.uniform(-3, 3));
        const Quat b = a * Quat::from_axis_angle(axis, angle);
        CHECK(rotation_angle_deg(a, b) == Approx(rad_to_deg(angle)).epsilon(1e-9));
        // q and -q are the same rotation
        const Quat neg{-b.x, -b.y, -b.z, -b.w};
        CHECK(rotation_angle_deg(a, neg) == Approx(rad_to_deg(angle)).epsilon(1e-9));
        const Quat mid = slerp(a, b, 0.5);
        CHECK(rotation_angle_deg(a, mid) == Approx(rad_to_deg(angle) / 2.0).epsilon(1e-7));
        CHECK(mid.is_unit());
    }
}

TEST_CASE("angle between vectors") {
    CHECK(angle_between_deg({1, 0, 0}, {0, 1, 0}) == Approx(90.0));
    CHECK(angle_between_deg({1, 0, 0}, {-1, 0, 0}) == Approx(180.0));
    CHECK(angle_between_deg({1, 0, 0}, {1, 1e-9, 0}) == Approx(0.0).epsilon(1e-6));
    CHECK(angle_between_deg({0, 0, 0}, {1, 0, 0}) == 0.0);
}

TEST_CASE("rng is reproducible and well spread") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(Rng(42).next_u64() != c.next_u64());
    CHECK(Rng::derive_seed(42, 0) != Rng::derive_seed(42, 1));

    Rng r(1);
    double sum = 0.0, sq = 0.0, ex = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK_MESSAGE((u >= 0.0 && u < 1.0), "uniform out of range");
        const double g = r.gaussian(0.0, 1.0);
        sum += g;
        sq += g * g;
        ex += r.exponential(2.0);
    }
    CHECK(sum / n == Approx(0.0).epsilon(0.01).scale(1.0));
    CHECK(sq / n == Approx(1.0).epsilon(0.02));
    CHECK(ex / n == Approx(0.5).epsilon(0.02));
}
