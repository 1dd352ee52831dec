#pragma once

#include <cmath>
#include <numbers>

namespace mrhost {

// Meters, right-handed, +Y up. Heads look down -Z in their local frame.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a * s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    Vec3& operator+=(Vec3 b) { return *this = *this + b; }
    Vec3& operator-=(Vec3 b) { return *this = *this - b; }

    friend constexpr bool operator==(Vec3, Vec3) = default;
};

inline constexpr Vec3 kWorldUp{0.0, 1.0, 0.0};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }
constexpr Vec3 lerp(Vec3 a, Vec3 b, double u) { return a + (b - a) * u; }

// Returns `fallback` when `a` is (numerically) the zero vector.
inline Vec3 normalize_or(Vec3 a, Vec3 fallback) {
    const double n = norm(a);
    return n > 1e-12 ? a / n : fallback;
}

inline bool is_finite(Vec3 a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Unsigned angle between two directions, degrees. Zero-length input yields 0.
inline double angle_between_deg(Vec3 a, Vec3 b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na < 1e-12 || nb < 1e-12) return 0.0;
    // atan2 form stays accurate near 0 and 180 degrees.
    return std::atan2(norm(cross(a, b)), dot(a, b)) * 180.0 / std::numbers::pi;
}

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Quat {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 1.0;

    static Quat identity() { return {}; }
    static Quat from_axis_angle(Vec3 axis, double radians);
    static Quat from_yaw(double radians) { return from_axis_angle(kWorldUp, radians); }

    double norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }
    Quat normalized() const;
    Quat conjugate() const { return {-x, -y, -z, w}; }
    bool is_unit(double tol = 1e-6) const { return std::abs(norm() - 1.0) <= tol; }

    friend Quat operator*(const Quat& a, const Quat& b);
    friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

Vec3 rotate(const Quat& q, Vec3 v);
Quat slerp(const Quat& a, const Quat& b, double u);
// Magnitude of the relative rotation between two orientations, degrees in [0, 180].
double rotation_angle_deg(const Quat& a, const Quat& b);

struct Pose {
    Vec3 position;
    Quat orientation;

    Vec3 forward() const { return rotate(orientation, {0.0, 0.0, -1.0}); }
    Vec3 right() const { return rotate(orientation, {1.0, 0.0, 0.0}); }
    Vec3 up() const { return rotate(orientation, {0.0, 1.0, 0.0}); }

    friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

// Horizontal component of a direction, normalized; `fallback` if vertical.
inline Vec3 horizontal(Vec3 dir, Vec3 fallback = {0.0, 0.0, -1.0}) {
    return normalize_or({dir.x, 0.0, dir.z}, fallback);
}

}  // namespace mrhost
