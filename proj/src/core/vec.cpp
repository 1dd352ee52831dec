#include "mrhost/core/vec.hpp"

#include <algorithm>

namespace mrhost {

Quat Quat::from_axis_angle(Vec3 axis, double radians) {
    const Vec3 a = normalize_or(axis, kWorldUp);
    const double s = std::sin(radians / 2.0);
    return {a.x * s, a.y * s, a.z * s, std::cos(radians / 2.0)};
}

Quat Quat::normalized() const {
    const double n = norm();
    if (n < 1e-12) return identity();
    return {x / n, y / n, z / n, w / n};
}

Quat operator*(const Quat& a, const Quat& b) {
    return {
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
    };
}

Vec3 rotate(const Quat& q, Vec3 v) {
    // v' = v + 2w(u x v) + 2u x (u x v)
    const Vec3 u{q.x, q.y, q.z};
    const Vec3 t = cross(u, v) * 2.0;
    return v + t * q.w + cross(u, t);
}

Quat slerp(const Quat& a, const Quat& b_in, double u) {
    Quat b = b_in;
    double c = a.x * b.x + a.y * b.y + a.z * b.z + a.w * b.w;
    if (c < 0.0) {
        b = {-b.x, -b.y, -b.z, -b.w};
        c = -c;
    }
    if (c > 0.9995) {
        const Quat r{a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u, a.z + (b.z - a.z) * u,
                     a.w + (b.w - a.w) * u};
        return r.normalized();
    }
    const double theta = std::acos(std::clamp(c, -1.0, 1.0));
    const double s = std::sin(theta);
    const double wa = std::sin((1.0 - u) * theta) / s;
    const double wb = std::sin(u * theta) / s;
    return Quat{a.x * wa + b.x * wb, a.y * wa + b.y * wb, a.z * wa + b.z * wb, a.w * wa + b.w * wb}
        .normalized();
}

double rotation_angle_deg(const Quat& a, const Quat& b) {
    const Quat d = a.conjugate() * b;
    const double vec = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    return rad_to_deg(2.0 * std::atan2(vec, std::abs(d.w)));
}

}  // namespace mrhost
