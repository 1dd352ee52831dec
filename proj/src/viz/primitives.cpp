#include "mrhost/viz/primitives.hpp"

#include <cmath>

namespace mrhost::viz {

bool SquareOutline::contains_xz(double x, double z, double tol) const {
    const double half = side / 2.0;
    return std::abs(x - center_x) <= half + tol && std::abs(z - center_z) <= half + tol;
}

const char* kind_name(const GeometryPrimitive& p) {
    struct Namer {
        const char* operator()(const Ribbon&) const { return "ribbon"; }
        const char* operator()(const Panel&) const { return "panel"; }
        const char* operator()(const FrustumWire&) const { return "frustum"; }
        const char* operator()(const BoxWire&) const { return "box"; }
        const char* operator()(const Arrow&) const { return "arrow"; }
        const char* operator()(const CircleSet&) const { return "circles"; }
        const char* operator()(const SquareOutline&) const { return "square"; }
        const char* operator()(const Skeleton&) const { return "skeleton"; }
        const char* operator()(const HeadMarker&) const { return "head"; }
        const char* operator()(const EventMarker&) const { return "event"; }
    };
    return std::visit(Namer{}, p);
}

}  // namespace mrhost::viz
