#include "mrhost/core/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mrhost {

Rgba Rgba::clamped(double r, double g, double b, double a) {
    return {std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0), std::clamp(b, 0.0, 1.0),
            std::clamp(a, 0.0, 1.0)};
}

Rgba hsv_to_rgb(double hue_deg, double saturation, double value, double alpha) {
    double h = std::fmod(hue_deg, 360.0);
    if (h < 0.0) h += 360.0;
    const double c = value * saturation;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0, g = 0.0, b = 0.0;
    switch (static_cast<int>(hp)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = value - c;
    return Rgba::clamped(r + m, g + m, b + m, alpha);
}

double fps_hue_deg(double fps, double fps_lo, double fps_hi) {
    if (!(fps > fps_lo)) return 0.0;  // also catches NaN
    if (fps >= fps_hi) return 120.0;
    return 120.0 * (fps - fps_lo) / (fps_hi - fps_lo);
}

Rgba fps_color(double fps, double fps_lo, double fps_hi) {
    return hsv_to_rgb(fps_hue_deg(fps, fps_lo, fps_hi), 1.0, 1.0, 1.0);
}

Rgba lerp_color(const Rgba& a, const Rgba& b, double u) {
    u = std::clamp(u, 0.0, 1.0);
    return Rgba::clamped(a.r + (b.r - a.r) * u, a.g + (b.g - a.g) * u, a.b + (b.b - a.b) * u,
                         a.a + (b.a - a.a) * u);
}

Rgba desaturate(const Rgba& c) {
    const double lum = 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b;
    return lerp_color(c, Rgba{lum, lum, lum, c.a}, 0.7);
}

Rgba identity_color(std::size_t join_index) {
    static constexpr std::array<double, kPaletteSize> kHues{0,  180, 60,  240, 120, 300,
                                                            30, 210, 90,  270, 150, 330};
    return hsv_to_rgb(kHues[join_index % kPaletteSize], 0.75, 0.95);
}

}  // namespace mrhost
