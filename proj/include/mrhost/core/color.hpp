#pragma once

#include <cstddef>

namespace mrhost {

struct Rgba {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    double a = 1.0;

    // Clamps every component into [0,1].
    static Rgba clamped(double r, double g, double b, double a = 1.0);
    friend constexpr bool operator==(const Rgba&, const Rgba&) = default;
};

namespace colors {
inline constexpr Rgba kRed{1.0, 0.0, 0.0, 1.0};
inline constexpr Rgba kGreen{0.0, 1.0, 0.0, 1.0};
inline constexpr Rgba kBlue{0.0, 0.0, 1.0, 1.0};
inline constexpr Rgba kNeutralGray{0.5, 0.5, 0.5, 1.0};
}  // namespace colors

inline constexpr double kDefaultFpsLo = 30.0;
inline constexpr double kDefaultFpsHi = 72.0;

// hue in degrees (wrapped into [0,360)), saturation and value in [0,1].
Rgba hsv_to_rgb(double hue_deg, double saturation, double value, double alpha = 1.0);

// Red at or below fps_lo, green at or above fps_hi, hue interpolated linearly
// in between (so the midpoint is yellow). Requires fps_lo < fps_hi.
Rgba fps_color(double fps, double fps_lo = kDefaultFpsLo, double fps_hi = kDefaultFpsHi);
double fps_hue_deg(double fps, double fps_lo = kDefaultFpsLo, double fps_hi = kDefaultFpsHi);

Rgba lerp_color(const Rgba& a, const Rgba& b, double u);

// Pulls a color 70% toward its own luminance gray; used for offline visitors.
Rgba desaturate(const Rgba& c);

inline constexpr std::size_t kPaletteSize = 12;
// Twelve fixed hues, ordered so that consecutive joiners get far-apart hues.
Rgba identity_color(std::size_t join_index);

}  // namespace mrhost
