#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrhost/core/types.hpp"

namespace mrhost::session {

struct FilterParams {
    double eps_pos = 0.10;      // meters
    double eps_ang = 10.0;      // degrees
    double t_max = 1000.0;      // ms
    double window = 120000.0;   // ms, live truncation
    double alpha_fade = 10000.0;  // ms

    bool valid() const;
};

struct TraceSample {
    TimeMs t = 0;
    Pose pose;
    std::optional<double> fps;  // unknown until the first metrics message

    friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct FadedSample {
    TraceSample sample;
    double alpha = 1.0;
};

// Keep-predicate of the decimating filter: a candidate is kept when it moved
// at least eps_pos, turned at least eps_ang, or is t_max newer than the last
// kept sample. With no previous sample it is always kept.
bool should_keep(const FilterParams& params, const TraceSample* last_kept,
                 const TraceSample& candidate);

// Greedy threshold-on-last-kept decimation of one visitor's pose stream.
// The kept sequence is cumulative for the whole session.
class TrajectoryTrace {
public:
    explicit TrajectoryTrace(FilterParams params = {}) : params_(params) {}

    // Offers a sample; returns whether it was kept. Samples not newer than the
    // last kept one are dropped.
    bool offer(const TraceSample& sample);

    std::span<const TraceSample> samples() const { return kept_; }
    std::size_t size() const { return kept_.size(); }
    const FilterParams& params() const { return params_; }
    void set_window(double window_ms, double alpha_fade_ms);

    // Every kept sample with t <= up_to_t (prefix of samples()).
    std::span<const TraceSample> up_to(TimeMs up_to_t) const;
    // Kept samples with t >= cutoff (suffix of samples()).
    std::span<const TraceSample> since(TimeMs cutoff) const;

private:
    FilterParams params_;
    std::vector<TraceSample> kept_;
};

// Drops samples older than now - window and fades the oldest alpha_fade ms of
// what survives: alpha = clamp((t - (now - window)) / alpha_fade, 0, 1). The
// newest surviving sample is always fully opaque.
std::vector<FadedSample> truncate_and_alpha(std::span<const TraceSample> samples, TimeMs now,
                                            double window_ms, double alpha_fade_ms);

}  // namespace mrhost::session
