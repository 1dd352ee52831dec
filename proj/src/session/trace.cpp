#include "mrhost/session/trace.hpp"

#include <algorithm>
#include <cmath>

namespace mrhost::session {

bool FilterParams::valid() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    return positive(eps_pos) && positive(eps_ang) && positive(t_max) && positive(window) &&
           positive(alpha_fade);
}

bool should_keep(const FilterParams& params, const TraceSample* last_kept,
                 const TraceSample& candidate) {
    if (last_kept == nullptr) return true;
    if (candidate.t <= last_kept->t) return false;
    if (distance(candidate.pose.position, last_kept->pose.position) >= params.eps_pos) return true;
    if (rotation_angle_deg(candidate.pose.orientation, last_kept->pose.orientation) >=
        params.eps_ang) {
        return true;
    }
    return static_cast<double>(candidate.t - last_kept->t) >= params.t_max;
}

bool TrajectoryTrace::offer(const TraceSample& sample) {
    const TraceSample* last = kept_.empty() ? nullptr : &kept_.back();
    if (!should_keep(params_, last, sample)) return false;
    kept_.push_back(sample);
    return true;
}

void TrajectoryTrace::set_window(double window_ms, double alpha_fade_ms) {
    params_.window = window_ms;
    params_.alpha_fade = alpha_fade_ms;
}

std::span<const TraceSample> TrajectoryTrace::up_to(TimeMs up_to_t) const {
    auto end = std::upper_bound(kept_.begin(), kept_.end(), up_to_t,
                                [](TimeMs t, const TraceSample& s) { return t < s.t; });
    return {kept_.data(), static_cast<std::size_t>(end - kept_.begin())};
}

std::span<const TraceSample> TrajectoryTrace::since(TimeMs cutoff) const {
    auto begin = std::lower_bound(kept_.begin(), kept_.end(), cutoff,
                                  [](const TraceSample& s, TimeMs t) { return s.t < t; });
    return {kept_.data() + (begin - kept_.begin()), static_cast<std::size_t>(kept_.end() - begin)};
}

std::vector<FadedSample> truncate_and_alpha(std::span<const TraceSample> samples, TimeMs now,
                                            double window_ms, double alpha_fade_ms) {
    const double window_start = static_cast<double>(now) - window_ms;
    std::vector<FadedSample> out;
    for (const TraceSample& s : samples) {
        const double t = static_cast<double>(s.t);
        if (t < window_start) continue;
        out.push_back({s, std::clamp((t - window_start) / alpha_fade_ms, 0.0, 1.0)});
    }
    if (!out.empty()) out.back().alpha = 1.0;
    return out;
}

}  // namespace mrhost::session
