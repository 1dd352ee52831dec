#include "mrhost/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "mrhost/core/color.hpp"
#include "mrhost/core/error.hpp"
#include "mrhost/core/rng.hpp"

namespace mrhost::sim {

using nlohmann::json;
using protocol::ClientMessage;

namespace {

constexpr TimeMs kNever = std::numeric_limits<TimeMs>::max();
constexpr double kWallMargin = 0.3;
constexpr double kDipFps = 30.0;

TimeMs to_ms(double seconds) { return static_cast<TimeMs>(std::llround(seconds * 1000.0)); }

double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

// Forward of a yaw-only orientation (heads look down -Z at yaw 0).
Vec3 yaw_forward(double yaw) { return {-std::sin(yaw), 0.0, -std::cos(yaw)}; }

bool is_free(const SceneConfig& scene, Vec3 p) {
    if (p.x < scene.bounds.min.x + kWallMargin || p.x > scene.bounds.max.x - kWallMargin ||
        p.z < scene.bounds.min.z + kWallMargin || p.z > scene.bounds.max.z - kWallMargin) {
        return false;
    }
    return std::none_of(scene.obstacles.begin(), scene.obstacles.end(),
                        [&](const Aabb& b) { return b.blocks_xz(p); });
}

// Joint offsets of a relaxed right hand in head-yaw space; mirrored in x for
// the left hand. Palm, wrist, 4 thumb joints, then 5 joints per finger.
std::vector<Vec3> hand_template() {
    std::vector<Vec3> out;
    out.push_back({0.0, 0.0, -0.04});   // palm
    out.push_back({0.0, 0.0, 0.0});     // wrist
    for (int j = 0; j < 4; ++j) out.push_back({-0.03 - 0.015 * j, 0.0, -0.02 - 0.02 * j});
    for (int f = 0; f < 4; ++f) {
        const double x = -0.02 + 0.015 * f;
        for (int j = 0; j < 5; ++j) out.push_back({x, 0.0, -0.06 - 0.022 * j});
    }
    return out;
}

struct IncidentWindow {
    TimeMs start;
    TimeMs end;
    bool contains_half_open(TimeMs t) const { return t >= start && t < end; }
    bool contains_offline(TimeMs t) const { return t > start && t <= end; }
};

}  // namespace

std::string visitor_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "v%02zu", index + 1);
    return buf;
}

void SimConfig::validate(const SceneConfig& scene, double duration_s) const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be > 0");
    };
    positive(walk_speed, "walk_speed");
    positive(pose_hz, "pose_hz");
    positive(metrics_hz, "metrics_hz");
    positive(battery_drain, "battery_drain");
    positive(fps_base, "fps_base");
    positive(calibration_rate, "calibration_rate");
    positive(heartbeat_ms, "heartbeat_ms");
    positive(max_turn_deg_s, "max_turn_deg_s");
    if (!(fps_noise_sd >= 0.0)) throw ConfigError("fps_noise_sd", "must be >= 0");
    if (!(view_hz >= 0.0)) throw ConfigError("view_hz", "must be >= 0");
    if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
        throw ConfigError("duration", "must be >= 0");
    }
    for (std::size_t i = 0; i < scripted_incidents.size(); ++i) {
        const Incident& inc = scripted_incidents[i];
        const std::string field = "scripted_incidents[" + std::to_string(i) + "]";
        if (inc.t_start < 0.0 || !(inc.duration > 0.0) ||
            inc.t_start + inc.duration > duration_s) {
            throw ConfigError(field, "must lie within the session duration");
        }
        bool known = false;
        for (std::size_t v = 0; v < n_visitors; ++v) known = known || visitor_id(v) == inc.visitor;
        if (!known) throw ConfigError(field + ".visitor", "unknown visitor '" + inc.visitor + "'");
    }
    scene.validate();
}

SimConfig sim_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("sim", "expected a JSON object");
    SimConfig c;
    auto num = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) throw ConfigError(key, "expected a number");
        out = j[key].get<double>();
    };
    auto flag = [&](const char* key, bool& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_boolean()) throw ConfigError(key, "expected a boolean");
        out = j[key].get<bool>();
    };
    static const char* kKnown[] = {"seed",         "n_visitors",     "walk_speed",
                                   "pose_hz",      "metrics_hz",     "battery_drain",
                                   "fps_base",     "fps_noise_sd",   "scripted_incidents",
                                   "calibration_rate", "heartbeat_ms", "view_hz",
                                   "max_turn_deg_s", "hands",        "include_host"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
            throw ConfigError(key, "unknown field");
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected an unsigned integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("n_visitors")) {
        if (!j["n_visitors"].is_number_unsigned()) {
            throw ConfigError("n_visitors", "expected an unsigned integer");
        }
        c.n_visitors = j["n_visitors"].get<std::size_t>();
    }
    num("walk_speed", c.walk_speed);
    num("pose_hz", c.pose_hz);
    num("metrics_hz", c.metrics_hz);
    num("battery_drain", c.battery_drain);
    num("fps_base", c.fps_base);
    num("fps_noise_sd", c.fps_noise_sd);
    num("calibration_rate", c.calibration_rate);
    num("heartbeat_ms", c.heartbeat_ms);
    num("view_hz", c.view_hz);
    num("max_turn_deg_s", c.max_turn_deg_s);
    flag("hands", c.hands);
    flag("include_host", c.include_host);
    if (j.contains("scripted_incidents")) {
        const json& arr = j["scripted_incidents"];
        if (!arr.is_array()) throw ConfigError("scripted_incidents", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& e = arr[i];
            const std::string field = "scripted_incidents[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("t_start") || !e["t_start"].is_number() ||
                !e.contains("duration") || !e["duration"].is_number() || !e.contains("visitor") ||
                !e["visitor"].is_string() || !e.contains("kind") || !e["kind"].is_string()) {
                throw ConfigError(field,
                                  "expected {t_start, duration, visitor, kind} with kind "
                                  "fps_dip|offline|tracking_loss");
            }
            Incident inc{e["t_start"].get<double>(), e["duration"].get<double>(),
                         e["visitor"].get<std::string>(), IncidentKind::Offline};
            const std::string kind = e["kind"].get<std::string>();
            if (kind == "fps_dip") {
                inc.kind = IncidentKind::FpsDip;
            } else if (kind == "offline") {
                inc.kind = IncidentKind::Offline;
            } else if (kind == "tracking_loss") {
                inc.kind = IncidentKind::TrackingLoss;
            } else {
                throw ConfigError(field + ".kind", "expected fps_dip|offline|tracking_loss");
            }
            c.scripted_incidents.push_back(std::move(inc));
        }
    }
    return c;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("sim", "cannot open " + path.string());
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("sim", "malformed JSON in " + path.string());
    return sim_config_from_json(j);
}

// One simulated client. Channels (heartbeat, pose, metrics, ...) each keep
// their next due time; pop() emits the earliest, bumping ties forward by 1 ms
// so the stream's timestamps strictly increase.
class ClientStream {
public:
    ClientStream(const SceneConfig& scene, const SimConfig& sim, std::size_t index, bool host,
                 TimeMs duration)
        : scene_(scene),
          sim_(sim),
          index_(index),
          host_(host),
          id_(host ? std::string("h01") : visitor_id(index)),
          duration_(duration),
          rng_(Rng::derive_seed(sim.seed, index)),
          hand_(hand_template()) {
        const double pose_period = 1000.0 / sim.pose_hz;
        pose_period_ms_ = pose_period;
        pose_phase_ms_ = pose_period / 2.0;
        metrics_period_ms_ = 1000.0 / sim.metrics_hz;
        view_period_ms_ = sim.view_hz > 0.0 ? 1000.0 / sim.view_hz : 0.0;

        for (const Incident& inc : sim.scripted_incidents) {
            if (host_ || inc.visitor != id_) continue;
            const IncidentWindow w{to_ms(inc.t_start), to_ms(inc.t_start + inc.duration)};
            switch (inc.kind) {
                case IncidentKind::Offline: offline_.push_back(w); break;
                case IncidentKind::FpsDip: dips_.push_back(w); break;
                case IncidentKind::TrackingLoss:
                    losses_.push_back(w);
                    tracking_events_.push_back({w.start, protocol::EventKind::TrackingLost});
                    tracking_events_.push_back({w.end, protocol::EventKind::TrackingRecovered});
                    break;
            }
        }
        std::sort(tracking_events_.begin(), tracking_events_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        init_motion();
        battery_ = host_ ? 1.0 : rng_.uniform(0.6, 1.0);
        if (!host_) next_calibration_ = draw_calibration_gap(0.0);
        advance();
    }

    std::optional<TimeMs> peek() const {
        if (!pending_) return std::nullopt;
        return pending_->msg.time().value_or(0);
    }

    std::optional<ClientMessage> pop() {
        if (!pending_) return std::nullopt;
        std::optional<ClientMessage> out = std::move(pending_->msg);
        pending_.reset();
        advance();
        return out;
    }

    const std::string& id() const { return id_; }

private:
    enum class Channel { Heartbeat, Tracking, Pose, Metrics, Calibration, View, None };

    struct Pending {
        ClientMessage msg;
    };

    void init_motion() {
        const Aabb& b = scene_.bounds;
        floor_index_ = 0;
        eye_height_ = host_ ? 1.7 : rng_.uniform(1.55, 1.8);
        if (host_) {
            // centre of the hall, or the first free spot behind it
            pos_ = {(b.min.x + b.max.x) / 2.0, 0.0, (b.min.z + b.max.z) / 2.0};
            while (!is_free(scene_, pos_) && pos_.z < b.max.z) pos_.z += 0.25;
            yaw_ = 0.0;
            return;
        }
        for (int attempt = 0; attempt < 200; ++attempt) {
            const Vec3 p{rng_.uniform(b.min.x, b.max.x), 0.0, rng_.uniform(b.min.z, b.max.z)};
            if (is_free(scene_, p)) {
                pos_ = p;
                break;
            }
        }
        yaw_ = rng_.uniform(-std::numbers::pi, std::numbers::pi);
        pick_waypoint();
    }

    double floor_y() const { return scene_.floors[floor_index_]; }

    void pick_waypoint() {
        target_stair_ = false;
        if (scene_.floors.size() > 1 && !scene_.stairs.empty() && rng_.uniform() < 0.15) {
            const Vec3* best = nullptr;
            for (const Vec3& s : scene_.stairs) {
                const Vec3 flat{s.x, 0.0, s.z};
                if (!best || distance(flat, pos_) < distance(Vec3{best->x, 0.0, best->z}, pos_)) {
                    best = &s;
                }
            }
            waypoint_ = {best->x, 0.0, best->z};
            target_stair_ = true;
            return;
        }
        const Aabb& b = scene_.bounds;
        for (int attempt = 0; attempt < 100; ++attempt) {
            const Vec3 p{rng_.uniform(b.min.x, b.max.x), 0.0, rng_.uniform(b.min.z, b.max.z)};
            if (is_free(scene_, p)) {
                waypoint_ = p;
                return;
            }
        }
        waypoint_ = pos_;
    }

    bool in_any(const std::vector<IncidentWindow>& ws, TimeMs t) const {
        return std::any_of(ws.begin(), ws.end(), [t](const auto& w) { return w.contains_half_open(t); });
    }

    void step_motion(double dt) {
        sway_phase_ += dt * 0.7;
        if (host_) {
            yaw_ = deg_to_rad(30.0) * std::sin(sway_phase_ * 0.3);
            return;
        }
        if (in_any(losses_, motion_t_)) return;  // frozen while tracking is lost
        if (dwell_s_ > 0.0) {
            dwell_s_ -= dt;
            return;
        }
        const Vec3 to_target = waypoint_ - pos_;
        const double dist = norm(Vec3{to_target.x, 0.0, to_target.z});
        if (dist < std::max(sim_.walk_speed * dt, 0.05)) {
            if (target_stair_) {
                std::size_t next = floor_index_;
                while (next == floor_index_) {
                    next = static_cast<std::size_t>(rng_.uniform() * scene_.floors.size()) %
                           scene_.floors.size();
                }
                floor_index_ = next;
            }
            dwell_s_ = rng_.uniform(0.0, 3.0);
            pick_waypoint();
            return;
        }
        const double desired = std::atan2(-to_target.x, -to_target.z);
        const double error = wrap_angle(desired - yaw_);
        const double max_turn = deg_to_rad(sim_.max_turn_deg_s) * dt;
        yaw_ = wrap_angle(yaw_ + std::clamp(error, -max_turn, max_turn));
        const double remaining = std::abs(wrap_angle(desired - yaw_));
        const double speed = sim_.walk_speed * std::max(0.0, std::cos(remaining));
        const Vec3 candidate = pos_ + yaw_forward(yaw_) * (speed * dt);
        if (is_free(scene_, candidate)) {
            pos_ = candidate;
        } else {
            pick_waypoint();
        }
    }

    Pose head_pose() const {
        const double pitch = deg_to_rad(5.0) * std::sin(sway_phase_);
        const Quat q = (Quat::from_yaw(yaw_) * Quat::from_axis_angle({1.0, 0.0, 0.0}, pitch))
                           .normalized();
        const double y = std::min(floor_y() + eye_height_, scene_.bounds.max.y);
        return {{pos_.x, y, pos_.z}, q};
    }

    HandFrame hand(bool right, const Pose& head) const {
        const Quat yaw = Quat::from_yaw(yaw_);
        const double side = right ? 1.0 : -1.0;
        const Vec3 root = head.position + rotate(yaw, {0.2 * side, -0.45, -0.3});
        HandFrame h{true, {}};
        h.joints.reserve(kHandJointCount);
        for (const Vec3& off : hand_) {
            h.joints.push_back({root + rotate(yaw, {off.x * side, off.y, off.z}), yaw});
        }
        return h;
    }

    double draw_calibration_gap(double from_ms) {
        return from_ms + rng_.exponential(sim_.calibration_rate / 60000.0);
    }

    std::string nearest_station() const {
        const Vec3 head = head_pose().position;
        const Station* best = nullptr;
        for (const Station& s : scene_.stations) {
            if (!best || distance(s.position, head) < distance(best->position, head)) best = &s;
        }
        return best ? best->id : std::string{};
    }

    std::vector<std::uint8_t> view_pattern(TimeMs t) const {
        constexpr std::uint32_t kSize = 64;
        std::vector<std::uint8_t> px(kSize * kSize * 3);
        const Rgba tint = identity_color(index_);
        const std::uint32_t stripe = static_cast<std::uint32_t>(t / 100) % kSize;
        for (std::uint32_t y = 0; y < kSize; ++y) {
            for (std::uint32_t x = 0; x < kSize; ++x) {
                const bool check = ((x / 8) + (y / 8)) % 2 == 0;
                const double k = x == stripe ? 1.0 : (check ? 0.8 : 0.35);
                std::uint8_t* p = &px[(y * kSize + x) * 3];
                p[0] = static_cast<std::uint8_t>(std::lround(255.0 * tint.r * k));
                p[1] = static_cast<std::uint8_t>(std::lround(255.0 * tint.g * k));
                p[2] = static_cast<std::uint8_t>(std::lround(255.0 * tint.b * k));
            }
        }
        return px;
    }

    DeviceMetrics metrics(TimeMs t) {
        DeviceMetrics m;
        const bool dip = in_any(dips_, t);
        const double noise = std::abs(rng_.gaussian(0.0, sim_.fps_noise_sd));
        m.fps = std::max(0.0, dip ? kDipFps - noise : sim_.fps_base - noise);
        battery_ = std::max(0.0, battery_ - sim_.battery_drain * metrics_period_ms_ / 1000.0);
        m.battery = battery_;
        m.cpu = std::clamp((dip ? 0.92 : 0.45) + rng_.gaussian(0.0, 0.04), 0.0, 1.0);
        m.gpu = std::clamp((dip ? 0.97 : 0.6) + rng_.gaussian(0.0, 0.04), 0.0, 1.0);
        m.net_in_bps = std::max(0.0, 2.0e5 * (1.0 + rng_.gaussian(0.0, 0.2)));
        m.net_out_bps = std::max(0.0, 6.0e5 * (1.0 + rng_.gaussian(0.0, 0.2)));
        m.latency_ms = 15.0 + std::abs(rng_.gaussian(0.0, 8.0));
        return m;
    }

    TimeMs channel_time(Channel c) const {
        switch (c) {
            case Channel::Heartbeat:
                return static_cast<TimeMs>(std::llround(hb_count_ * sim_.heartbeat_ms));
            case Channel::Tracking:
                return tracking_cursor_ < tracking_events_.size()
                           ? tracking_events_[tracking_cursor_].first
                           : kNever;
            case Channel::Pose:
                return static_cast<TimeMs>(
                    std::llround(pose_phase_ms_ + pose_count_ * pose_period_ms_));
            case Channel::Metrics:
                if (host_) return kNever;
                return static_cast<TimeMs>(std::llround(10.0 + metrics_count_ * metrics_period_ms_));
            case Channel::Calibration:
                if (host_ || scene_.stations.empty()) return kNever;
                return static_cast<TimeMs>(std::llround(next_calibration_));
            case Channel::View:
                if (host_ || view_period_ms_ <= 0.0) return kNever;
                return static_cast<TimeMs>(std::llround(30.0 + view_count_ * view_period_ms_));
            case Channel::None: return kNever;
        }
        return kNever;
    }

    // Queues the next emitted message, skipping those silenced by an offline
    // incident.
    void advance() {
        if (!hello_sent_) {
            hello_sent_ = true;
            pending_ = Pending{{id_, protocol::Hello{host_ ? protocol::Role::Host
                                                           : protocol::Role::Visitor,
                                                     "sim"}}};
            return;
        }
        for (;;) {
            Channel best = Channel::None;
            TimeMs best_t = kNever;
            for (Channel c : {Channel::Heartbeat, Channel::Tracking, Channel::Pose,
                              Channel::Metrics, Channel::Calibration, Channel::View}) {
                const TimeMs t = channel_time(c);
                if (t < best_t) {
                    best = c;
                    best_t = t;
                }
            }
            if (best == Channel::None || best_t > duration_) return;

            std::optional<protocol::ClientBody> body = make(best, best_t);
            if (!body) continue;
            const bool silenced = std::any_of(offline_.begin(), offline_.end(),
                                              [&](const auto& w) { return w.contains_offline(best_t); });
            if (silenced) continue;

            TimeMs t = best_t;
            if (last_emitted_ && t <= *last_emitted_) t = *last_emitted_ + 1;
            if (t > duration_) return;
            last_emitted_ = t;
            std::visit([t](auto& b) {
                if constexpr (!std::is_same_v<std::decay_t<decltype(b)>, protocol::Hello>) b.t = t;
            }, *body);
            pending_ = Pending{{id_, std::move(*body)}};
            return;
        }
    }

    // Builds the body for a channel and moves that channel forward.
    std::optional<protocol::ClientBody> make(Channel c, TimeMs t) {
        switch (c) {
            case Channel::Heartbeat:
                ++hb_count_;
                return protocol::Heartbeat{t};
            case Channel::Tracking: {
                const auto kind = tracking_events_[tracking_cursor_++].second;
                return protocol::EventMsg{t, kind, std::nullopt};
            }
            case Channel::Pose: {
                ++pose_count_;
                const double dt = pose_period_ms_ / 1000.0;
                motion_t_ = t;
                step_motion(dt);
                const Pose head = head_pose();
                protocol::PoseMsg m{t, head, std::nullopt, std::nullopt};
                if (sim_.hands && !host_) {
                    const bool lost = in_any(losses_, t);
                    m.left = lost ? HandFrame{} : hand(false, head);
                    m.right = lost ? HandFrame{} : hand(true, head);
                }
                return m;
            }
            case Channel::Metrics:
                ++metrics_count_;
                return protocol::MetricsMsg{t, metrics(t)};
            case Channel::Calibration: {
                next_calibration_ = draw_calibration_gap(next_calibration_);
                std::string station = nearest_station();
                if (station.empty()) return std::nullopt;
                return protocol::EventMsg{t, protocol::EventKind::Calibration, std::move(station)};
            }
            case Channel::View:
                ++view_count_;
                return protocol::ViewFrame{t, 64, 64, protocol::FrameFormat::Rgb8, view_pattern(t)};
            case Channel::None: break;
        }
        return std::nullopt;
    }

    const SceneConfig& scene_;
    const SimConfig& sim_;
    std::size_t index_;
    bool host_;
    std::string id_;
    TimeMs duration_;
    Rng rng_;
    std::vector<Vec3> hand_;

    double pose_period_ms_ = 50.0;
    double pose_phase_ms_ = 25.0;
    double metrics_period_ms_ = 1000.0;
    double view_period_ms_ = 0.0;
    std::uint64_t hb_count_ = 0;
    std::uint64_t pose_count_ = 0;
    std::uint64_t metrics_count_ = 0;
    std::uint64_t view_count_ = 0;
    double next_calibration_ = 0.0;
    std::vector<std::pair<TimeMs, protocol::EventKind>> tracking_events_;
    std::size_t tracking_cursor_ = 0;
    std::vector<IncidentWindow> offline_;
    std::vector<IncidentWindow> dips_;
    std::vector<IncidentWindow> losses_;

    Vec3 pos_;
    Vec3 waypoint_;
    bool target_stair_ = false;
    double yaw_ = 0.0;
    double eye_height_ = 1.7;
    double sway_phase_ = 0.0;
    double dwell_s_ = 0.0;
    std::size_t floor_index_ = 0;
    double battery_ = 1.0;
    TimeMs motion_t_ = 0;

    bool hello_sent_ = false;
    std::optional<TimeMs> last_emitted_;
    std::optional<Pending> pending_;
};

struct FleetState {
    SceneConfig scene;
    SimConfig sim;
};

FleetSimulator::FleetSimulator(SceneConfig scene, SimConfig sim, double duration_s) {
    sim.validate(scene, duration_s);
    // Streams keep references into these; they live as long as the fleet.
    auto state = std::make_shared<FleetState>(FleetState{std::move(scene), std::move(sim)});
    const TimeMs duration = to_ms(duration_s);
    const std::size_t n = state->sim.n_visitors;
    for (std::size_t i = 0; i < n; ++i) {
        clients_.push_back(std::make_unique<ClientStream>(state->scene, state->sim, i, false, duration));
    }
    if (state->sim.include_host) {
        clients_.push_back(std::make_unique<ClientStream>(state->scene, state->sim, n, true, duration));
    }
    state_ = std::move(state);
}

FleetSimulator::~FleetSimulator() = default;
FleetSimulator::FleetSimulator(FleetSimulator&&) noexcept = default;
FleetSimulator& FleetSimulator::operator=(FleetSimulator&&) noexcept = default;

std::optional<SimMessage> FleetSimulator::next() {
    std::size_t best = clients_.size();
    TimeMs best_t = kNever;
    for (std::size_t i = 0; i < clients_.size(); ++i) {
        if (auto t = clients_[i]->peek(); t && *t < best_t) {
            best = i;
            best_t = *t;
        }
    }
    if (best == clients_.size()) return std::nullopt;
    return SimMessage{best, *clients_[best]->pop()};
}

std::size_t FleetSimulator::client_count() const { return clients_.size(); }

std::string FleetSimulator::client_id(std::size_t client) const { return clients_.at(client)->id(); }

std::optional<TimeMs> FleetSimulator::peek_time(std::size_t client) const {
    return clients_.at(client)->peek();
}

std::vector<SimMessage> simulate(const SceneConfig& scene, const SimConfig& sim, double duration_s) {
    FleetSimulator fleet(scene, sim, duration_s);
    std::vector<SimMessage> out;
    while (auto m = fleet.next()) out.push_back(std::move(*m));
    return out;
}

}  // namespace mrhost::sim
