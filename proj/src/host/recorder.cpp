#include "mrhost/host/recorder.hpp"

#include <stdexcept>

#include "mrhost/protocol/codec.hpp"

namespace mrhost::host {

using nlohmann::ordered_json;

ordered_json event_to_json(const session::SystemEvent& e) {
    ordered_json j;
    j["t"] = e.t;
    j["visitor"] = e.visitor_id;
    j["kind"] = session::kind_name(e);
    if (const auto* off = std::get_if<session::event::WentOffline>(&e.kind)) {
        j["last_position"] =
            off->last_position ? protocol::vec_to_json(*off->last_position) : ordered_json(nullptr);
    } else if (const auto* cal = std::get_if<session::event::Calibration>(&e.kind)) {
        j["station"] = cal->station;
        j["cumulative_count"] = cal->cumulative_count;
    }
    return j;
}

ordered_json sample_to_json(const session::TraceSample& s) {
    ordered_json j;
    j["t"] = s.t;
    j["pose"] = protocol::pose_to_json(s.pose);
    j["fps"] = s.fps ? ordered_json(*s.fps) : ordered_json(nullptr);
    return j;
}

Recorder::Recorder(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create record dir " + dir_.string() + ": " + ec.message());
    events_.open(dir_ / "events.jsonl", std::ios::app);
    if (!events_) throw std::runtime_error("cannot write " + (dir_ / "events.jsonl").string());
}

std::ofstream& Recorder::stream_for(const std::string& visitor) {
    auto it = visitors_.find(visitor);
    if (it == visitors_.end()) {
        it = visitors_.emplace(visitor, std::ofstream(dir_ / (visitor + ".jsonl"), std::ios::app)).first;
    }
    return it->second;
}

void Recorder::sample(const std::string& visitor, const session::TraceSample& s) {
    stream_for(visitor) << sample_to_json(s).dump() << '\n' << std::flush;
}

void Recorder::event(const session::SystemEvent& e) {
    events_ << event_to_json(e).dump() << '\n' << std::flush;
}

void Recorder::attach(session::SessionEngine& engine) {
    engine.on_kept = [this](const std::string& v, const session::TraceSample& s) { sample(v, s); };
    engine.on_event = [this](const session::SystemEvent& e) { event(e); };
}

}  // namespace mrhost::host
