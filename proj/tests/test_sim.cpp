#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "mrhost/core/error.hpp"
#include "mrhost/protocol/codec.hpp"
#include "mrhost/sim/simulator.hpp"

using namespace mrhost;
using namespace mrhost::sim;
using nlohmann::json;

namespace {

SceneConfig test_scene() {
    return scene_from_json(json::parse(R"({
        "bounds": {"min": [-10, 0, -8], "max": [10, 4, 8]},
        "floors": [0],
        "stations": [{"id": "s01", "position": [-5, 0, 0]}, {"id": "s02", "position": [5, 0, 0]}],
        "obstacles": [{"min": [-1, 0, -1], "max": [1, 3, 1]}]
    })"));
}

std::string stream_bytes(const SceneConfig& scene, const SimConfig& cfg, double duration) {
    std::string out;
    for (const auto& m : simulate(scene, cfg, duration)) out += protocol::encode(m.msg);
    return out;
}

}  // namespace

TEST_CASE("visitor ids") {
    CHECK(visitor_id(0) == "v01");
    CHECK(visitor_id(11) == "v12");
}

TEST_CASE("same seed, same bytes; different seed, different bytes") {
    const SceneConfig scene = test_scene();
    SimConfig cfg;
    cfg.n_visitors = 4;
    const std::string a = stream_bytes(scene, cfg, 20);
    CHECK(a == stream_bytes(scene, cfg, 20));
    cfg.seed = 43;
    CHECK(a != stream_bytes(scene, cfg, 20));
}

TEST_CASE("streams are well formed") {
    const SceneConfig scene = test_scene();
    SimConfig cfg;
    cfg.n_visitors = 6;
    cfg.include_host = true;
    const auto msgs = simulate(scene, cfg, 60);
    std::map<std::size_t, std::optional<TimeMs>> last;
    std::map<std::size_t, int> poses, metrics, hbs;
    TimeMs global = 0;
    for (const auto& m : msgs) {
        REQUIRE(m.msg.valid());
        const bool first = !last.count(m.client);
        CHECK(first == std::holds_alternative<protocol::Hello>(m.msg.body));
        if (first) {
            last[m.client] = std::nullopt;
            continue;
        }
        const TimeMs t = *m.msg.time();
        CHECK(t <= 60000);
        CHECK(t >= global);  // merged in time order
        global = t;
        if (last[m.client]) CHECK(t > *last[m.client]);
        last[m.client] = t;
        if (const auto* p = std::get_if<protocol::PoseMsg>(&m.msg.body)) {
            ++poses[m.client];
            const Vec3 h = p->head.position;
            CHECK(scene.bounds.contains(h));
            for (const auto& ob : scene.obstacles) CHECK(!ob.blocks_xz(h));
        }
        if (std::holds_alternative<protocol::MetricsMsg>(m.msg.body)) ++metrics[m.client];
        if (std::holds_alternative<protocol::Heartbeat>(m.msg.body)) ++hbs[m.client];
    }
    CHECK(last.size() == 7);
    for (std::size_t c = 0; c < 6; ++c) {
        CHECK(poses[c] == 1200);
        CHECK(metrics[c] == 60);
        CHECK(hbs[c] == 121);
    }
    CHECK(metrics[6] == 0);  // host sends no metrics
}

TEST_CASE("scripted incidents") {
    const SceneConfig scene = test_scene();
    SimConfig cfg = sim_config_from_json(json::parse(R"({
        "n_visitors": 3,
        "calibration_rate": 0.0001,
        "scripted_incidents": [
            {"t_start": 10, "duration": 5, "visitor": "v02", "kind": "offline"},
            {"t_start": 20, "duration": 4, "visitor": "v03", "kind": "tracking_loss"},
            {"t_start": 5, "duration": 10, "visitor": "v01", "kind": "fps_dip"}
        ]})"));
    bool saw_after = false;
    std::vector<std::pair<TimeMs, protocol::EventKind>> v03_events;
    for (const auto& m : simulate(scene, cfg, 30)) {
        const auto t = m.msg.time();
        if (!t) continue;
        if (m.msg.id == "v02") {
            CHECK((*t <= 10000 || *t > 15000));
            if (*t > 15000 && !saw_after) {
                saw_after = true;
                CHECK(*t <= 15050);
            }
        }
        if (m.msg.id == "v03") {
            if (const auto* e = std::get_if<protocol::EventMsg>(&m.msg.body)) {
                if (e->kind != protocol::EventKind::Calibration) v03_events.emplace_back(*t, e->kind);
            }
            if (const auto* p = std::get_if<protocol::PoseMsg>(&m.msg.body); p && *t > 20000 && *t < 24000) {
                CHECK(!p->right->tracked);
            }
        }
        if (m.msg.id == "v01") {
            if (const auto* mm = std::get_if<protocol::MetricsMsg>(&m.msg.body)) {
                if (*t >= 5000 && *t < 15000) {
                    CHECK(mm->metrics.fps <= 30.0);
                } else {
                    CHECK(mm->metrics.fps > 60.0);
                }
            }
        }
    }
    CHECK(saw_after);
    REQUIRE(v03_events.size() == 2);
    CHECK(v03_events[0].first == 20001);  // bumped behind the 20000 heartbeat
    CHECK(v03_events[0].second == protocol::EventKind::TrackingLost);
    CHECK(v03_events[1].second == protocol::EventKind::TrackingRecovered);
}

TEST_CASE("calibrations name the nearest station") {
    const SceneConfig scene = test_scene();
    SimConfig cfg;
    cfg.n_visitors = 8;
    cfg.calibration_rate = 30.0;
    std::map<std::string, Vec3> head;
    int calibrations = 0;
    for (const auto& m : simulate(scene, cfg, 60)) {
        if (const auto* p = std::get_if<protocol::PoseMsg>(&m.msg.body)) head[m.msg.id] = p->head.position;
        if (const auto* e = std::get_if<protocol::EventMsg>(&m.msg.body)) {
            if (e->kind != protocol::EventKind::Calibration || !head.count(m.msg.id)) continue;
            ++calibrations;
            const Vec3 h = head[m.msg.id];
            const std::string nearest =
                distance(h, scene.stations[0].position) <= distance(h, scene.stations[1].position)
                    ? "s01"
                    : "s02";
            // the pose used by the simulator may be one step newer than the last one sent
            if (std::abs(distance(h, scene.stations[0].position) -
                         distance(h, scene.stations[1].position)) > 0.2) {
                CHECK(*e->station == nearest);
            }
        }
    }
    // Poisson: 8 visitors x 30/min x 1 min = 240 expected
    CHECK(calibrations > 180);
    CHECK(calibrations < 300);
}

TEST_CASE("config errors name the field") {
    auto field_of = [](const char* text) {
        try {
            sim_config_from_json(json::parse(text)).validate(SceneConfig{}, 60);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(R"({"pose_hz": 0})") == "pose_hz");
    CHECK(field_of(R"({"bogus": 1})") == "bogus");
    CHECK(field_of(R"({"seed": -1})") == "seed");
    CHECK(field_of(R"({"scripted_incidents":[{"t_start":1,"duration":1,"visitor":"v99","kind":"offline"}]})") ==
          "scripted_incidents[0].visitor");
    CHECK(field_of(R"({"scripted_incidents":[{"t_start":59,"duration":5,"visitor":"v01","kind":"offline"}]})") ==
          "scripted_incidents[0]");
    CHECK(field_of(R"({"scripted_incidents":[{"t_start":1,"duration":1,"visitor":"v01","kind":"meteor"}]})") ==
          "scripted_incidents[0].kind");
    CHECK(field_of(R"({})") == "<none>");

    CHECK_THROWS_AS(scene_from_json(json::parse(R"({"floors": []})")).validate(), ConfigError);
    CHECK_THROWS_AS(scene_from_json(json::parse(R"({"rooms": 3})")), ConfigError);
}

TEST_CASE("scene json round trip") {
    const SceneConfig s = test_scene();
    const SceneConfig back = scene_from_json(json::parse(to_json(s).dump()));
    CHECK(back.stations.size() == 2);
    CHECK(back.obstacles.size() == 1);
    CHECK(back.bounds.max.x == 10.0);
    CHECK(floor_below({0.0, 4.0}, 5.5) == 4.0);
    CHECK(floor_below({0.0, 4.0}, 3.9) == 0.0);
    CHECK(floor_below({0.0, 4.0}, -1.0) == 0.0);
}

TEST_CASE("stairs move visitors between floors") {
    SceneConfig scene = scene_from_json(json::parse(R"({
        "bounds": {"min": [-6, 0, -6], "max": [6, 8, 6]},
        "floors": [0, 4],
        "stairs": [[0, 0, 0]]
    })"));
    SimConfig cfg;
    cfg.n_visitors = 4;
    std::set<bool> upper;
    for (const auto& m : simulate(scene, cfg, 300)) {
        if (const auto* p = std::get_if<protocol::PoseMsg>(&m.msg.body)) {
            upper.insert(p->head.position.y > 4.0);
        }
    }
    CHECK(upper.size() == 2);
}
