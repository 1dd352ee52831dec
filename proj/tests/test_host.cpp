#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <boost/asio.hpp>

#include "mrhost/host/recorder.hpp"
#include "mrhost/host/replay.hpp"
#include "mrhost/host/server.hpp"
#include "mrhost/protocol/codec.hpp"
#include "mrhost/sim/live.hpp"
#include "support/ws_client.hpp"

using namespace mrhost;
using namespace mrhost::host;
using nlohmann::json;

namespace {

protocol::ClientMessage hello(const std::string& id) { return {id, protocol::Hello{}}; }
protocol::ClientMessage pose(const std::string& id, TimeMs t, Vec3 p) {
    return {id, protocol::PoseMsg{t, {p, {}}, std::nullopt, std::nullopt}};
}

std::size_t count_kind(const json& snap, const std::string& kind) {
    std::size_t n = 0;
    for (const auto& p : snap["primitives"]) n += p["kind"] == kind ? 1 : 0;
    return n;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("mrhost_test_" + name + "_" +
                                                       std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

ServerConfig local_config() {
    ServerConfig c;
    c.bind_address = "127.0.0.1";
    c.ingest_port = 0;
    c.dash_port = 0;
    return c;
}

// Runs a server on a background thread for the lifetime of the object.
struct RunningServer {
    explicit RunningServer(ServerConfig c) : server(std::move(c)), thread([this] { server.run(); }) {}
    ~RunningServer() {
        server.stop();
        thread.join();
    }
    Server server;
    std::thread thread;
};

}  // namespace

TEST_CASE("server config parsing and validation") {
    ServerConfig c = server_config_from_json(json::parse(R"({
        "ingest_port": 9000, "dash_port": 9001, "tick_hz": 20,
        "viz": {"area": false, "placement": "host"},
        "scene": {"stations": [{"id": "s01", "position": [0, 0, 0]}]},
        "host_pose": {"p": [1, 1.6, 2], "q": [0, 0, 0, 1]}
    })"));
    c.validate();
    CHECK(c.ingest_port == 9000);
    CHECK(c.tick_ms() == 50);
    CHECK(!c.viz.enabled.area);
    CHECK(c.viz.placement == viz::Placement::HostCentric);
    CHECK(c.scene.stations.size() == 1);

    auto field_of = [](const char* text) {
        try {
            server_config_from_json(json::parse(text)).validate();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(R"({"tick_hz": 0})") == "tick_hz");
    CHECK(field_of(R"({"tick_hz": 61})") == "tick_hz");
    CHECK(field_of(R"({"dash_port": 70000})") == "dash_port");
    CHECK(field_of(R"({"viz": {"fov_h": 200}})") == "fov_h");
    CHECK(field_of(R"({"viz": {"colour": 1}})") == "colour");
    CHECK(field_of(R"({"extra": 1})") == "extra");
    CHECK(field_of(R"({"filter": {"eps_pos": 0}})") == "filter");
    CHECK(field_of(R"({})") == "<none>");
}

TEST_CASE("hub emits snapshots with no clients") {
    Hub hub(ServerConfig{});
    for (int i = 1; i <= 3; ++i) {
        const TickResult r = hub.tick(i * 100);
        const json j = json::parse(r.encoded);
        CHECK(j["t"] == i * 100);
        CHECK(j["visitors"].empty());
        CHECK(j["diagnostics"]["tick"] == i);
        CHECK(j["config"]["area"] == true);
    }
}

TEST_CASE("control patches apply atomically at the next tick") {
    Hub hub(ServerConfig{});
    auto c = hub.open_ingest();
    hub.ingest(c, hello("v01"), 0);
    hub.ingest(c, pose("v01", 10, {0, 1.7, -5}), 10);
    json before = json::parse(hub.tick(100).encoded);
    CHECK(count_kind(before, "square") == 1);
    CHECK(count_kind(before, "box") == 1);

    hub.submit_control(1, R"({"type":"set_viz_config","patch":{"area":false,"bbox":false}})");
    CHECK(hub.viz_config().enabled.area);  // queued, not yet applied
    json after = json::parse(hub.tick(200).encoded);
    CHECK(count_kind(after, "square") == 0);
    CHECK(count_kind(after, "box") == 0);
    CHECK(after["config"]["area"] == false);
    CHECK(after["config"]["bbox"] == false);

    // invalid patch: nothing applied, error to the sender only
    hub.submit_control(2, R"({"type":"set_viz_config","patch":{"area":true,"fov_h":500}})");
    TickResult r = hub.tick(300);
    REQUIRE(r.replies.size() == 1);
    CHECK(r.replies[0].first == 2);
    CHECK(json::parse(r.replies[0].second)["type"] == "error");
    CHECK(count_kind(json::parse(r.encoded), "square") == 0);
}

TEST_CASE("history replies go to the requester") {
    Hub hub(ServerConfig{});
    auto c = hub.open_ingest();
    hub.ingest(c, hello("v01"), 0);
    for (TimeMs t = 0; t <= 5000; t += 50) hub.ingest(c, pose("v01", t, {t / 1000.0, 1.7, 0}), t);
    hub.submit_control(7, R"({"type":"request_history","visitor":"v01","up_to_t":2000})");
    hub.submit_control(8, R"({"type":"request_history","visitor":"ghost"})");
    TickResult r = hub.tick(5000);
    REQUIRE(r.replies.size() == 2);
    CHECK(r.replies[0].first == 7);
    const json h = json::parse(r.replies[0].second);
    CHECK(h["type"] == "history");
    CHECK(h["samples"].back()["t"].get<TimeMs>() <= 2000);
    CHECK(r.replies[1].first == 8);
    CHECK(json::parse(r.replies[1].second)["type"] == "error");
}

TEST_CASE("host pose precedence: host client, then dashboard, then config") {
    ServerConfig cfg;
    cfg.host_pose = {{0, 1.7, 0}, {}};
    cfg.viz.enabled = viz::VizFlags{false, false, false, true, false, false, false,
                                    false, false, false, false, false, false};
    Hub hub(cfg);
    auto c = hub.open_ingest();
    hub.ingest(c, hello("v01"), 0);
    hub.ingest(c, pose("v01", 0, {0, 1.7, 10}), 0);
    auto first_point = [&](TimeMs t) {
        const json j = json::parse(hub.tick(t).encoded);
        return j["primitives"][0]["points"][0];
    };
    CHECK(first_point(100)[2] == doctest::Approx(-0.4));
    hub.submit_control(1, R"({"type":"set_host_pose","pose":{"p":[5,1.7,0],"q":[0,0,0,1]}})");
    CHECK(first_point(200)[0] == doctest::Approx(5.0));
    auto h = hub.open_ingest();
    hub.ingest(h, {"h01", protocol::Hello{protocol::Role::Host, "x"}}, 250);
    hub.ingest(h, pose("h01", 250, {-5, 1.7, 0}), 250);
    CHECK(first_point(300)[0] == doctest::Approx(-5.0));
}

TEST_CASE("recorder writes per-visitor jsonl and events") {
    const auto dir = temp_dir("rec");
    ServerConfig cfg;
    cfg.record_dir = dir;
    {
        Hub hub(cfg);
        auto c = hub.open_ingest();
        hub.ingest(c, hello("v01"), 0);
        for (TimeMs t = 0; t <= 3000; t += 50) hub.ingest(c, pose("v01", t, {}), t);
        hub.tick(6000);  // timeout sweep
    }
    std::ifstream samples(dir / "v01.jsonl");
    std::string line;
    int n = 0;
    while (std::getline(samples, line)) {
        CHECK(json::parse(line).contains("pose"));
        ++n;
    }
    CHECK(n == 4);  // t_max = 1 s on a stationary visitor
    std::ifstream events(dir / "events.jsonl");
    REQUIRE(std::getline(events, line));
    const json e = json::parse(line);
    CHECK(e["kind"] == "went_offline");
    CHECK(e["t"] == 6000);
    std::filesystem::remove_all(dir);
}

TEST_CASE("replay is deterministic") {
    ServerConfig cfg;
    sim::SimConfig sim;
    sim.n_visitors = 3;
    std::string a, b;
    replay(cfg, sim, 5, [&](const TickResult& r) { a += r.encoded; });
    replay(cfg, sim, 5, [&](const TickResult& r) { b += r.encoded; });
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("server: port in use fails at startup") {
    boost::asio::io_context ioc;
    boost::asio::ip::tcp::acceptor hog(ioc, {boost::asio::ip::make_address("127.0.0.1"), 0});
    ServerConfig cfg = local_config();
    cfg.ingest_port = hog.local_endpoint().port();
    CHECK_THROWS_WITH_AS(Server{cfg}, doctest::Contains("ingest_port"), std::runtime_error);
}

TEST_CASE("server: ingest, snapshots, controls and static files over sockets") {
    const auto web = temp_dir("web");
    std::filesystem::create_directories(web);
    std::ofstream(web / "app.js") << "console.log(1)";
    ServerConfig cfg = local_config();
    cfg.tick_hz = 20;
    cfg.static_dir = web;
    RunningServer rs(cfg);
    const auto dash = rs.server.dash_port();

    auto [code, body] = testing::http_get(dash, "/");
    CHECK(code == 200);
    CHECK(body.find("/ws") != std::string::npos);
    CHECK(testing::http_get(dash, "/app.js").second == "console.log(1)");
    CHECK(testing::http_get(dash, "/missing.js").first == 404);
    CHECK(testing::http_get(dash, "/view/nobody").first == 404);

    testing::WsClient a(dash), b(dash);
    boost::asio::io_context ioc;
    boost::asio::ip::tcp::socket sock(ioc);
    sock.connect({boost::asio::ip::make_address("127.0.0.1"), rs.server.ingest_port()});
    std::string lines = protocol::encode(hello("v01")) + "garbage\n" +
                        protocol::encode(pose("v01", 100, {1, 1.7, -3}));
    boost::asio::write(sock, boost::asio::buffer(lines));

    // wait until the visitor shows up
    json snap;
    for (int i = 0; i < 100; ++i) {
        auto text = a.read();
        REQUIRE(text);
        snap = json::parse(*text);
        if (!snap["visitors"].empty()) break;
    }
    REQUIRE(snap["visitors"].size() == 1);
    CHECK(snap["visitors"][0]["position"][0] == 1.0);
    CHECK(snap["diagnostics"]["decode_errors"] == 1);
    CHECK(snap["diagnostics"]["connected"] == 1);

    a.send(R"({"type":"request_history","visitor":"v01"})");
    bool a_got = false;
    for (int i = 0; i < 20 && !a_got; ++i) {
        auto text = a.read();
        REQUIRE(text);
        a_got = json::parse(*text).value("type", "") == "history";
    }
    CHECK(a_got);
    for (int i = 0; i < 10; ++i) {
        auto text = b.read();
        REQUIRE(text);
        CHECK(json::parse(*text).value("type", "") != "history");
    }

    b.send(R"({"type":"set_viz_config","patch":{"area":false,"arrow":false}})");
    bool applied = false;
    for (int i = 0; i < 20 && !applied; ++i) {
        const json s = json::parse(*b.read());
        if (s.contains("type")) continue;
        // both flags flip together or not at all
        CHECK(s["config"]["area"] == s["config"]["arrow"]);
        applied = s["config"]["area"] == false;
        if (applied) {
            CHECK(count_kind(s, "square") == 0);
            CHECK(count_kind(s, "arrow") == 0);
        }
    }
    CHECK(applied);

    sock.close();
    bool offline = false;
    for (int i = 0; i < 20 && !offline; ++i) {
        const json s = json::parse(*a.read());
        if (!s.contains("type")) offline = s["visitors"][0]["online"] == false;
    }
    CHECK(offline);
    a.close();
    b.close();
    std::filesystem::remove_all(web);
}

TEST_CASE("live simulator: --speed 10 plays 60 s in about 6 s") {
    Server server(local_config());
    std::thread run([&] { server.run(); });
    sim::SimConfig sim;
    sim.n_visitors = 4;
    sim::LiveOptions o;
    o.port = server.ingest_port();
    o.speed = 10.0;
    const auto t0 = std::chrono::steady_clock::now();
    const sim::LiveResult r = sim::run_live(sim::SceneConfig{}, sim, 60.0, o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    server.stop();
    run.join();
    CHECK(wall == doctest::Approx(6.0).epsilon(0.10));
    CHECK(r.sent == sim::simulate(sim::SceneConfig{}, sim, 60.0).size());
    CHECK(r.dropped == 0);
    CHECK(r.reconnects == 0);
}
