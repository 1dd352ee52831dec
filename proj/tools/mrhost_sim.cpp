// mrhost-sim: seeded fleet of simulated headsets.
//
//   mrhost-sim --server HOST:PORT --scene scene.json --config sim.json --duration 120 --speed 1
//   mrhost-sim --scene scene.json --config sim.json --duration 30 --dump stream.jsonl

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mrhost/core/error.hpp"
#include "mrhost/protocol/codec.hpp"
#include "mrhost/sim/live.hpp"

using namespace mrhost;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mrhost-sim - simulated MR headset fleet"};
    std::string server = "127.0.0.1:7401";
    std::string scene_path, sim_path, dump_path;
    double duration = 120.0;
    double speed = 1.0;
    app.add_option("--server", server, "HOST:PORT of the ingest endpoint");
    app.add_option("--scene", scene_path, "scene JSON (default: built-in empty hall)");
    app.add_option("--config", sim_path, "simulator JSON (default: 8 visitors, seed 42)");
    app.add_option("--duration", duration, "simulated seconds")->check(CLI::NonNegativeNumber);
    app.add_option("--speed", speed, "simulated seconds per wall second")
        ->check(CLI::PositiveNumber);
    app.add_option("--dump", dump_path, "write the message stream as JSONL instead of connecting");
    CLI11_PARSE(app, argc, argv);

    try {
        const sim::SceneConfig scene = scene_path.empty() ? sim::SceneConfig{}
                                                          : sim::load_scene(scene_path);
        const sim::SimConfig sim = sim_path.empty() ? sim::SimConfig{}
                                                    : sim::load_sim_config(sim_path);

        if (!dump_path.empty()) {
            std::ofstream out(dump_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + dump_path);
            sim::FleetSimulator fleet(scene, sim, duration);
            std::size_t n = 0;
            while (auto m = fleet.next()) {
                out << protocol::encode(m->msg);
                ++n;
            }
            std::cerr << "mrhost-sim: wrote " << n << " messages to " << dump_path << "\n";
            return 0;
        }

        const auto colon = server.rfind(':');
        if (colon == std::string::npos) throw ConfigError("server", "expected HOST:PORT");
        sim::LiveOptions opts;
        opts.host = server.substr(0, colon);
        try {
            const int port = std::stoi(server.substr(colon + 1));
            if (port <= 0 || port > 65535) throw std::out_of_range("port");
            opts.port = static_cast<std::uint16_t>(port);
        } catch (const std::exception&) {
            throw ConfigError("server", "bad port in '" + server + "'");
        }
        opts.speed = speed;
        opts.stop = &g_stop;
        opts.log = [](const std::string& s) { std::cerr << "mrhost-sim: " << s << "\n"; };
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);

        const sim::LiveResult r = sim::run_live(scene, sim, duration, opts);
        std::cerr << "mrhost-sim: sent " << r.sent << " messages, " << r.dropped << " dropped, "
                  << r.reconnects << " reconnects" << (r.interrupted ? " (interrupted)" : "")
                  << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "mrhost-sim: invalid config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "mrhost-sim: " << e.what() << "\n";
        return 2;
    }
}
