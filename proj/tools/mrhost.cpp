// mrhost: the telemetry/visualization service.
//
//   mrhost serve --config server.json [--ingest-port N --dash-port N --tick-hz N --record DIR]
//   mrhost check-config server.json
//   mrhost replay --config server.json --sim sim.json --duration 30 --tick 300

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include "mrhost/core/error.hpp"
#include "mrhost/host/replay.hpp"
#include "mrhost/host/server.hpp"

using namespace mrhost;

namespace {

host::ServerConfig load_config(const std::string& path) {
    if (!path.empty()) return host::load_server_config(path);
    if (const char* env = std::getenv("MRHOST_CONFIG"); env && *env) {
        return host::load_server_config(env);
    }
    return {};
}

int config_error(const ConfigError& e) {
    std::cerr << "mrhost: invalid config: " << e.what() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mrhost - MR session telemetry and visualization service"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint16_t> ingest_port, dash_port;
    std::optional<double> tick_hz;
    std::optional<std::string> record_dir, static_dir;
    auto* serve = app.add_subcommand("serve", "run the service");
    serve->add_option("--config", config_path, "server config JSON (default: $MRHOST_CONFIG)");
    serve->add_option("--ingest-port", ingest_port, "telemetry TCP port");
    serve->add_option("--dash-port", dash_port, "dashboard HTTP/WebSocket port");
    serve->add_option("--tick-hz", tick_hz, "snapshot rate, 1..60");
    serve->add_option("--record", record_dir, "write JSONL session recording here");
    serve->add_option("--static", static_dir, "dashboard build to serve at /");

    std::string check_path;
    auto* check = app.add_subcommand("check-config", "validate a server config and exit");
    check->add_option("file", check_path, "server config JSON")->required();

    std::string replay_config, replay_sim;
    double replay_duration = 30.0;
    std::optional<std::uint64_t> replay_tick;
    std::string replay_out;
    auto* rep = app.add_subcommand("replay", "deterministic virtual-time run of the simulator");
    rep->add_option("--config", replay_config, "server config JSON");
    rep->add_option("--sim", replay_sim, "simulator config JSON");
    rep->add_option("--duration", replay_duration, "simulated seconds")->check(CLI::NonNegativeNumber);
    rep->add_option("--tick", replay_tick, "print only this tick's snapshot");
    rep->add_option("--out", replay_out, "write snapshots here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            host::load_server_config(check_path).validate();
            std::cout << check_path << ": ok\n";
            return 0;
        }

        if (*rep) {
            host::ServerConfig cfg = load_config(replay_config);
            cfg.record_dir.reset();
            cfg.validate();
            const sim::SimConfig sim = replay_sim.empty() ? sim::SimConfig{}
                                                          : sim::load_sim_config(replay_sim);
            std::ofstream file;
            if (!replay_out.empty()) file.open(replay_out);
            std::ostream& out = replay_out.empty() ? std::cout : file;
            host::replay(cfg, sim, replay_duration, [&](const host::TickResult& r) {
                if (!replay_tick || *replay_tick == r.tick) out << r.encoded << "\n";
            });
            return 0;
        }

        host::ServerConfig cfg = load_config(config_path);
        if (ingest_port) cfg.ingest_port = *ingest_port;
        if (dash_port) cfg.dash_port = *dash_port;
        if (tick_hz) cfg.tick_hz = *tick_hz;
        if (record_dir) cfg.record_dir = *record_dir;
        if (static_dir) cfg.static_dir = *static_dir;
        cfg.validate();

        host::Server server(cfg);
        std::cerr << "mrhost: ingest on " << cfg.bind_address << ":" << server.ingest_port()
                  << ", dashboard on http://" << cfg.bind_address << ":" << server.dash_port()
                  << "/ (tick " << cfg.tick_hz << " Hz)\n";

        boost::asio::io_context signal_ioc;
        boost::asio::signal_set signals(signal_ioc, SIGINT, SIGTERM);
        signals.async_wait([&](const boost::system::error_code& ec, int) {
            if (!ec) server.stop();
        });
        std::thread signal_thread([&] { signal_ioc.run(); });
        server.run();
        signal_ioc.stop();
        signal_thread.join();
        const auto& s = server.stats();
        std::cerr << "mrhost: stopped after " << s.ticks << " ticks (" << s.missed_ticks
                  << " missed, " << s.frames_dropped << " dashboard frames dropped)\n";
        return 0;
    } catch (const ConfigError& e) {
        return config_error(e);
    } catch (const std::exception& e) {
        std::cerr << "mrhost: " << e.what() << "\n";
        return 1;
    }
}
