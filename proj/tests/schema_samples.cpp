// Prints dashboard messages as NDJSON for tests/validate_schema.py: replay
// snapshots across several viz configs, plus history and error replies.

#include <iostream>

#include "mrhost/host/replay.hpp"

using namespace mrhost;

int main() {
    host::ServerConfig server;
    server.viz.enabled.fps_line = true;
    server.viz.enabled.net_traffic = true;
    const Vec3 lo = server.scene.bounds.min, hi = server.scene.bounds.max;
    server.scene.stations = {{"s01", {lo.x * 0.5, lo.y, lo.z * 0.5}},
                             {"s02", {hi.x * 0.5, lo.y, hi.z * 0.5}}};
    sim::SimConfig sim;
    sim.n_visitors = 6;
    sim.include_host = true;
    sim.calibration_rate = 30.0;
    sim.scripted_incidents = {{5.0, 6.0, "v02", sim::IncidentKind::Offline},
                              {8.0, 4.0, "v04", sim::IncidentKind::TrackingLoss},
                              {3.0, 10.0, "v01", sim::IncidentKind::FpsDip}};

    const std::pair<std::uint64_t, const char*> controls[] = {
        {50, R"({"type":"request_history","visitor":"v01"})"},
        {60, R"({"type":"request_history","visitor":"v03","up_to_t":4000})"},
        {70, R"({"type":"request_history","visitor":"nobody"})"},
        {80, R"({"type":"set_viz_config","patch":{"placement":"host","level":"floor"}})"},
        {120, R"({"type":"set_viz_config","patch":{"grid_mode":"grid","flatten_links":true}})"},
        {160, R"({"type":"set_viz_config","patch":{"hemisphere_radius":-1}})"},
        {170, R"({"type":"set_host_pose","pose":{"p":[1,1.7,2],"q":[0,0,0,1]}})"},
        {200, R"({"type":"set_viz_config","patch":{"placement":"subject","grid_mode":"auto"}})"},
    };

    host::Replay run(server, sim, 30.0);
    while (auto r = run.step()) {
        for (const auto& [at, text] : controls) {
            if (at == r->tick) run.hub().submit_control(1, text);
        }
        for (const auto& [dash, reply] : r->replies) std::cout << reply << '\n';
        if (r->tick % 15 == 0) std::cout << r->encoded << '\n';
    }
}
