#include "mrhost/sim/live.hpp"

#include <chrono>
#include <thread>

#include <boost/asio.hpp>

#include "mrhost/protocol/codec.hpp"

namespace mrhost::sim {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

struct Link {
    std::string id;
    protocol::Role role = protocol::Role::Visitor;
    std::unique_ptr<tcp::socket> socket;
    Clock::time_point retry_at{};
};

bool connect(asio::io_context& ioc, const tcp::resolver::results_type& endpoints, Link& link) {
    auto socket = std::make_unique<tcp::socket>(ioc);
    boost::system::error_code ec;
    asio::connect(*socket, endpoints, ec);
    if (ec) return false;
    socket->set_option(tcp::no_delay(true), ec);
    const std::string hello = protocol::encode({link.id, protocol::Hello{link.role, "sim"}});
    asio::write(*socket, asio::buffer(hello), ec);
    if (ec) return false;
    link.socket = std::move(socket);
    return true;
}

}  // namespace

LiveResult run_live(const SceneConfig& scene, const SimConfig& sim, double duration_s,
                    const LiveOptions& options) {
    if (!(options.speed > 0.0)) throw std::invalid_argument("speed must be > 0");
    FleetSimulator fleet(scene, sim, duration_s);
    asio::io_context ioc;
    tcp::resolver resolver(ioc);
    boost::system::error_code ec;
    const auto endpoints = resolver.resolve(options.host, std::to_string(options.port), ec);
    if (ec) throw std::runtime_error("cannot resolve " + options.host + ": " + ec.message());

    auto say = [&](const std::string& s) {
        if (options.log) options.log(s);
    };
    auto stopped = [&] { return options.stop && options.stop->load(); };

    std::vector<Link> links(fleet.client_count());
    LiveResult result;
    const auto start = Clock::now();
    const auto reconnect = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(options.reconnect_s));

    while (auto m = fleet.next()) {
        Link& link = links[m->client];
        if (const auto* hello = std::get_if<protocol::Hello>(&m->msg.body)) {
            link.id = m->msg.id;
            link.role = hello->role;
            if (!connect(ioc, endpoints, link)) {
                throw std::runtime_error("cannot connect to " + options.host + ":" +
                                         std::to_string(options.port));
            }
            ++result.sent;
            continue;
        }
        const double t_s = static_cast<double>(m->msg.time().value_or(0)) / 1000.0;
        const auto due = start + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(t_s / options.speed));
        while (Clock::now() < due) {
            if (stopped()) {
                result.interrupted = true;
                return result;
            }
            std::this_thread::sleep_until(std::min(due, Clock::now() + std::chrono::milliseconds(50)));
        }
        if (stopped()) {
            result.interrupted = true;
            return result;
        }

        if (!link.socket) {
            if (Clock::now() < link.retry_at || !connect(ioc, endpoints, link)) {
                if (Clock::now() >= link.retry_at) link.retry_at = Clock::now() + reconnect;
                ++result.dropped;
                continue;
            }
            ++result.reconnects;
            say(link.id + " reconnected");
        }
        const std::string line = protocol::encode(m->msg);
        asio::write(*link.socket, asio::buffer(line), ec);
        if (ec) {
            say(link.id + " write failed (" + ec.message() + "), retrying in " +
                std::to_string(options.reconnect_s) + " s");
            link.socket.reset();
            link.retry_at = Clock::now() + reconnect;
            ++result.dropped;
            continue;
        }
        ++result.sent;
    }
    return result;
}

}  // namespace mrhost::sim
