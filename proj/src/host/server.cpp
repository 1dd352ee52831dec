#include "mrhost/host/server.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/core/detail/base64.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "mrhost/protocol/framer.hpp"

namespace mrhost::host {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kMaxQueuedSnapshots = 8;

const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>mrhost</title>
<style>body{font:14px monospace;margin:2em}td{padding:0 1em}</style></head>
<body><h3>mrhost</h3><div id="s">connecting...</div><table id="v"></table>
<script>
const ws = new WebSocket((location.protocol === "https:" ? "wss://" : "ws://") + location.host + "/ws");
ws.onmessage = (m) => {
  const s = JSON.parse(m.data);
  if (s.type) return;
  document.getElementById("s").textContent =
    "t=" + s.t + " ms, " + s.visitors.length + " visitors, " + s.primitives.length + " primitives";
  document.getElementById("v").innerHTML = s.visitors.map((v) =>
    "<tr><td>" + v.id + "</td><td>" + (v.online ? "online" : "offline") + "</td><td>" +
    v.tracking + "</td><td>" + (v.fps === null ? "-" : v.fps.toFixed(1)) + "</td></tr>").join("");
};
ws.onclose = () => { document.getElementById("s").textContent = "disconnected"; };
</script></body></html>
)";

std::string mime_type(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json" || ext == ".map") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".ico") return "image/x-icon";
    if (ext == ".wasm") return "application/wasm";
    return "application/octet-stream";
}

std::string base64(const std::vector<std::uint8_t>& bytes) {
    std::string out(beast::detail::base64::encoded_size(bytes.size()), '\0');
    out.resize(beast::detail::base64::encode(out.data(), bytes.data(), bytes.size()));
    return out;
}

}  // namespace

struct Server::Impl {
    class IngestSession;
    class HttpSession;
    class WsSession;

    explicit Impl(ServerConfig cfg)
        : config(std::move(cfg)),
          hub(config),
          ingest_acceptor(ioc),
          dash_acceptor(ioc),
          work(asio::make_work_guard(ioc)) {
        listen(ingest_acceptor, config.ingest_port, "ingest_port");
        listen(dash_acceptor, config.dash_port, "dash_port");
    }

    void listen(tcp::acceptor& acc, std::uint16_t port, const char* what) {
        beast::error_code ec;
        const auto address = asio::ip::make_address(config.bind_address, ec);
        if (ec) throw std::runtime_error("bad bind address '" + config.bind_address + "'");
        const tcp::endpoint ep(address, port);
        acc.open(ep.protocol(), ec);
        if (!ec) acc.set_option(asio::socket_base::reuse_address(true), ec);
        if (!ec) acc.bind(ep, ec);
        if (!ec) acc.listen(asio::socket_base::max_listen_connections, ec);
        if (ec) {
            throw std::runtime_error(std::string("cannot listen on ") + what + " " +
                                     std::to_string(port) + ": " + ec.message());
        }
    }

    TimeMs now_ms() const {
        return static_cast<TimeMs>(
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
    }

    void accept_ingest();
    void accept_dash();
    void tick_loop();
    void broadcast(std::shared_ptr<TickResult> result);

    ServerConfig config;
    Hub hub;
    ServerStats stats;
    asio::io_context ioc;
    tcp::acceptor ingest_acceptor;
    tcp::acceptor dash_acceptor;
    asio::executor_work_guard<asio::io_context::executor_type> work;
    Clock::time_point start = Clock::now();

    // io thread only
    std::map<DashId, std::weak_ptr<WsSession>> dashboards;
    DashId next_dash = 1;

    std::mutex stop_mu;
    std::condition_variable stop_cv;
    bool stopping = false;
};

class Server::Impl::IngestSession : public std::enable_shared_from_this<IngestSession> {
public:
    IngestSession(Impl& impl, tcp::socket socket)
        : impl_(impl), socket_(std::move(socket)), conn_(impl.hub.open_ingest()) {}

    void start() { read(); }

private:
    void read() {
        socket_.async_read_some(
            asio::buffer(buf_), [self = shared_from_this()](beast::error_code ec, std::size_t n) {
                self->on_read(ec, n);
            });
    }

    void on_read(beast::error_code ec, std::size_t n) {
        if (ec) {
            impl_.hub.close_ingest(conn_, impl_.now_ms());
            --impl_.stats.ingest_connections;
            return;
        }
        const TimeMs now = impl_.now_ms();
        framer_.feed(std::string_view(buf_.data(), n), [&](protocol::DecodeResult r) {
            if (auto* msg = std::get_if<protocol::ClientMessage>(&r)) {
                impl_.hub.ingest(conn_, *msg, now);
            } else {
                impl_.hub.note_decode_error();
            }
        });
        read();
    }

    Impl& impl_;
    tcp::socket socket_;
    session::ConnId conn_;
    protocol::LineFramer framer_;
    std::array<char, 64 * 1024> buf_{};
};

class Server::Impl::WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(Impl& impl, tcp::socket socket, DashId id)
        : impl_(impl), ws_(std::move(socket)), id_(id) {}

    void start(http::request<http::string_body> req) {
        upgrade_ = std::move(req);
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(upgrade_, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->impl_.dashboards[self->id_] = self;
            ++self->impl_.stats.dashboard_connections;
            self->read();
        });
    }

    // io thread. Snapshots may be dropped when the client lags; replies never.
    void send(std::shared_ptr<const std::string> text, bool snapshot) {
        if (snapshot) {
            std::size_t queued = 0;
            for (const auto& q : queue_) queued += q.second ? 1 : 0;
            if (queued >= kMaxQueuedSnapshots) {
                // keep the in-flight frame at the front
                for (auto it = queue_.begin() + (writing_ ? 1 : 0); it != queue_.end(); ++it) {
                    if (it->second) {
                        queue_.erase(it);
                        ++impl_.stats.frames_dropped;
                        break;
                    }
                }
            }
            ++impl_.stats.frames_queued;
        }
        queue_.emplace_back(std::move(text), snapshot);
        if (!writing_) write();
    }

    DashId id() const { return id_; }

private:
    void read() {
        ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            self->impl_.hub.submit_control(self->id_, beast::buffers_to_string(self->in_.data()));
            self->in_.consume(self->in_.size());
            self->read();
        });
    }

    void write() {
        if (queue_.empty() || closed_) {
            writing_ = false;
            return;
        }
        writing_ = true;
        ws_.text(true);
        ws_.async_write(asio::buffer(*queue_.front().first),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) {
                            if (ec) {
                                self->close();
                                return;
                            }
                            self->queue_.pop_front();
                            self->write();
                        });
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        queue_.clear();
        if (impl_.dashboards.erase(id_)) --impl_.stats.dashboard_connections;
    }

    Impl& impl_;
    websocket::stream<beast::tcp_stream> ws_;
    DashId id_;
    http::request<http::string_body> upgrade_;
    beast::flat_buffer in_;
    std::deque<std::pair<std::shared_ptr<const std::string>, bool>> queue_;
    bool writing_ = false;
    bool closed_ = false;
};

class Server::Impl::HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(Impl& impl, tcp::socket socket) : impl_(impl), stream_(std::move(socket)) {}

    void start() { read(); }

private:
    void read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buf_, req_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) {
                             self->on_read(ec);
                         });
    }

    void on_read(beast::error_code ec) {
        if (ec) return;
        if (websocket::is_upgrade(req_)) {
            if (req_.target() == "/ws") {
                stream_.expires_never();
                auto ws = std::make_shared<WsSession>(impl_, stream_.release_socket(),
                                                      impl_.next_dash++);
                ws->start(std::move(req_));
                return;
            }
            return respond(http::status::not_found, "text/plain", "no such endpoint\n");
        }
        if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
            return respond(http::status::method_not_allowed, "text/plain", "GET only\n");
        }
        std::string target(req_.target());
        if (auto q = target.find('?'); q != std::string::npos) target.resize(q);

        if (target.rfind("/view/", 0) == 0) {
            const auto view = impl_.hub.view_frame(target.substr(6));
            if (!view) return respond(http::status::not_found, "text/plain", "no view\n");
            nlohmann::ordered_json j;
            j["ref"] = view->ref;
            j["w"] = view->frame.w;
            j["h"] = view->frame.h;
            j["fmt"] = protocol::to_string(view->frame.fmt);
            j["data"] = base64(view->frame.data);
            return respond(http::status::ok, "application/json", j.dump());
        }
        if (target.find("..") != std::string::npos) {
            return respond(http::status::bad_request, "text/plain", "bad path\n");
        }
        if (target == "/") target = "/index.html";
        if (impl_.config.static_dir) {
            const std::filesystem::path file = *impl_.config.static_dir / target.substr(1);
            std::ifstream in(file, std::ios::binary);
            if (in && std::filesystem::is_regular_file(file)) {
                std::ostringstream body;
                body << in.rdbuf();
                return respond(http::status::ok, mime_type(file), body.str());
            }
        }
        if (target == "/index.html") {
            return respond(http::status::ok, "text/html; charset=utf-8", kFallbackPage);
        }
        respond(http::status::not_found, "text/plain", "not found\n");
    }

    void respond(http::status status, const std::string& type, std::string body) {
        auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
        res->set(http::field::server, "mrhost");
        res->set(http::field::content_type, type);
        res->keep_alive(req_.keep_alive());
        if (req_.method() != http::verb::head) res->body() = std::move(body);
        res->prepare_payload();
        http::async_write(stream_, *res,
                          [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                              if (ec) return;
                              if (!res->keep_alive()) {
                                  beast::error_code ignored;
                                  self->stream_.socket().shutdown(tcp::socket::shutdown_send,
                                                                  ignored);
                                  return;
                              }
                              self->read();
                          });
    }

    Impl& impl_;
    beast::tcp_stream stream_;
    beast::flat_buffer buf_;
    http::request<http::string_body> req_;
};

void Server::Impl::accept_ingest() {
    ingest_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
        if (ec) return;
        beast::error_code ignored;
        socket.set_option(tcp::no_delay(true), ignored);
        ++stats.ingest_connections;
        std::make_shared<IngestSession>(*this, std::move(socket))->start();
        accept_ingest();
    });
}

void Server::Impl::accept_dash() {
    dash_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
        if (ec) return;
        std::make_shared<HttpSession>(*this, std::move(socket))->start();
        accept_dash();
    });
}

void Server::Impl::broadcast(std::shared_ptr<TickResult> result) {
    auto snapshot = std::make_shared<const std::string>(std::move(result->encoded));
    for (auto& [id, weak] : dashboards) {
        if (auto ws = weak.lock()) ws->send(snapshot, true);
    }
    for (auto& [to, text] : result->replies) {
        auto it = dashboards.find(to);
        if (it == dashboards.end()) continue;
        if (auto ws = it->second.lock()) {
            ws->send(std::make_shared<const std::string>(std::move(text)), false);
        }
    }
}

void Server::Impl::tick_loop() {
    const auto period = std::chrono::milliseconds(config.tick_ms());
    std::uint64_t k = 0;
    for (;;) {
        const auto deadline = start + period * (k + 1);
        {
            std::unique_lock lock(stop_mu);
            if (stop_cv.wait_until(lock, deadline, [this] { return stopping; })) return;
        }
        ++k;
        const auto late = Clock::now() - deadline;
        const auto late_us = static_cast<std::uint64_t>(
            std::max<std::int64_t>(0, std::chrono::duration_cast<std::chrono::microseconds>(late).count()));
        if (late_us > stats.max_tick_late_us) stats.max_tick_late_us = late_us;
        if (late >= period) {
            const auto skip = static_cast<std::uint64_t>(late / period);
            stats.missed_ticks += skip;
            k += skip;
        }
        auto result = std::make_shared<TickResult>(hub.tick(now_ms(), k));
        ++stats.ticks;
        asio::post(ioc, [this, result] { broadcast(result); });
    }
}

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() { stop(); }

void Server::run() {
    impl_->accept_ingest();
    impl_->accept_dash();
    std::thread ticker([this] { impl_->tick_loop(); });
    impl_->ioc.run();
    {
        std::lock_guard lock(impl_->stop_mu);
        impl_->stopping = true;
    }
    impl_->stop_cv.notify_all();
    ticker.join();
}

void Server::stop() {
    {
        std::lock_guard lock(impl_->stop_mu);
        impl_->stopping = true;
    }
    impl_->stop_cv.notify_all();
    impl_->ioc.stop();
}

std::uint16_t Server::ingest_port() const { return impl_->ingest_acceptor.local_endpoint().port(); }
std::uint16_t Server::dash_port() const { return impl_->dash_acceptor.local_endpoint().port(); }
const ServerStats& Server::stats() const { return impl_->stats; }
Hub& Server::hub() { return impl_->hub; }

}  // namespace mrhost::host
