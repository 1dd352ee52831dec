#pragma once

#include <chrono>
#include <optional>
#include <string>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace mrhost::testing {

// Blocking dashboard client for tests.
class WsClient {
public:
    explicit WsClient(std::uint16_t port) : resolver_(ioc_), ws_(ioc_) {
        auto results = resolver_.resolve("127.0.0.1", std::to_string(port));
        boost::beast::get_lowest_layer(ws_).connect(results);
        ws_.handshake("127.0.0.1:" + std::to_string(port), "/ws");
    }

    void send(const std::string& text) {
        ws_.text(true);
        ws_.write(boost::asio::buffer(text));
    }

    // nullopt on timeout or close.
    std::optional<std::string> read(std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
        boost::beast::get_lowest_layer(ws_).expires_after(timeout);
        boost::beast::flat_buffer buf;
        boost::beast::error_code ec;
        ws_.read(buf, ec);
        if (ec) return std::nullopt;
        return boost::beast::buffers_to_string(buf.data());
    }

    void close() {
        boost::beast::error_code ec;
        ws_.close(boost::beast::websocket::close_code::normal, ec);
    }

private:
    boost::asio::io_context ioc_;
    boost::asio::ip::tcp::resolver resolver_;
    boost::beast::websocket::stream<boost::beast::tcp_stream> ws_;
};

inline std::pair<int, std::string> http_get(std::uint16_t port, const std::string& target) {
    namespace http = boost::beast::http;
    boost::asio::io_context ioc;
    boost::beast::tcp_stream stream(ioc);
    boost::asio::ip::tcp::resolver resolver(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    http::write(stream, req);
    boost::beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    return {static_cast<int>(res.result_int()), res.body()};
}

}  // namespace mrhost::testing
