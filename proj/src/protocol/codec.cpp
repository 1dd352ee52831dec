#include "mrhost/protocol/codec.hpp"

#include <boost/beast/core/detail/base64.hpp>

namespace mrhost::protocol {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

namespace b64 = boost::beast::detail::base64;

[[noreturn]] void fail(ProtocolError::Kind kind, std::string detail) {
    throw ProtocolErrorException{{kind, std::move(detail)}};
}

const json& require(const json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end()) fail(ProtocolError::Kind::MissingField, field);
    return *it;
}

double number(const json& j, const char* what) {
    if (!j.is_number()) fail(ProtocolError::Kind::BadValue, std::string(what) + ": not a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ProtocolError::Kind::BadValue, std::string(what) + ": not finite");
    return v;
}

std::uint64_t unsigned_int(const json& j, const char* what) {
    if (!j.is_number_unsigned()) {
        // Non-negative integers parse as unsigned; anything else is wrong.
        fail(ProtocolError::Kind::BadValue, std::string(what) + ": not an unsigned integer");
    }
    return j.get<std::uint64_t>();
}

const std::string& string_field(const json& obj, const char* field) {
    const json& v = require(obj, field);
    if (!v.is_string()) fail(ProtocolError::Kind::BadValue, std::string(field) + ": not a string");
    return v.get_ref<const std::string&>();
}

std::string base64_encode(const std::vector<std::uint8_t>& data) {
    std::string out(b64::encoded_size(data.size()), '\0');
    out.resize(b64::encode(out.data(), data.data(), data.size()));
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    if (text.size() % 4 != 0) fail(ProtocolError::Kind::BadValue, "data: bad base64 length");
    std::vector<std::uint8_t> out(b64::decoded_size(text.size()));
    const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
    std::size_t padding = 0;
    while (padding < 2 && padding < text.size() && text[text.size() - 1 - padding] == '=') {
        ++padding;
    }
    if (read + padding != text.size()) fail(ProtocolError::Kind::BadValue, "data: bad base64");
    out.resize(written);
    return out;
}

ordered_json header(const char* type, TimeMs t, const std::string& id) {
    ordered_json j;
    j["type"] = type;
    j["t"] = t;
    j["id"] = id;
    return j;
}

struct BodyEncoder {
    const std::string& id;

    ordered_json operator()(const Hello& m) const {
        ordered_json j;
        j["type"] = "hello";
        j["id"] = id;
        j["role"] = to_string(m.role);
        j["model"] = m.model;
        return j;
    }
    ordered_json operator()(const Heartbeat& m) const { return header("hb", m.t, id); }
    ordered_json operator()(const PoseMsg& m) const {
        ordered_json j = header("pose", m.t, id);
        j["head"] = pose_to_json(m.head);
        if (m.left) j["left"] = hand_to_json(*m.left);
        if (m.right) j["right"] = hand_to_json(*m.right);
        return j;
    }
    ordered_json operator()(const MetricsMsg& m) const {
        ordered_json j = header("metrics", m.t, id);
        j["metrics"] = metrics_to_json(m.metrics);
        return j;
    }
    ordered_json operator()(const EventMsg& m) const {
        ordered_json j = header("event", m.t, id);
        j["kind"] = to_string(m.kind);
        if (m.station) j["station"] = *m.station;
        return j;
    }
    ordered_json operator()(const ViewFrame& m) const {
        ordered_json j = header("view", m.t, id);
        j["w"] = m.w;
        j["h"] = m.h;
        j["fmt"] = to_string(m.fmt);
        j["data"] = base64_encode(m.data);
        return j;
    }
};

ClientBody decode_body(const std::string& type, const json& obj) {
    if (type == "hello") {
        auto role = parse_role(string_field(obj, "role"));
        if (!role) fail(ProtocolError::Kind::BadValue, "role");
        return Hello{*role, string_field(obj, "model")};
    }
    const TimeMs t = unsigned_int(require(obj, "t"), "t");
    if (type == "hb") return Heartbeat{t};
    if (type == "pose") {
        PoseMsg m{t, pose_from_json(require(obj, "head")), std::nullopt, std::nullopt};
        if (auto it = obj.find("left"); it != obj.end()) m.left = hand_from_json(*it);
        if (auto it = obj.find("right"); it != obj.end()) m.right = hand_from_json(*it);
        return m;
    }
    if (type == "metrics") return MetricsMsg{t, metrics_from_json(require(obj, "metrics"))};
    if (type == "event") {
        auto kind = parse_event_kind(string_field(obj, "kind"));
        if (!kind) fail(ProtocolError::Kind::BadValue, "kind");
        EventMsg m{t, *kind, std::nullopt};
        if (obj.contains("station")) m.station = string_field(obj, "station");
        if (m.kind == EventKind::Calibration && (!m.station || m.station->empty())) {
            fail(ProtocolError::Kind::MissingField, "station");
        }
        return m;
    }
    if (type == "view") {
        const std::uint64_t w = unsigned_int(require(obj, "w"), "w");
        const std::uint64_t h = unsigned_int(require(obj, "h"), "h");
        if (w > 8192 || h > 8192) fail(ProtocolError::Kind::BadValue, "w/h");
        auto fmt = parse_frame_format(string_field(obj, "fmt"));
        if (!fmt) fail(ProtocolError::Kind::BadValue, "fmt");
        ViewFrame m{t, static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h), *fmt,
                    base64_decode(string_field(obj, "data"))};
        if (m.fmt == FrameFormat::Rgb8 && w * h * 3 != m.data.size()) {
            fail(ProtocolError::Kind::BadValue, "data: length does not match w*h*3");
        }
        return m;
    }
    fail(ProtocolError::Kind::UnknownType, type);
}

}  // namespace

const char* to_string(ProtocolError::Kind k) {
    switch (k) {
        case ProtocolError::Kind::UnknownType: return "UnknownType";
        case ProtocolError::Kind::MissingField: return "MissingField";
        case ProtocolError::Kind::BadValue: return "BadValue";
        case ProtocolError::Kind::OversizeFrame: return "OversizeFrame";
    }
    return "BadValue";
}

ordered_json vec_to_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

ordered_json quat_to_json(const Quat& q) { return ordered_json::array({q.x, q.y, q.z, q.w}); }

ordered_json pose_to_json(const Pose& p) {
    ordered_json j;
    j["p"] = vec_to_json(p.position);
    j["q"] = quat_to_json(p.orientation);
    return j;
}

ordered_json metrics_to_json(const DeviceMetrics& m) {
    ordered_json j;
    j["fps"] = m.fps;
    j["battery"] = m.battery;
    j["cpu"] = m.cpu;
    j["gpu"] = m.gpu;
    j["net_in_bps"] = m.net_in_bps;
    j["net_out_bps"] = m.net_out_bps;
    j["latency_ms"] = m.latency_ms;
    return j;
}

ordered_json hand_to_json(const HandFrame& h) {
    ordered_json j;
    j["tracked"] = h.tracked;
    ordered_json joints = ordered_json::array();
    for (const Pose& p : h.joints) joints.push_back(pose_to_json(p));
    j["joints"] = std::move(joints);
    return j;
}

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) fail(ProtocolError::Kind::BadValue, "vec3: need [x,y,z]");
    return {number(j[0], "vec3"), number(j[1], "vec3"), number(j[2], "vec3")};
}

Quat quat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) fail(ProtocolError::Kind::BadValue, "quat: need [x,y,z,w]");
    const Quat q{number(j[0], "quat"), number(j[1], "quat"), number(j[2], "quat"),
                 number(j[3], "quat")};
    if (!q.is_unit()) fail(ProtocolError::Kind::BadValue, "quat: not unit norm");
    return q;
}

Pose pose_from_json(const json& j) {
    if (!j.is_object()) fail(ProtocolError::Kind::BadValue, "pose: not an object");
    return {vec_from_json(require(j, "p")), quat_from_json(require(j, "q"))};
}

DeviceMetrics metrics_from_json(const json& j) {
    if (!j.is_object()) fail(ProtocolError::Kind::BadValue, "metrics: not an object");
    DeviceMetrics m;
    m.fps = number(require(j, "fps"), "fps");
    m.battery = number(require(j, "battery"), "battery");
    m.cpu = number(require(j, "cpu"), "cpu");
    m.gpu = number(require(j, "gpu"), "gpu");
    m.net_in_bps = number(require(j, "net_in_bps"), "net_in_bps");
    m.net_out_bps = number(require(j, "net_out_bps"), "net_out_bps");
    m.latency_ms = number(require(j, "latency_ms"), "latency_ms");
    if (!m.valid()) fail(ProtocolError::Kind::BadValue, "metrics: out of range");
    return m;
}

HandFrame hand_from_json(const json& j) {
    if (!j.is_object()) fail(ProtocolError::Kind::BadValue, "hand: not an object");
    const json& tracked = require(j, "tracked");
    if (!tracked.is_boolean()) fail(ProtocolError::Kind::BadValue, "tracked: not a boolean");
    const json& joints = require(j, "joints");
    if (!joints.is_array()) fail(ProtocolError::Kind::BadValue, "joints: not an array");
    HandFrame h{tracked.get<bool>(), {}};
    h.joints.reserve(joints.size());
    for (const json& p : joints) h.joints.push_back(pose_from_json(p));
    if (!h.valid()) fail(ProtocolError::Kind::BadValue, "joints: wrong count for tracking state");
    return h;
}

std::string encode(const ClientMessage& msg) {
    std::string line = std::visit(BodyEncoder{msg.id}, msg.body).dump();
    line.push_back('\n');
    return line;
}

DecodeResult decode(std::string_view line) {
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() > kMaxFrameBytes) {
        return ProtocolError{ProtocolError::Kind::OversizeFrame, "frame exceeds 1 MiB"};
    }
    const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) return ProtocolError{ProtocolError::Kind::BadValue, "malformed JSON"};
    if (!obj.is_object()) return ProtocolError{ProtocolError::Kind::BadValue, "not a JSON object"};
    try {
        const std::string type = string_field(obj, "type");
        const std::string& id = string_field(obj, "id");
        if (id.empty()) fail(ProtocolError::Kind::BadValue, "id: empty");
        return ClientMessage{id, decode_body(type, obj)};
    } catch (const ProtocolErrorException& e) {
        return e.error;
    } catch (const json::exception& e) {
        return ProtocolError{ProtocolError::Kind::BadValue, e.what()};
    }
}

}  // namespace mrhost::protocol
