#include "mrhost/protocol/snapshot_codec.hpp"

#include <cmath>
#include <charconv>
#include <concepts>

#include "mrhost/protocol/codec.hpp"

namespace mrhost::protocol {

using nlohmann::ordered_json;
using namespace mrhost::viz;

namespace {

ordered_json vec(Vec3 v) { return ordered_json::array({fixed(v.x), fixed(v.y), fixed(v.z)}); }

ordered_json pose(const Pose& p) {
    const Quat& q = p.orientation;
    ordered_json j;
    j["p"] = vec(p.position);
    j["q"] = ordered_json::array({fixed(q.x), fixed(q.y), fixed(q.z), fixed(q.w)});
    return j;
}

ordered_json color(const Rgba& c) {
    return ordered_json::array({fixed(c.r), fixed(c.g), fixed(c.b), fixed(c.a)});
}

template <typename T, typename F>
ordered_json array_of(const std::vector<T>& xs, F f) {
    ordered_json a = ordered_json::array();
    for (const T& x : xs) a.push_back(f(x));
    return a;
}

ordered_json tagged(const char* kind) {
    ordered_json j;
    j["kind"] = kind;
    return j;
}

struct PrimitiveEncoder {
    ordered_json operator()(const Ribbon& r) const {
        ordered_json j = tagged("ribbon");
        j["points"] = array_of(r.points, vec);
        j["widths"] = array_of(r.widths, fixed);
        j["colors"] = array_of(r.colors, color);
        j["pattern"] = r.pattern == RibbonPattern::Arrowed ? "arrowed" : "plain";
        j["anim_speed"] = fixed(r.anim_speed);
        j["bidirectional"] = r.bidirectional;
        j["owner"] = r.owner;
        return j;
    }
    ordered_json operator()(const Panel& p) const {
        ordered_json j = tagged("panel");
        j["center"] = vec(p.center);
        j["normal"] = vec(p.normal);
        j["up"] = vec(p.up);
        j["size"] = ordered_json::array({fixed(p.size.first), fixed(p.size.second)});
        j["lines"] = p.lines;
        j["owner"] = p.owner;
        j["purpose"] = p.purpose == PanelPurpose::View ? "view" : "info";
        return j;
    }
    ordered_json operator()(const FrustumWire& f) const {
        ordered_json j = tagged("frustum");
        j["apex"] = pose(f.apex);
        j["fov_h"] = fixed(f.fov_h);
        j["fov_v"] = fixed(f.fov_v);
        j["depth"] = fixed(f.depth);
        j["color"] = color(f.color);
        if (f.face_texture_ref) j["face_texture_ref"] = *f.face_texture_ref;
        j["owner"] = f.owner;
        return j;
    }
    ordered_json operator()(const BoxWire& b) const {
        ordered_json j = tagged("box");
        j["center"] = vec(b.center);
        j["half_extents"] = vec(b.half_extents);
        j["color"] = color(b.color);
        j["owner"] = b.owner;
        return j;
    }
    ordered_json operator()(const Arrow& a) const {
        ordered_json j = tagged("arrow");
        j["position"] = vec(a.position);
        j["height"] = fixed(a.height);
        j["color"] = color(a.color);
        j["owner"] = a.owner;
        return j;
    }
    ordered_json operator()(const CircleSet& c) const {
        ordered_json j = tagged("circles");
        j["center"] = vec(c.center);
        j["radii"] = array_of(c.radii, fixed);
        j["colors"] = array_of(c.colors, color);
        j["station"] = c.station;
        return j;
    }
    ordered_json operator()(const SquareOutline& s) const {
        ordered_json j = tagged("square");
        j["center_xz"] = ordered_json::array({fixed(s.center_x), fixed(s.center_z)});
        j["y"] = fixed(s.y);
        j["side"] = fixed(s.side);
        j["color"] = color(s.color);
        return j;
    }
    ordered_json operator()(const Skeleton& s) const {
        ordered_json j = tagged("skeleton");
        j["joints"] = array_of(s.joints, pose);
        j["axis_len"] = fixed(s.axis_len);
        j["hand"] = s.hand == Hand::Left ? "left" : "right";
        j["owner"] = s.owner;
        return j;
    }
    ordered_json operator()(const HeadMarker& h) const {
        ordered_json j = tagged("head");
        j["pose"] = pose(h.pose);
        j["owner"] = h.owner;
        return j;
    }
    ordered_json operator()(const EventMarker& e) const {
        ordered_json j = tagged("event");
        j["position"] = vec(e.position);
        j["event_kind"] = e.kind == MarkerKind::Offline ? "offline" : "tracking_lost";
        j["age_s"] = fixed(e.age_s);
        j["owner"] = e.owner;
        return j;
    }
};

ordered_json visitor_json(const VisitorSummary& v) {
    ordered_json j;
    j["id"] = v.id;
    j["role"] = v.role;
    j["online"] = v.online;
    j["tracking"] = v.tracking;
    j["position"] = v.position ? vec(*v.position) : ordered_json(nullptr);
    j["fps"] = v.fps ? ordered_json(fixed(*v.fps)) : ordered_json(nullptr);
    j["battery"] = v.battery ? ordered_json(fixed(*v.battery)) : ordered_json(nullptr);
    j["color"] = color(v.color);
    j["last_t"] = v.last_t;
    ordered_json cal = ordered_json::object();
    for (const auto& [station, count] : v.calibrations) cal[station] = count;
    j["calibrations"] = std::move(cal);
    return j;
}

ordered_json diagnostics_json(const Diagnostics& d) {
    ordered_json j;
    j["tick"] = d.tick;
    j["connected"] = d.connected;
    j["stale_samples"] = d.stale_samples;
    j["decode_errors"] = d.decode_errors;
    j["unknown_visitor"] = d.unknown_visitor;
    j["max_ingest_lag_ms"] = fixed(d.max_ingest_lag_ms);
    return j;
}

void append_fixed(std::string& out, double v) {
    static const double scale = std::pow(10.0, kSnapshotDecimals);
    const double scaled = std::round(v * scale);
    if (!(std::abs(scaled) < 9e15)) {
        char buf[64];
        out.append(buf, nlohmann::detail::to_chars(buf, buf + sizeof buf, fixed(v)));
        return;
    }
    std::int64_t k = static_cast<std::int64_t>(scaled);
    if (k < 0) {
        out += '-';
        k = -k;
    }
    constexpr std::int64_t unit = 100000;
    static_assert(kSnapshotDecimals == 5);
    char buf[32];
    out.append(buf, std::to_chars(buf, buf + sizeof buf, k / unit).ptr);
    std::int64_t frac = k % unit;
    out += '.';
    if (frac == 0) {
        out += '0';
        return;
    }
    int digits = kSnapshotDecimals;
    while (frac % 10 == 0) {
        frac /= 10;
        --digits;
    }
    char f[8];
    for (int i = digits - 1; i >= 0; --i, frac /= 10) f[i] = static_cast<char>('0' + frac % 10);
    out.append(f, static_cast<std::size_t>(digits));
}

}  // namespace

double fixed(double v) {
    static const double scale = std::pow(10.0, kSnapshotDecimals);
    const double r = std::round(v * scale) / scale;
    return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

ordered_json primitive_to_json(const GeometryPrimitive& p) {
    return std::visit(PrimitiveEncoder{}, p);
}

ordered_json snapshot_to_json(const SceneSnapshot& snap) {
    ordered_json j;
    j["t"] = snap.t;
    j["visitors"] = array_of(snap.visitors, visitor_json);
    j["primitives"] = array_of(snap.primitives, primitive_to_json);
    if (snap.diagnostics) j["diagnostics"] = diagnostics_json(*snap.diagnostics);
    if (snap.config) j["config"] = *snap.config;
    return j;
}

namespace {

// Streams the same document snapshot_to_json(...) describes, without building
// the tree. Numbers are printed as plain decimals with at most five places.
class Writer {
public:
    std::string out;

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    Writer& key(const char* k) {
        separate();
        out += '"';
        out += k;
        out += "\":";
        after_key_ = true;
        return *this;
    }

    Writer& key(const std::string& k) {
        string(k);
        out += ':';
        after_key_ = true;
        return *this;
    }

    void number(double v) {
        separate();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        append_fixed(out, v);
    }
    template <std::integral T>
    void integer(T v) {
        separate();
        out += std::to_string(v);
    }
    void boolean(bool v) {
        separate();
        out += v ? "true" : "false";
    }
    void null() {
        separate();
        out += "null";
    }
    void string(const std::string& s) {
        separate();
        for (unsigned char c : s) {
            if (c < 0x20 || c >= 0x7f || c == '"' || c == '\\') {
                out += ordered_json(s).dump();
                return;
            }
        }
        out += '"';
        out += s;
        out += '"';
    }
    void raw(const std::string& s) {
        separate();
        out += s;
    }

    void vec(Vec3 v) {
        begin_array();
        number(v.x);
        number(v.y);
        number(v.z);
        end_array();
    }
    void quat(const Quat& q) {
        begin_array();
        number(q.x);
        number(q.y);
        number(q.z);
        number(q.w);
        end_array();
    }
    void pose(const Pose& p) {
        begin_object();
        key("p").vec(p.position);
        key("q").quat(p.orientation);
        end_object();
    }
    void color(const Rgba& c) {
        begin_array();
        number(c.r);
        number(c.g);
        number(c.b);
        number(c.a);
        end_array();
    }

private:
    std::vector<bool> first_;
    bool after_key_ = false;

    void separate() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (first_.empty()) return;
        if (!first_.back()) out += ',';
        first_.back() = false;
    }
    void open(char c) {
        separate();
        out += c;
        first_.push_back(true);
    }
    void close(char c) {
        first_.pop_back();
        out += c;
    }
};

struct PrimitiveWriter {
    Writer& w;

    void head(const char* kind) const {
        w.begin_object();
        w.key("kind").string(kind);
    }

    void operator()(const Ribbon& r) const {
        head("ribbon");
        w.key("points").begin_array();
        for (const Vec3& p : r.points) w.vec(p);
        w.end_array();
        w.key("widths").begin_array();
        for (double x : r.widths) w.number(x);
        w.end_array();
        w.key("colors").begin_array();
        for (const Rgba& c : r.colors) w.color(c);
        w.end_array();
        w.key("pattern").string(r.pattern == RibbonPattern::Arrowed ? "arrowed" : "plain");
        w.key("anim_speed").number(r.anim_speed);
        w.key("bidirectional").boolean(r.bidirectional);
        w.key("owner").string(r.owner);
        w.end_object();
    }
    void operator()(const Panel& p) const {
        head("panel");
        w.key("center").vec(p.center);
        w.key("normal").vec(p.normal);
        w.key("up").vec(p.up);
        w.key("size").begin_array();
        w.number(p.size.first);
        w.number(p.size.second);
        w.end_array();
        w.key("lines").begin_array();
        for (const std::string& l : p.lines) w.string(l);
        w.end_array();
        w.key("owner").string(p.owner);
        w.key("purpose").string(p.purpose == PanelPurpose::View ? "view" : "info");
        w.end_object();
    }
    void operator()(const FrustumWire& f) const {
        head("frustum");
        w.key("apex").pose(f.apex);
        w.key("fov_h").number(f.fov_h);
        w.key("fov_v").number(f.fov_v);
        w.key("depth").number(f.depth);
        w.key("color").color(f.color);
        if (f.face_texture_ref) w.key("face_texture_ref").string(*f.face_texture_ref);
        w.key("owner").string(f.owner);
        w.end_object();
    }
    void operator()(const BoxWire& b) const {
        head("box");
        w.key("center").vec(b.center);
        w.key("half_extents").vec(b.half_extents);
        w.key("color").color(b.color);
        w.key("owner").string(b.owner);
        w.end_object();
    }
    void operator()(const Arrow& a) const {
        head("arrow");
        w.key("position").vec(a.position);
        w.key("height").number(a.height);
        w.key("color").color(a.color);
        w.key("owner").string(a.owner);
        w.end_object();
    }
    void operator()(const CircleSet& c) const {
        head("circles");
        w.key("center").vec(c.center);
        w.key("radii").begin_array();
        for (double r : c.radii) w.number(r);
        w.end_array();
        w.key("colors").begin_array();
        for (const Rgba& x : c.colors) w.color(x);
        w.end_array();
        w.key("station").string(c.station);
        w.end_object();
    }
    void operator()(const SquareOutline& s) const {
        head("square");
        w.key("center_xz").begin_array();
        w.number(s.center_x);
        w.number(s.center_z);
        w.end_array();
        w.key("y").number(s.y);
        w.key("side").number(s.side);
        w.key("color").color(s.color);
        w.end_object();
    }
    void operator()(const Skeleton& s) const {
        head("skeleton");
        w.key("joints").begin_array();
        for (const Pose& p : s.joints) w.pose(p);
        w.end_array();
        w.key("axis_len").number(s.axis_len);
        w.key("hand").string(s.hand == Hand::Left ? "left" : "right");
        w.key("owner").string(s.owner);
        w.end_object();
    }
    void operator()(const HeadMarker& h) const {
        head("head");
        w.key("pose").pose(h.pose);
        w.key("owner").string(h.owner);
        w.end_object();
    }
    void operator()(const EventMarker& e) const {
        head("event");
        w.key("position").vec(e.position);
        w.key("event_kind").string(e.kind == MarkerKind::Offline ? "offline" : "tracking_lost");
        w.key("age_s").number(e.age_s);
        w.key("owner").string(e.owner);
        w.end_object();
    }
};

void write_visitor(Writer& w, const VisitorSummary& v) {
    w.begin_object();
    w.key("id").string(v.id);
    w.key("role").string(v.role);
    w.key("online").boolean(v.online);
    w.key("tracking").boolean(v.tracking);
    if (v.position) {
        w.key("position").vec(*v.position);
    } else {
        w.key("position").null();
    }
    if (v.fps) {
        w.key("fps").number(*v.fps);
    } else {
        w.key("fps").null();
    }
    if (v.battery) {
        w.key("battery").number(*v.battery);
    } else {
        w.key("battery").null();
    }
    w.key("color").color(v.color);
    w.key("last_t").integer(v.last_t);
    w.key("calibrations").begin_object();
    for (const auto& [station, count] : v.calibrations) {
        w.key(station).integer(count);
    }
    w.end_object();
    w.end_object();
}

}  // namespace

std::string encode_snapshot(const SceneSnapshot& snap) {
    Writer w;
    w.out.reserve(4096 + snap.primitives.size() * 512);
    w.begin_object();
    w.key("t").integer(snap.t);
    w.key("visitors").begin_array();
    for (const VisitorSummary& v : snap.visitors) write_visitor(w, v);
    w.end_array();
    w.key("primitives").begin_array();
    const PrimitiveWriter pw{w};
    for (const GeometryPrimitive& p : snap.primitives) std::visit(pw, p);
    w.end_array();
    if (snap.diagnostics) {
        const Diagnostics& d = *snap.diagnostics;
        w.key("diagnostics").begin_object();
        w.key("tick").integer(d.tick);
        w.key("connected").integer(d.connected);
        w.key("stale_samples").integer(d.stale_samples);
        w.key("decode_errors").integer(d.decode_errors);
        w.key("unknown_visitor").integer(d.unknown_visitor);
        w.key("max_ingest_lag_ms").number(d.max_ingest_lag_ms);
        w.end_object();
    }
    if (snap.config) w.key("config").raw(snap.config->dump());
    w.end_object();
    return std::move(w.out);
}

std::string encode_history(const std::string& visitor, TimeMs up_to_t,
                           std::span<const session::TraceSample> samples) {
    ordered_json j;
    j["type"] = "history";
    j["visitor"] = visitor;
    j["up_to_t"] = up_to_t;
    ordered_json arr = ordered_json::array();
    for (const session::TraceSample& s : samples) {
        ordered_json e;
        e["t"] = s.t;
        e["pose"] = pose(s.pose);
        e["fps"] = s.fps ? ordered_json(fixed(*s.fps)) : ordered_json(nullptr);
        arr.push_back(std::move(e));
    }
    j["samples"] = std::move(arr);
    return j.dump();
}

std::string encode_error(const std::string& message) {
    ordered_json j;
    j["type"] = "error";
    j["message"] = message;
    return j.dump();
}

}  // namespace mrhost::protocol
