#include "mrhost/protocol/control.hpp"

#include "mrhost/viz/config.hpp"

namespace mrhost::protocol {

using nlohmann::json;
using nlohmann::ordered_json;

std::string encode_control(const ControlMessage& msg) {
    ordered_json j;
    if (const auto* m = std::get_if<SetVizConfig>(&msg)) {
        j["type"] = "set_viz_config";
        j["patch"] = m->patch;
    } else if (const auto* m = std::get_if<RequestHistory>(&msg)) {
        j["type"] = "request_history";
        j["visitor"] = m->visitor_id;
        j["up_to_t"] = m->up_to_t;
    } else if (const auto* m = std::get_if<SetHostPose>(&msg)) {
        j["type"] = "set_host_pose";
        j["pose"] = pose_to_json(m->pose);
    }
    return j.dump();
}

ControlDecodeResult decode_control(std::string_view text) {
    if (text.size() > kMaxFrameBytes) {
        return ProtocolError{ProtocolError::Kind::OversizeFrame, "frame exceeds 1 MiB"};
    }
    const json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        return ProtocolError{ProtocolError::Kind::BadValue, "malformed JSON object"};
    }
    auto type_it = obj.find("type");
    if (type_it == obj.end()) return ProtocolError{ProtocolError::Kind::MissingField, "type"};
    if (!type_it->is_string()) return ProtocolError{ProtocolError::Kind::BadValue, "type"};
    const std::string& type = type_it->get_ref<const std::string&>();

    try {
        if (type == "set_viz_config") {
            auto it = obj.find("patch");
            if (it == obj.end()) return ProtocolError{ProtocolError::Kind::MissingField, "patch"};
            try {
                (void)viz::merge_patch(viz::VizConfig{}, *it);
            } catch (const ConfigError& e) {
                return ProtocolError{ProtocolError::Kind::BadValue, e.what()};
            }
            return ControlMessage{SetVizConfig{*it}};
        }
        if (type == "request_history") {
            auto it = obj.find("visitor");
            if (it == obj.end()) return ProtocolError{ProtocolError::Kind::MissingField, "visitor"};
            if (!it->is_string()) return ProtocolError{ProtocolError::Kind::BadValue, "visitor"};
            RequestHistory m{it->get<std::string>()};
            if (auto t = obj.find("up_to_t"); t != obj.end() && !t->is_null()) {
                if (!t->is_number_unsigned()) {
                    return ProtocolError{ProtocolError::Kind::BadValue, "up_to_t"};
                }
                m.up_to_t = t->get<TimeMs>();
            }
            return ControlMessage{m};
        }
        if (type == "set_host_pose") {
            auto it = obj.find("pose");
            if (it == obj.end()) return ProtocolError{ProtocolError::Kind::MissingField, "pose"};
            return ControlMessage{SetHostPose{pose_from_json(*it)}};
        }
    } catch (const ProtocolErrorException& e) {
        return e.error;
    }
    return ProtocolError{ProtocolError::Kind::UnknownType, type};
}

}  // namespace mrhost::protocol
