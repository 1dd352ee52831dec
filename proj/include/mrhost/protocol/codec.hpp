#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "mrhost/protocol/messages.hpp"

namespace mrhost::protocol {

// Lines longer than this are rejected without being parsed.
inline constexpr std::size_t kMaxFrameBytes = 1024 * 1024;

struct ProtocolError {
    enum class Kind { UnknownType, MissingField, BadValue, OversizeFrame };
    Kind kind;
    std::string detail;
};

const char* to_string(ProtocolError::Kind k);

using DecodeResult = std::variant<ClientMessage, ProtocolError>;

// One JSON object on one line, terminated by '\n'.
std::string encode(const ClientMessage& msg);

// Accepts a line with or without its trailing newline.
DecodeResult decode(std::string_view line);

// JSON helpers shared with the control and snapshot codecs.
nlohmann::ordered_json vec_to_json(const Vec3& v);
nlohmann::ordered_json quat_to_json(const Quat& q);
nlohmann::ordered_json pose_to_json(const Pose& p);
nlohmann::ordered_json metrics_to_json(const DeviceMetrics& m);
nlohmann::ordered_json hand_to_json(const HandFrame& h);

// Throw ProtocolErrorException on shape or range violations.
Vec3 vec_from_json(const nlohmann::json& j);
Quat quat_from_json(const nlohmann::json& j);
Pose pose_from_json(const nlohmann::json& j);
DeviceMetrics metrics_from_json(const nlohmann::json& j);
HandFrame hand_from_json(const nlohmann::json& j);

struct ProtocolErrorException {
    ProtocolError error;
};

}  // namespace mrhost::protocol
