#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "mrhost/session/engine.hpp"

namespace mrhost::host {

nlohmann::ordered_json event_to_json(const session::SystemEvent& e);
nlohmann::ordered_json sample_to_json(const session::TraceSample& s);

// Session recording: one JSONL file of kept trajectory samples per visitor
// (<id>.jsonl) and events.jsonl. Lines are flushed as written.
class Recorder {
public:
    // Creates `dir` if needed; throws std::runtime_error if it cannot.
    explicit Recorder(std::filesystem::path dir);

    void sample(const std::string& visitor, const session::TraceSample& s);
    void event(const session::SystemEvent& e);

    // Wires the engine's observers to this recorder.
    void attach(session::SessionEngine& engine);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::ofstream& stream_for(const std::string& visitor);

    std::filesystem::path dir_;
    std::ofstream events_;
    std::map<std::string, std::ofstream> visitors_;
};

}  // namespace mrhost::host
