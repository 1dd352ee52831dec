#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "mrhost/protocol/codec.hpp"

namespace mrhost::protocol {

// Splits an arbitrary byte stream into newline-terminated frames. A frame
// that grows past the cap is reported once as OversizeFrame and the rest of
// it is discarded up to the next newline, so one bad line never
// desynchronizes the stream.
class LineFramer {
public:
    using Sink = std::function<void(DecodeResult)>;

    explicit LineFramer(std::size_t max_frame = kMaxFrameBytes) : max_frame_(max_frame) {}

    void feed(std::string_view bytes, const Sink& sink);
    std::size_t buffered() const { return buffer_.size(); }

private:
    std::size_t max_frame_;
    std::string buffer_;
    bool discarding_ = false;
};

}  // namespace mrhost::protocol
