#include "mrhost/protocol/framer.hpp"

namespace mrhost::protocol {

void LineFramer::feed(std::string_view bytes, const Sink& sink) {
    while (!bytes.empty()) {
        const std::size_t nl = bytes.find('\n');
        const std::string_view chunk = bytes.substr(0, nl);

        if (discarding_) {
            if (nl == std::string_view::npos) return;
            discarding_ = false;
        } else if (buffer_.size() + chunk.size() > max_frame_) {
            buffer_.clear();
            sink(ProtocolError{ProtocolError::Kind::OversizeFrame, "frame exceeds 1 MiB"});
            if (nl == std::string_view::npos) {
                discarding_ = true;
                return;
            }
        } else {
            buffer_.append(chunk);
            if (nl == std::string_view::npos) return;
            if (!buffer_.empty()) sink(decode(buffer_));
            buffer_.clear();
        }
        bytes.remove_prefix(nl + 1);
    }
}

}  // namespace mrhost::protocol
