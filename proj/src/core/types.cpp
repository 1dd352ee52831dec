#include "mrhost/core/types.hpp"

#include <cmath>

namespace mrhost {

namespace {
bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }
}  // namespace

bool DeviceMetrics::valid() const {
    return non_negative(fps) && in_unit(battery) && in_unit(cpu) && in_unit(gpu) &&
           non_negative(net_in_bps) && non_negative(net_out_bps) && non_negative(latency_ms);
}

}  // namespace mrhost
