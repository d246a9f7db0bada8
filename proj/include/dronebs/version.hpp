#pragma once

namespace dronebs {
inline constexpr const char* kVersion = "0.1.0";
}
