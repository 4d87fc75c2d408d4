#pragma once

namespace dikin {
inline constexpr const char* kVersion = "0.1.0";
}
