#pragma once

namespace ltm {
inline constexpr const char* kVersion = "0.1.0";
}
