#pragma once

namespace spherecon {

inline constexpr const char* kVersion = "0.1.0";

}
