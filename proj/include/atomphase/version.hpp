#pragma once

namespace atomphase {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace atomphase
