#pragma once

namespace gcon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gcon
