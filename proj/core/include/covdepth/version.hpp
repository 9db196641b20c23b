#pragma once

namespace covdepth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace covdepth
