#pragma once

namespace mmc {

inline constexpr const char* kToolName = "mmc";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace mmc
