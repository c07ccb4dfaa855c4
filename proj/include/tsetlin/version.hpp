#pragma once

namespace tsetlin {

inline constexpr const char* kToolName = "tsetlin-lab";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace tsetlin
