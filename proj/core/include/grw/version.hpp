#pragma once

namespace grw {

inline constexpr const char* kToolName = "grwverify";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace grw
