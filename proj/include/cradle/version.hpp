#pragma once

namespace cradle {

inline constexpr const char* tool_name = "cradle";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace cradle
