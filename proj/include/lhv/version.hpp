#pragma once

#include <string_view>

namespace lhv {

inline constexpr std::string_view version = "0.1.0";
inline constexpr std::string_view tool_name = "lhvsim";

} // namespace lhv
