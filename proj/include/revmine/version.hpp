#pragma once

#include <string_view>

namespace revmine {

inline constexpr std::string_view kToolName = "revmine";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace revmine
