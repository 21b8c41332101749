#pragma once

#include <string_view>

namespace dpasim {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kResultsCsvSchema = "results-v1";

}  // namespace dpasim
