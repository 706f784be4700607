#pragma once

namespace beran {

inline constexpr const char* version = "0.1.0";

} // namespace beran
