#pragma once

namespace modechoice {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace modechoice
