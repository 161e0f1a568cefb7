#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace modechoice {

enum class TravelMode : int { Walking = 0, Cycling = 1, Car = 2, PublicTransport = 3 };

inline constexpr int kNumModes = 4;

inline constexpr std::array<TravelMode, kNumModes> kAllModes = {
    TravelMode::Walking, TravelMode::Cycling, TravelMode::Car, TravelMode::PublicTransport};

// Wire names used in CSV files: walking | cycling | car | public_transport.
std::string_view to_string(TravelMode mode);
std::optional<TravelMode> parse_mode(std::string_view text);

constexpr int mode_index(TravelMode mode) { return static_cast<int>(mode); }

}  // namespace modechoice
