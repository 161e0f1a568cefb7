#include "modechoice/travel_mode.hpp"

namespace modechoice {

std::string_view to_string(TravelMode mode) {
  switch (mode) {
    case TravelMode::Walking: return "walking";
    case TravelMode::Cycling: return "cycling";
    case TravelMode::Car: return "car";
    case TravelMode::PublicTransport: return "public_transport";
  }
  return "unknown";
}

std::optional<TravelMode> parse_mode(std::string_view text) {
  for (TravelMode mode : kAllModes) {
    if (text == to_string(mode)) return mode;
  }
  return std::nullopt;
}

}  // namespace modechoice
