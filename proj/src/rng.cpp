#include "modechoice/rng.hpp"

namespace modechoice {

std::mt19937_64 make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  return std::mt19937_64(derive_seed(base, path));
}

}  // namespace modechoice
