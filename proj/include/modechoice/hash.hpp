#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace modechoice {

// FNV-1a, 64-bit. Used for schema fingerprints and manifest content hashes.
constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value);

// FNV-1a over a whole file's bytes. Throws std::runtime_error if unreadable.
std::uint64_t hash_file(const std::string& path);

}  // namespace modechoice
