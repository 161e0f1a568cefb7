#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace modechoice {

// Algorithm name recorded in manifests and result files for reproducibility.
inline constexpr const char* kRngAlgorithm = "mt19937_64(splitmix64-derived substreams)";

// SplitMix64 finalizer; bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent substream seed from a base seed and a key path,
// e.g. derive_seed(master, {kStreamTree, tree_index}). Streams derived from
// distinct paths are independent for any fixed base seed, which is what makes
// per-tree and per-repetition work schedulable in any order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  for (auto key : path) s = mix64(s ^ mix64(key));
  return s;
}

std::mt19937_64 make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// Stream purpose tags; part of the reproducibility contract.
enum : std::uint64_t {
  kStreamSynth = 1,
  kStreamTree = 2,
  kStreamRepetition = 3,
};

}  // namespace modechoice
