#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace modechoice {

// Reproducibility record written next to a command's outputs: what ran, with
// which configuration and seed, over which inputs (content-hashed), producing
// which outputs (content-hashed). Re-running the recorded command reproduces
// the outputs bit-identically; only the timestamp differs.
struct RunManifest {
  std::string command;
  nlohmann::json config;  // full flag/config snapshot
  std::uint64_t seed = 0;

  struct FileHash {
    std::string path;    // relative to the manifest's directory when possible
    std::string fnv1a64; // hex
  };
  std::vector<FileHash> inputs;
  std::vector<FileHash> outputs;

  std::string to_json() const;
};

RunManifest make_manifest(const std::string& command, nlohmann::json config, std::uint64_t seed);

void add_input(RunManifest& manifest, const std::string& label, const std::string& path);
void add_output(RunManifest& manifest, const std::string& label, const std::string& path);

// Writes <dir>/manifest.json; exactly one manifest per output directory.
void write_manifest(const RunManifest& manifest, const std::string& dir);

}  // namespace modechoice
