#include "modechoice/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "modechoice/hash.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/version.hpp"

namespace modechoice {

namespace {

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest make_manifest(const std::string& command, nlohmann::json config, std::uint64_t seed) {
  RunManifest manifest;
  manifest.command = command;
  manifest.config = std::move(config);
  manifest.seed = seed;
  return manifest;
}

void add_input(RunManifest& manifest, const std::string& label, const std::string& path) {
  manifest.inputs.push_back({label, to_hex(hash_file(path))});
}

void add_output(RunManifest& manifest, const std::string& label, const std::string& path) {
  manifest.outputs.push_back({label, to_hex(hash_file(path))});
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["rng_algorithm"] = kRngAlgorithm;
  j["hash_algorithm"] = "fnv1a64";
  j["seed"] = seed;
  j["created_utc"] = utc_now_iso8601();
  j["config"] = config;
  auto files = [](const std::vector<FileHash>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : list) arr.push_back({{"file", f.path}, {"fnv1a64", f.fnv1a64}});
    return arr;
  };
  j["inputs"] = files(inputs);
  j["outputs"] = files(outputs);
  return j.dump(2);
}

void write_manifest(const RunManifest& manifest, const std::string& dir) {
  const std::string path = dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << manifest.to_json();
}

}  // namespace modechoice
