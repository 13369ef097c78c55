#ifndef STARGL_MANIFEST_HPP_
#define STARGL_MANIFEST_HPP_

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stargl/config.hpp"
#include "stargl/types.hpp"

namespace stargl {

inline constexpr const char* kToolVersion = "stargl 1.0.0";

// Written atomically before any result file. The manifest id is a pure
// function of (command, config hash, seed, outputs), so artifacts can
// reference it and still be byte-identical across reruns; wall-clock
// timestamps live only inside the manifest itself.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;
  std::string timestamp;

  std::string id() const {
    std::uint64_t h = fnv1a(command.data(), command.size());
    h = fnv1a(config_hash.data(), config_hash.size(), h);
    h = fnv1a(&seed, sizeof(seed), h);
    for (const std::string& o : outputs) h = fnv1a(o.data(), o.size(), h);
    return hash_hex(h);
  }

  std::string filename() const { return "manifest-" + id() + ".json"; }
};

inline std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline std::string write_manifest(RunManifest manifest, const std::string& out_dir) {
  manifest.timestamp = iso_timestamp_now();
  nlohmann::json j = {
      {"command", manifest.command}, {"config_hash", manifest.config_hash},
      {"seed", manifest.seed},       {"outputs", manifest.outputs},
      {"tool_version", manifest.tool_version}, {"timestamp", manifest.timestamp},
  };
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + manifest.filename();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw DataError("manifest: cannot write '" + tmp + "'");
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
  return path;
}

}  // namespace stargl

#endif  // STARGL_MANIFEST_HPP_
