#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace discotk {

inline constexpr const char* kToolVersion = "0.1.0";

struct InputDigest {
  std::string name;    // file name without directories
  std::string sha256;  // lowercase hex
};

/// Written next to every output file as `<output>.manifest.json`. Holds no
/// timestamps or absolute paths, so identical runs give identical manifests.
struct RunManifest {
  std::string command;
  std::vector<InputDigest> inputs;
  nlohmann::json config = nlohmann::json::object();
  std::string version = kToolVersion;

  void add_input(const std::string& path);
  nlohmann::json to_json() const;
  void write_for(const std::string& output_path) const;
};

std::string sha256_file(const std::string& path);

}  // namespace discotk
