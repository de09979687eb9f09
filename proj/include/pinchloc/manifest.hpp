#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinchloc/system_config.hpp"

namespace pinchloc {

/// Provenance record written next to every artifact as `<artifact>.manifest.json`.
/// Timestamps live only here, never in data files.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string config_hash;
  std::string config_canonical;
  nlohmann::json spec_echo = nlohmann::json::object();
  std::string tool_version = PINCHLOC_VERSION;
  std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
  std::chrono::system_clock::time_point finished;

  struct Artifact {
    std::string path;
    std::string sha256;
  };
  std::vector<Artifact> artifacts;

  void set_config(const SystemConfig& cfg);
  void add_artifact(const std::filesystem::path& path, std::string_view contents);
  nlohmann::json to_json() const;
  /// Stamps `finished` and writes the manifest.
  void write(const std::filesystem::path& path);
};

/// Derived physical quantities worth echoing (wavelength, alpha, beta, sigma^2).
nlohmann::json derived_quantities(const SystemConfig& cfg);

}  // namespace pinchloc
