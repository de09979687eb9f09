#include "pinchloc/manifest.hpp"

#include <ctime>

#include "pinchloc/config_io.hpp"
#include "pinchloc/csv_io.hpp"
#include "pinchloc/parallel.hpp"
#include "pinchloc/residual_kernels.hpp"

namespace pinchloc {

namespace {

std::string iso_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json derived_quantities(const SystemConfig& cfg) {
  return {{"wavelength_m", cfg.wavelength_m()},
          {"alpha_np_per_m", cfg.alpha_np_per_m()},
          {"beta_rad_per_m", cfg.beta_rad_per_m()},
          {"noise_variance_w", cfg.noise_variance_w()},
          {"noise_dbm", watts_to_dbm(cfg.noise_variance_w())},
          {"antenna_positions_m", cfg.antenna_positions_m()}};
}

void RunManifest::set_config(const SystemConfig& cfg) {
  config_canonical = canonical_config_text(cfg);
  config_hash = sha256_hex(config_canonical);
  spec_echo["derived"] = derived_quantities(cfg);
}

void RunManifest::add_artifact(const std::filesystem::path& path, std::string_view contents) {
  artifacts.push_back({path.string(), sha256_hex(contents)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& a : artifacts) arts.push_back({{"path", a.path}, {"sha256", a.sha256}});
  return {{"command", command},
          {"argv", argv},
          {"config_hash", config_hash},
          {"config_canonical", config_canonical},
          {"spec_echo", spec_echo},
          {"tool_version", tool_version},
          {"simd_isa", std::string(isa_name(active_isa()))},
          {"threads", worker_count()},
          {"started_utc", iso_utc(started)},
          {"finished_utc", iso_utc(finished)},
          {"artifacts", arts}};
}

void RunManifest::write(const std::filesystem::path& path) {
  finished = std::chrono::system_clock::now();
  write_text_file(path, to_json().dump(2) + "\n");
}

}  // namespace pinchloc
