#include "pinchloc/config_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "pinchloc/csv_io.hpp"

namespace pinchloc {

namespace {

std::string where(const std::string& source, std::size_t line, const std::string& key) {
  return source + ":" + std::to_string(line) + ": key '" + key + "': ";
}

std::uint64_t parse_unsigned(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("expected a non-negative integer, got '" + text + "'");
  }
  return std::stoull(text);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

std::vector<EstimatorKind> parse_estimator_list(const std::string& text) {
  std::vector<EstimatorKind> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_estimator(item));
  if (out.empty()) throw std::invalid_argument("empty estimator list");
  return out;
}

// Runs `apply` on the key's value if present, wrapping failures with location.
template <class F>
void with_key(const std::map<std::string, KeyValue>& kv, const std::string& source, const std::string& key, F&& apply) {
  const auto it = kv.find(key);
  if (it == kv.end()) return;
  try {
    apply(it->second.value);
  } catch (const ConfigError& e) {
    throw ConfigError(where(source, it->second.line, key) + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(where(source, it->second.line, key) + e.what());
  }
}

void reject_unknown(const std::map<std::string, KeyValue>& kv, const std::string& source,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, entry] : kv) {
    bool found = false;
    for (auto k : known) found = found || k == key;
    if (!found) throw ConfigError(source + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
  }
}

}  // namespace

std::map<std::string, KeyValue> parse_key_values(std::string_view text, const std::string& source) {
  std::map<std::string, KeyValue> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    if (value.empty()) throw ConfigError(where(source, line_no, key) + "empty value");
    if (out.contains(key)) {
      throw ConfigError(where(source, line_no, key) + "duplicate (first set on line " +
                        std::to_string(out[key].line) + ")");
    }
    out.emplace(key, KeyValue{value, line_no});
  }
  return out;
}

ConfigFile parse_config_text(std::string_view text, const std::string& source) {
  ConfigFile cfg;
  cfg.source = source;
  cfg.entries = parse_key_values(text, source);
  const auto& kv = cfg.entries;
  reject_unknown(kv, source,
                 {"carrier_frequency_hz", "transmit_power_w", "pilot_phase_rad", "relative_permittivity",
                  "loss_tangent", "waveguide_height_m", "area_x_m", "area_y_m", "waveguide_length_m", "channel_gain",
                  "antenna_positions_m", "num_antennas", "noise_dbm", "noise_variance_w", "grid_spacing_m",
                  "grid_spacing_wavelengths",
                  "num_candidates", "min_separation_m", "lm_max_iterations", "lm_step_tolerance_m"});

  auto number = [&](const char* key, double& field) {
    with_key(kv, source, key, [&](const std::string& v) { field = parse_double(v); });
  };
  SystemParams& p = cfg.params;
  number("carrier_frequency_hz", p.carrier_frequency_hz);
  number("transmit_power_w", p.transmit_power_w);
  number("pilot_phase_rad", p.pilot_phase_rad);
  number("relative_permittivity", p.relative_permittivity);
  number("loss_tangent", p.loss_tangent);
  number("waveguide_height_m", p.waveguide_height_m);
  number("area_x_m", p.area_x_m);
  number("area_y_m", p.area_y_m);
  number("waveguide_length_m", p.waveguide_length_m);
  number("channel_gain", p.channel_gain);

  with_key(kv, source, "antenna_positions_m", [&](const std::string& v) {
    p.antenna_positions_m = parse_double_list(v);
    cfg.explicit_antennas = true;
  });
  with_key(kv, source, "num_antennas", [&](const std::string& v) {
    const auto n = parse_unsigned(v);
    if (n < 1) throw ConfigError("must be at least 1");
    cfg.num_antennas = n;
  });
  if (cfg.explicit_antennas && cfg.num_antennas) {
    throw ConfigError(where(source, kv.at("num_antennas").line, "num_antennas") +
                      "conflicts with antenna_positions_m; give one or the other");
  }

  with_key(kv, source, "noise_dbm", [&](const std::string& v) { cfg.noise_dbm = parse_double(v); });
  with_key(kv, source, "noise_variance_w", [&](const std::string& v) { cfg.noise_variance_w = parse_double(v); });
  if (cfg.noise_dbm && cfg.noise_variance_w) {
    throw ConfigError(where(source, kv.at("noise_variance_w").line, "noise_variance_w") +
                      "conflicts with noise_dbm; supply the noise level once");
  }

  with_key(kv, source, "grid_spacing_m", [&](const std::string& v) { cfg.grid.spacing_m = parse_double(v); });
  with_key(kv, source, "grid_spacing_wavelengths", [&](const std::string& v) {
    if (cfg.grid.spacing_m) throw ConfigError("conflicts with grid_spacing_m; give one or the other");
    cfg.grid.spacing_m = parse_double(v) * kSpeedOfLight / p.carrier_frequency_hz;
  });
  with_key(kv, source, "num_candidates", [&](const std::string& v) { cfg.grid.num_candidates = parse_unsigned(v); });
  with_key(kv, source, "min_separation_m", [&](const std::string& v) { cfg.grid.min_separation_m = parse_double(v); });
  with_key(kv, source, "lm_max_iterations", [&](const std::string& v) { cfg.lm.max_iterations = parse_unsigned(v); });
  with_key(kv, source, "lm_step_tolerance_m", [&](const std::string& v) { cfg.lm.step_tolerance_m = parse_double(v); });
  try {
    cfg.grid.validate();
    cfg.lm.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path), path.string());
}

SystemConfig resolve_config(const ConfigFile& file, std::optional<std::size_t> n_pas_override,
                            std::optional<double> noise_dbm_override, bool require_noise, std::size_t fallback_n_pas) {
  SystemParams p = file.params;
  const auto& kv = file.entries;

  if (noise_dbm_override && file.noise_variance_w) {
    throw ConfigError(where(file.source, kv.at("noise_variance_w").line, "noise_variance_w") +
                      "conflicts with --noise-dbm; supply the noise level once");
  }
  if (noise_dbm_override) {
    p.noise_variance_w = dbm_to_watts(*noise_dbm_override);
  } else if (file.noise_dbm) {
    p.noise_variance_w = dbm_to_watts(*file.noise_dbm);
  } else if (file.noise_variance_w) {
    p.noise_variance_w = *file.noise_variance_w;
  } else if (require_noise) {
    throw ConfigError(file.source + ": no noise level given (use noise_dbm, noise_variance_w or --noise-dbm)");
  }

  if (file.explicit_antennas) {
    if (n_pas_override && *n_pas_override != p.antenna_positions_m.size()) {
      throw ConfigError(where(file.source, kv.at("antenna_positions_m").line, "antenna_positions_m") + "lists " +
                        std::to_string(p.antenna_positions_m.size()) + " antennas but --n-pas asks for " +
                        std::to_string(*n_pas_override));
    }
  } else {
    const std::size_t n = n_pas_override.value_or(file.num_antennas.value_or(fallback_n_pas));
    if (n < 1) throw ConfigError("antenna count must be at least 1");
    p.antenna_positions_m = uniform_antenna_positions(n, p.waveguide_length_m);
  }

  try {
    return SystemConfig::create(p);
  } catch (const ConfigError& e) {
    // Point at the line responsible when the failing quantity came from the file.
    const std::string msg = e.what();
    for (const auto& [key, entry] : kv) {
      if (msg.rfind(key, 0) == 0 || (key == "antenna_positions_m" && msg.rfind("antenna ", 0) == 0)) {
        throw ConfigError(where(file.source, entry.line, key) + msg);
      }
    }
    throw ConfigError(file.source + ": " + msg);
  }
}

SystemConfig parse_config(const std::filesystem::path& path, bool require_noise) {
  return resolve_config(parse_config_file(path), std::nullopt, std::nullopt, require_noise);
}

std::string canonical_config_text(const SystemConfig& cfg) {
  const SystemParams& p = cfg.params();
  std::string positions;
  for (std::size_t n = 0; n < p.antenna_positions_m.size(); ++n) {
    if (n) positions += ',';
    positions += format_double(p.antenna_positions_m[n]);
  }
  // Keys in lexicographic order.
  std::ostringstream os;
  os << "antenna_positions_m = " << positions << '\n'
     << "area_x_m = " << format_double(p.area_x_m) << '\n'
     << "area_y_m = " << format_double(p.area_y_m) << '\n'
     << "carrier_frequency_hz = " << format_double(p.carrier_frequency_hz) << '\n'
     << "channel_gain = " << format_double(p.channel_gain) << '\n'
     << "loss_tangent = " << format_double(p.loss_tangent) << '\n'
     << "noise_variance_w = " << format_double(p.noise_variance_w) << '\n'
     << "pilot_phase_rad = " << format_double(p.pilot_phase_rad) << '\n'
     << "relative_permittivity = " << format_double(p.relative_permittivity) << '\n'
     << "transmit_power_w = " << format_double(p.transmit_power_w) << '\n'
     << "waveguide_height_m = " << format_double(p.waveguide_height_m) << '\n'
     << "waveguide_length_m = " << format_double(p.waveguide_length_m) << '\n';
  return os.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string config_hash(const SystemConfig& cfg) { return sha256_hex(canonical_config_text(cfg)); }

namespace {

std::optional<std::filesystem::path> config_path(const std::map<std::string, KeyValue>& kv,
                                                 const std::filesystem::path& spec_path) {
  const auto it = kv.find("config");
  if (it == kv.end()) return std::nullopt;
  std::filesystem::path p = it->second.value;
  if (p.is_relative()) p = spec_path.parent_path() / p;
  return p;
}

}  // namespace

void SearchOverrides::apply(GridSearchConfig& grid, const SystemConfig& cfg) const {
  if (grid_spacing_wavelengths) grid.spacing_m = *grid_spacing_wavelengths * cfg.wavelength_m();
  if (num_candidates) grid.num_candidates = *num_candidates;
  if (min_separation_m) grid.min_separation_m = *min_separation_m;
  grid.validate();
}

namespace {

void parse_search_overrides(const std::map<std::string, KeyValue>& kv, const std::string& source, SearchOverrides& out) {
  with_key(kv, source, "search_grid_spacing_wavelengths", [&](const std::string& v) {
    out.grid_spacing_wavelengths = parse_double(v);
    if (!(*out.grid_spacing_wavelengths > 0.0)) throw std::invalid_argument("must be positive");
  });
  with_key(kv, source, "search_num_candidates", [&](const std::string& v) {
    out.num_candidates = parse_unsigned(v);
    if (*out.num_candidates < 1) throw std::invalid_argument("must be at least 1");
  });
  with_key(kv, source, "search_min_separation_m", [&](const std::string& v) {
    out.min_separation_m = parse_double(v);
    if (!(*out.min_separation_m >= 0.0)) throw std::invalid_argument("must be non-negative");
  });
}

}  // namespace

SweepSpecFile parse_sweep_spec(const std::filesystem::path& path) {
  const std::string source = path.string();
  const auto kv = parse_key_values(read_text_file(path), source);
  reject_unknown(kv, source,
                 {"config", "noise_dbm_list", "pa_counts", "trials", "truth", "master_seed", "estimators",
                  "search_grid_spacing_wavelengths", "search_num_candidates", "search_min_separation_m"});
  SweepSpecFile out;
  out.config = config_path(kv, path);
  with_key(kv, source, "noise_dbm_list", [&](const std::string& v) { out.spec.noise_dbm_list = parse_double_list(v); });
  with_key(kv, source, "pa_counts", [&](const std::string& v) {
    out.spec.pa_counts.clear();
    for (const auto& item : split(v, ',')) out.spec.pa_counts.push_back(parse_unsigned(item));
  });
  with_key(kv, source, "trials", [&](const std::string& v) { out.spec.trials = parse_unsigned(v); });
  with_key(kv, source, "master_seed", [&](const std::string& v) { out.spec.master_seed = parse_unsigned(v); });
  with_key(kv, source, "truth", [&](const std::string& v) {
    if (v == "uniform") {
      out.spec.truth.fixed.reset();
      return;
    }
    const auto xy = parse_double_list(v);
    if (xy.size() != 2) throw std::invalid_argument("expected 'uniform' or 'x,y'");
    out.spec.truth.fixed = Position{xy[0], xy[1]};
  });
  with_key(kv, source, "estimators", [&](const std::string& v) { out.estimators = parse_estimator_list(v); });
  parse_search_overrides(kv, source, out.search);
  try {
    out.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return out;
}

MapSpecFile parse_map_spec(const std::filesystem::path& path) {
  const std::string source = path.string();
  const auto kv = parse_key_values(read_text_file(path), source);
  reject_unknown(kv, source,
                 {"config", "grid_spacing_m", "trials_per_point", "noise_dbm", "n_pas", "master_seed", "estimators",
                  "search_grid_spacing_wavelengths", "search_num_candidates", "search_min_separation_m"});
  MapSpecFile out;
  out.config = config_path(kv, path);
  with_key(kv, source, "grid_spacing_m", [&](const std::string& v) { out.spec.grid_spacing_m = parse_double(v); });
  with_key(kv, source, "trials_per_point", [&](const std::string& v) { out.spec.trials_per_point = parse_unsigned(v); });
  with_key(kv, source, "noise_dbm", [&](const std::string& v) { out.spec.noise_dbm = parse_double(v); });
  with_key(kv, source, "n_pas", [&](const std::string& v) { out.spec.n_pas = parse_unsigned(v); });
  with_key(kv, source, "master_seed", [&](const std::string& v) { out.spec.master_seed = parse_unsigned(v); });
  with_key(kv, source, "estimators", [&](const std::string& v) { out.estimators = parse_estimator_list(v); });
  parse_search_overrides(kv, source, out.search);
  try {
    out.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return out;
}

}  // namespace pinchloc
