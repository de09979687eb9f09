// pinchloc: command-line front end for the pinching-antenna localization library.
//
//   pinchloc crlb     --u 2,4 --noise-dbm -40 [--config F] [--n-pas N] [--out F]
//   pinchloc peb-map  --noise-dbm -40 [--spacing 0.25] [--layout centred|corner] [--out F]
//   pinchloc gen      --u 2,4 --seed 7 --noise-dbm -40 [--out F]
//   pinchloc estimate --input obs.csv [--estimator ml|wls] [--out F]
//   pinchloc mc-sweep --spec noise_sweep.spec [--out F]
//   pinchloc mc-map   --spec error_map.spec [--out F]
//
// Without --config the built-in default deployment is used. With --out
// the data goes to the file and a manifest to <file>.manifest.json;
// otherwise data is printed to stdout. Thread count: PINCHLOC_THREADS.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pinchloc/config_io.hpp"
#include "pinchloc/csv_io.hpp"
#include "pinchloc/estimator.hpp"
#include "pinchloc/fisher.hpp"
#include "pinchloc/manifest.hpp"
#include "pinchloc/montecarlo.hpp"

namespace {

using namespace pinchloc;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::optional<double> noise_dbm;
  std::optional<std::size_t> n_pas;
  std::string out;
};

ConfigFile load_config(const std::string& path) {
  if (path.empty()) return ConfigFile{};
  return parse_config_file(path);
}

Position parse_position(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("expected a position as x,y, got '" + text + "'");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

json number_or_inf(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

// Writes `data` to --out (plus manifest) or to stdout.
void emit(const std::string& out, const std::string& data, RunManifest& manifest) {
  if (out.empty()) {
    std::cout << data;
    return;
  }
  write_text_file(out, data);
  manifest.add_artifact(out, data);
  manifest.write(out + ".manifest.json");
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_noise) {
  cmd->add_option("--config", opt.config_path, "Key-value configuration file")->check(CLI::ExistingFile);
  if (with_noise) cmd->add_option("--noise-dbm", opt.noise_dbm, "Noise power in dBm");
  cmd->add_option("--n-pas", opt.n_pas, "Number of uniformly placed antennas")->check(CLI::PositiveNumber);
  cmd->add_option("--out", opt.out, "Output file (stdout if omitted)");
}

int run_crlb(const CommonOptions& opt, const std::string& u_text, RunManifest& manifest) {
  const SystemConfig cfg = resolve_config(load_config(opt.config_path), opt.n_pas, opt.noise_dbm, true);
  const Position u = parse_position(u_text);
  const FisherSummary fs = crlb(cfg, u);
  manifest.set_config(cfg);
  manifest.spec_echo["u"] = {u.x, u.y};

  const json result = {
      {"u", {u.x, u.y}},
      {"fim", {{fs.fim.xx, fs.fim.xy}, {fs.fim.xy, fs.fim.yy}}},
      {"cov", fs.singular ? json(nullptr) : json({{fs.cov_bound.xx, fs.cov_bound.xy}, {fs.cov_bound.xy, fs.cov_bound.yy}})},
      {"var_x_bound_m2", number_or_inf(fs.var_x_bound)},
      {"var_y_bound_m2", number_or_inf(fs.var_y_bound)},
      {"peb_m", number_or_inf(fs.peb)},
      {"singular", fs.singular},
      {"config_hash", manifest.config_hash}};
  emit(opt.out, result.dump(2) + "\n", manifest);
  return 0;
}

int run_peb_map(const CommonOptions& opt, double spacing, const std::string& layout, const std::string& bounds_text,
                RunManifest& manifest) {
  const SystemConfig cfg = resolve_config(load_config(opt.config_path), opt.n_pas, opt.noise_dbm, true);
  Rect bounds = cfg.area();
  if (!bounds_text.empty()) {
    const auto parts = split(bounds_text, ',');
    if (parts.size() != 4) throw std::invalid_argument("--bounds expects x_min,x_max,y_min,y_max");
    bounds = {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]), parse_double(parts[3])};
    if (!(bounds.x_max >= bounds.x_min && bounds.y_max >= bounds.y_min)) throw std::invalid_argument("--bounds inverted");
  }
  if (!(spacing > 0.0)) throw std::invalid_argument("--spacing must be positive");
  GridSpec grid;
  if (layout == "centred") {
    grid = GridSpec::cell_centred(bounds, spacing);
  } else if (layout == "corner") {
    grid = GridSpec::corner_aligned(bounds, spacing);
  } else {
    throw std::invalid_argument("--layout must be centred or corner");
  }
  const PebMap map = peb_map(cfg, grid);
  manifest.set_config(cfg);

  const json grid_json = {{"x0", grid.x0}, {"y0", grid.y0}, {"spacing_m", grid.spacing}, {"nx", grid.nx},
                          {"ny", grid.ny}, {"order", "row-major, x fastest"}};
  manifest.spec_echo["grid"] = grid_json;
  const json header = {{"config_hash", manifest.config_hash}, {"grid", grid_json}, {"singular", "inf"}};
  std::string data = "# " + header.dump() + "\nu_x,u_y,peb_m\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Position p = grid.node(i);
    data += format_double(p.x) + ',' + format_double(p.y) + ',' + format_double(map.peb[i]) + '\n';
  }
  emit(opt.out, data, manifest);
  return 0;
}

int run_gen(const CommonOptions& opt, const std::string& u_text, std::uint64_t seed, RunManifest& manifest) {
  const SystemConfig cfg = resolve_config(load_config(opt.config_path), opt.n_pas, opt.noise_dbm, true);
  const Position u = parse_position(u_text);
  const SignalVector r = synthesize_observation(cfg, u, seed);
  manifest.set_config(cfg);
  manifest.spec_echo["u"] = {u.x, u.y};
  manifest.spec_echo["seed"] = seed;
  emit(opt.out, observation_csv(r), manifest);
  return 0;
}

struct EstimateOptions {
  std::string input;
  std::string estimator = "ml";
  std::optional<double> grid_spacing;
  std::optional<std::size_t> candidates;
  std::optional<double> min_separation;
  std::optional<std::size_t> lm_max_iter;
};

int run_estimate(const CommonOptions& opt, const EstimateOptions& eo, RunManifest& manifest) {
  const ConfigFile file = load_config(opt.config_path);
  const SignalVector r = parse_observation_csv(read_text_file(eo.input));
  // The estimators do not use the noise level; the antenna count defaults to
  // the number of samples in the observation.
  const SystemConfig cfg = resolve_config(file, opt.n_pas, std::nullopt, false, r.size());
  if (cfg.antenna_count() != r.size()) {
    throw std::invalid_argument("observation has " + std::to_string(r.size()) + " samples but the configuration has " +
                                std::to_string(cfg.antenna_count()) + " antennas");
  }
  GridSearchConfig gcfg = file.grid;
  LmConfig lcfg = file.lm;
  if (eo.grid_spacing) gcfg.spacing_m = *eo.grid_spacing;
  if (eo.candidates) gcfg.num_candidates = *eo.candidates;
  if (eo.min_separation) gcfg.min_separation_m = *eo.min_separation;
  if (eo.lm_max_iter) lcfg.max_iterations = *eo.lm_max_iter;

  const EstimatorKind kind = parse_estimator(eo.estimator);
  const EstimationResult est = kind == EstimatorKind::ml ? ml_estimate(cfg, r, gcfg, lcfg) : wls_amplitude_baseline(cfg, r);

  manifest.set_config(cfg);
  manifest.spec_echo["input"] = eo.input;
  manifest.spec_echo["estimator"] = eo.estimator;
  manifest.spec_echo["grid_spacing_m"] = gcfg.resolved_spacing(cfg);
  manifest.spec_echo["num_candidates"] = gcfg.num_candidates;
  manifest.spec_echo["min_separation_m"] = gcfg.resolved_min_separation(cfg);
  manifest.spec_echo["lm_max_iterations"] = lcfg.max_iterations;

  const json result = {{"estimator", eo.estimator},
                       {"estimate_x_m", est.position.x},
                       {"estimate_y_m", est.position.y},
                       {"residual", est.residual},
                       {"iterations", est.lm_iterations_total},
                       {"candidates_evaluated", est.candidates_evaluated},
                       {"converged", est.converged},
                       {"flags", est.flags()}};
  emit(opt.out, result.dump(2) + "\n", manifest);
  return 0;
}

ExperimentSetup experiment_setup(const std::optional<std::filesystem::path>& spec_config, const std::string& cli_config,
                                 const std::vector<EstimatorKind>& estimators, const SearchOverrides& search,
                                 std::size_t default_n) {
  ConfigFile file;
  if (!cli_config.empty()) {
    file = parse_config_file(cli_config);
  } else if (spec_config) {
    file = parse_config_file(*spec_config);
  }
  ExperimentSetup setup;
  setup.base = resolve_config(file, std::nullopt, std::nullopt, false, default_n);
  setup.grid = file.grid;
  search.apply(setup.grid, setup.base);
  setup.lm = file.lm;
  setup.estimators = estimators;
  return setup;
}

json setup_echo(const ExperimentSetup& setup) {
  json est = json::array();
  for (EstimatorKind e : setup.estimators) est.push_back(std::string(estimator_name(e)));
  return {{"estimators", est},
          {"grid_spacing_m", setup.grid.resolved_spacing(setup.base)},
          {"num_candidates", setup.grid.num_candidates},
          {"min_separation_m", setup.grid.resolved_min_separation(setup.base)},
          {"lm_max_iterations", setup.lm.max_iterations},
          {"lm_step_tolerance_m", setup.lm.step_tolerance_m}};
}

int run_mc_sweep(const std::string& spec_path, const CommonOptions& opt, RunManifest& manifest) {
  const SweepSpecFile spec = parse_sweep_spec(spec_path);
  const ExperimentSetup setup = experiment_setup(spec.config, opt.config_path, spec.estimators, spec.search,
                                                   spec.spec.pa_counts.front());
  const SweepResult result = run_sweep(spec.spec, setup);
  manifest.set_config(setup.base);
  manifest.spec_echo["spec_file"] = spec_path;
  manifest.spec_echo["spec_text"] = read_text_file(spec_path);
  manifest.spec_echo["noise_dbm_list"] = spec.spec.noise_dbm_list;
  manifest.spec_echo["pa_counts"] = spec.spec.pa_counts;
  manifest.spec_echo["trials"] = spec.spec.trials;
  manifest.spec_echo["truth"] = spec.spec.truth.fixed ? json{spec.spec.truth.fixed->x, spec.spec.truth.fixed->y}
                                                      : json("uniform");
  manifest.spec_echo["master_seed"] = spec.spec.master_seed;
  manifest.spec_echo["setup"] = setup_echo(setup);
  emit(opt.out, sweep_csv(result), manifest);
  return 0;
}

int run_mc_map(const std::string& spec_path, const CommonOptions& opt, RunManifest& manifest) {
  const MapSpecFile spec = parse_map_spec(spec_path);
  const ExperimentSetup setup = experiment_setup(spec.config, opt.config_path, spec.estimators, spec.search,
                                                   spec.spec.n_pas);
  const MapResult result = run_error_map(spec.spec, setup);
  manifest.set_config(setup.base);
  manifest.spec_echo["spec_file"] = spec_path;
  manifest.spec_echo["spec_text"] = read_text_file(spec_path);
  manifest.spec_echo["grid_spacing_m"] = spec.spec.grid_spacing_m;
  manifest.spec_echo["trials_per_point"] = spec.spec.trials_per_point;
  manifest.spec_echo["noise_dbm"] = spec.spec.noise_dbm;
  manifest.spec_echo["n_pas"] = spec.spec.n_pas;
  manifest.spec_echo["master_seed"] = spec.spec.master_seed;
  manifest.spec_echo["setup"] = setup_echo(setup);
  emit(opt.out, map_csv(result), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinchloc: localization limits and estimators for pinching-antenna systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PINCHLOC_VERSION);

  CommonOptions opt;
  std::string u_text;
  std::uint64_t seed = 0;
  double spacing = 0.25;
  std::string layout = "centred";
  std::string bounds_text;
  std::string spec_path;
  EstimateOptions eo;

  auto* crlb_cmd = app.add_subcommand("crlb", "Fisher information, CRLB and PEB at one position (JSON)");
  add_common(crlb_cmd, opt, true);
  crlb_cmd->add_option("--u", u_text, "User position x,y in metres")->required();

  auto* map_cmd = app.add_subcommand("peb-map", "PEB over a grid (CSV with JSON header line)");
  add_common(map_cmd, opt, true);
  map_cmd->add_option("--spacing", spacing, "Grid spacing in metres")->capture_default_str();
  map_cmd->add_option("--layout", layout, "Node layout: centred or corner")->capture_default_str();
  map_cmd->add_option("--bounds", bounds_text, "x_min,x_max,y_min,y_max (default: deployment area)");

  auto* gen_cmd = app.add_subcommand("gen", "Synthesize a noisy observation (CSV n,re,im)");
  add_common(gen_cmd, opt, true);
  gen_cmd->add_option("--u", u_text, "True user position x,y in metres")->required();
  gen_cmd->add_option("--seed", seed, "Noise seed")->capture_default_str();

  auto* est_cmd = app.add_subcommand("estimate", "Estimate a position from an observation file (JSON)");
  add_common(est_cmd, opt, false);
  est_cmd->add_option("--input", eo.input, "Observation CSV (n,re,im)")->required()->check(CLI::ExistingFile);
  est_cmd->add_option("--estimator", eo.estimator, "ml or wls")->capture_default_str();
  est_cmd->add_option("--grid-spacing", eo.grid_spacing, "Coarse grid spacing in metres (default lambda/4)");
  est_cmd->add_option("--candidates", eo.candidates, "Number of grid candidates refined by LM")->check(CLI::PositiveNumber);
  est_cmd->add_option("--min-separation", eo.min_separation, "Minimum spacing between candidates (default lambda)");
  est_cmd->add_option("--lm-max-iter", eo.lm_max_iter, "LM iteration cap per candidate")->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("mc-sweep", "Monte-Carlo error versus noise power (CSV)");
  sweep_cmd->add_option("--spec", spec_path, "Sweep spec file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--config", opt.config_path, "Configuration file (overrides the spec's)")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", opt.out, "Output CSV (stdout if omitted)");

  auto* mcmap_cmd = app.add_subcommand("mc-map", "Monte-Carlo spatial error map (CSV)");
  mcmap_cmd->add_option("--spec", spec_path, "Map spec file")->required()->check(CLI::ExistingFile);
  mcmap_cmd->add_option("--config", opt.config_path, "Configuration file (overrides the spec's)")->check(CLI::ExistingFile);
  mcmap_cmd->add_option("--out", opt.out, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  RunManifest manifest;
  manifest.argv.assign(argv, argv + argc);
  try {
    if (crlb_cmd->parsed()) {
      manifest.command = "crlb";
      return run_crlb(opt, u_text, manifest);
    }
    if (map_cmd->parsed()) {
      manifest.command = "peb-map";
      return run_peb_map(opt, spacing, layout, bounds_text, manifest);
    }
    if (gen_cmd->parsed()) {
      manifest.command = "gen";
      return run_gen(opt, u_text, seed, manifest);
    }
    if (est_cmd->parsed()) {
      manifest.command = "estimate";
      return run_estimate(opt, eo, manifest);
    }
    if (sweep_cmd->parsed()) {
      manifest.command = "mc-sweep";
      return run_mc_sweep(spec_path, opt, manifest);
    }
    if (mcmap_cmd->parsed()) {
      manifest.command = "mc-map";
      return run_mc_map(spec_path, opt, manifest);
    }
  } catch (const std::exception& e) {
    std::cerr << "pinchloc: error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
