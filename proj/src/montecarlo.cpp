#include "pinchloc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pinchloc/csv_io.hpp"
#include "pinchloc/parallel.hpp"

namespace pinchloc {

std::string_view estimator_name(EstimatorKind kind) { return kind == EstimatorKind::ml ? "ml" : "wls"; }

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "ml") return EstimatorKind::ml;
  if (name == "wls") return EstimatorKind::wls;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "' (expected ml or wls)");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t noise_index, std::uint64_t pa_index,
                         std::uint64_t trial_index, std::uint64_t node_index) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : {noise_index, pa_index, trial_index, node_index}) h = splitmix64(h ^ k);
  return h;
}

std::uint64_t truth_seed(std::uint64_t master, std::uint64_t trial_index) {
  constexpr std::uint64_t kTruthTag = 0x7472757468ULL;  // "truth"
  return splitmix64(splitmix64(master ^ kTruthTag) ^ trial_index);
}

Position sample_uniform(const Rect& area, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> ux(area.x_min, area.x_max);
  std::uniform_real_distribution<double> uy(area.y_min, area.y_max);
  const double x = ux(engine);
  const double y = uy(engine);
  return {x, y};
}

void SweepSpec::validate() const {
  if (noise_dbm_list.empty()) throw std::invalid_argument("sweep needs at least one noise level");
  if (pa_counts.empty()) throw std::invalid_argument("sweep needs at least one antenna count");
  if (trials < 1) throw std::invalid_argument("sweep needs at least one trial");
  for (std::size_t n : pa_counts) {
    if (n < 1) throw std::invalid_argument("antenna counts must be positive");
  }
}

void MapSpec::validate() const {
  if (!(grid_spacing_m > 0.0)) throw std::invalid_argument("map grid spacing must be positive");
  if (trials_per_point < 1) throw std::invalid_argument("map needs at least one trial per point");
  if (n_pas < 1) throw std::invalid_argument("map antenna count must be positive");
}

ErrorStats summarize_errors(const std::vector<double>& errors) {
  ErrorStats s;
  std::vector<double> ok;
  ok.reserve(errors.size());
  for (double e : errors) {
    if (std::isfinite(e)) {
      ok.push_back(e);
    } else {
      ++s.trials_failed;
    }
  }
  s.trials_ok = ok.size();
  if (ok.empty()) {
    s.mean_err_m = s.rmse_m = s.median_err_m = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double e : ok) {
    sum += e;
    sum_sq += e * e;
  }
  const double count = static_cast<double>(ok.size());
  s.mean_err_m = sum / count;
  s.rmse_m = std::sqrt(sum_sq / count);
  std::sort(ok.begin(), ok.end());
  const std::size_t mid = ok.size() / 2;
  s.median_err_m = ok.size() % 2 ? ok[mid] : 0.5 * (ok[mid - 1] + ok[mid]);
  return s;
}

namespace {

// Estimation error for one estimator on one observation; NaN marks a failed trial.
double run_one(EstimatorKind kind, const SystemConfig& cfg, const ModelTable& table, const SignalVector& r,
               const Position& truth, const ExperimentSetup& setup) {
  try {
    const EstimationResult est = kind == EstimatorKind::ml ? ml_estimate(cfg, table, r, setup.grid, setup.lm)
                                                           : wls_amplitude_baseline(cfg, r);
    const double err = distance_between(est.position, truth);
    return std::isfinite(err) ? err : std::numeric_limits<double>::quiet_NaN();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

SystemConfig config_for(const ExperimentSetup& setup, std::size_t n_pas) {
  return setup.base.with_antennas(uniform_antenna_positions(n_pas, setup.base.waveguide_length_m()));
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const ExperimentSetup& setup) {
  spec.validate();
  if (setup.estimators.empty()) throw std::invalid_argument("no estimators requested");
  const std::size_t n_noise = spec.noise_dbm_list.size();
  const std::size_t n_pa = spec.pa_counts.size();
  const std::size_t n_est = setup.estimators.size();

  // cells[noise][pa][estimator]
  std::vector<SweepCell> cells(n_noise * n_pa * n_est);

  for (std::size_t pi = 0; pi < n_pa; ++pi) {
    const SystemConfig geometry = config_for(setup, spec.pa_counts[pi]);
    const ModelTable table(geometry, setup.grid.grid(geometry));
    for (std::size_t ni = 0; ni < n_noise; ++ni) {
      const SystemConfig cfg = geometry.with_noise_dbm(spec.noise_dbm_list[ni]);
      std::vector<std::vector<double>> errors(n_est, std::vector<double>(spec.trials));
      std::vector<double> pebs(spec.trials);

      parallel_for(spec.trials, [&](std::size_t t) {
        const Position truth = spec.truth.fixed ? *spec.truth.fixed : sample_uniform(cfg.area(), truth_seed(spec.master_seed, t));
        const SignalVector r = synthesize_observation(cfg, truth, trial_seed(spec.master_seed, ni, pi, t, 0));
        for (std::size_t e = 0; e < n_est; ++e) errors[e][t] = run_one(setup.estimators[e], cfg, table, r, truth, setup);
        pebs[t] = crlb(cfg, truth).peb;
      });

      const double peb_mean = mean_of(pebs);
      for (std::size_t e = 0; e < n_est; ++e) {
        SweepCell& cell = cells[(ni * n_pa + pi) * n_est + e];
        cell.noise_dbm = spec.noise_dbm_list[ni];
        cell.n_pas = spec.pa_counts[pi];
        cell.estimator = setup.estimators[e];
        cell.stats = summarize_errors(errors[e]);
        cell.peb_mean_m = peb_mean;
      }
    }
  }
  return SweepResult{std::move(cells)};
}

MapResult run_error_map(const MapSpec& spec, const ExperimentSetup& setup) {
  spec.validate();
  if (setup.estimators.empty()) throw std::invalid_argument("no estimators requested");
  const SystemConfig cfg = config_for(setup, spec.n_pas).with_noise_dbm(spec.noise_dbm);
  const ModelTable table(cfg, setup.grid.grid(cfg));

  MapResult out;
  out.grid = GridSpec::cell_centred(cfg.area(), spec.grid_spacing_m);
  out.estimators = setup.estimators;
  const std::size_t nodes = out.grid.size();
  const std::size_t trials = spec.trials_per_point;
  const std::size_t n_est = setup.estimators.size();

  std::vector<std::vector<double>> errors(n_est, std::vector<double>(nodes * trials));
  parallel_for(nodes * trials, [&](std::size_t job) {
    const std::size_t node = job / trials;
    const std::size_t t = job % trials;
    const Position truth = out.grid.node(node);
    const SignalVector r = synthesize_observation(cfg, truth, trial_seed(spec.master_seed, 0, 0, t, node));
    for (std::size_t e = 0; e < n_est; ++e) errors[e][job] = run_one(setup.estimators[e], cfg, table, r, truth, setup);
  });

  out.peb.resize(nodes);
  out.errors.assign(n_est, std::vector<ErrorStats>(nodes));
  for (std::size_t node = 0; node < nodes; ++node) {
    out.peb[node] = crlb(cfg, out.grid.node(node)).peb;
    for (std::size_t e = 0; e < n_est; ++e) {
      const auto first = errors[e].begin() + static_cast<std::ptrdiff_t>(node * trials);
      out.errors[e][node] = summarize_errors(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(trials)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Export

namespace {
constexpr std::string_view kSweepHeader =
    "noise_dbm,n_pas,estimator,trials_ok,trials_failed,mean_err_m,rmse_m,median_err_m,peb_mean_m";
}

std::string sweep_csv(const SweepResult& result) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const SweepCell& c : result.cells) {
    out += format_double(c.noise_dbm) + ',' + std::to_string(c.n_pas) + ',' + std::string(estimator_name(c.estimator)) +
           ',' + std::to_string(c.stats.trials_ok) + ',' + std::to_string(c.stats.trials_failed) + ',' +
           format_double(c.stats.mean_err_m) + ',' + format_double(c.stats.rmse_m) + ',' +
           format_double(c.stats.median_err_m) + ',' + format_double(c.peb_mean_m) + '\n';
  }
  return out;
}

SweepResult parse_sweep_csv(std::string_view text) {
  SweepResult result;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSweepHeader) throw std::invalid_argument("sweep CSV header mismatch");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) + ": expected 9 fields");
    SweepCell c;
    c.noise_dbm = parse_double(f[0]);
    c.n_pas = std::stoul(f[1]);
    c.estimator = parse_estimator(f[2]);
    c.stats.trials_ok = std::stoul(f[3]);
    c.stats.trials_failed = std::stoul(f[4]);
    c.stats.mean_err_m = parse_double(f[5]);
    c.stats.rmse_m = parse_double(f[6]);
    c.stats.median_err_m = parse_double(f[7]);
    c.peb_mean_m = parse_double(f[8]);
    result.cells.push_back(c);
  }
  return result;
}

std::string map_csv(const MapResult& result) {
  std::string out = "u_x,u_y,estimator,mean_err_m,peb_m\n";
  for (std::size_t node = 0; node < result.grid.size(); ++node) {
    const Position p = result.grid.node(node);
    for (std::size_t e = 0; e < result.estimators.size(); ++e) {
      out += format_double(p.x) + ',' + format_double(p.y) + ',' + std::string(estimator_name(result.estimators[e])) +
             ',' + format_double(result.errors[e][node].mean_err_m) + ',' + format_double(result.peb[node]) + '\n';
    }
  }
  return out;
}

}  // namespace pinchloc
