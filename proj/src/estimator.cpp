#include "pinchloc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pinchloc {

double GridSearchConfig::resolved_spacing(const SystemConfig& cfg) const {
  return spacing_m.value_or(cfg.wavelength_m() / 4.0);
}

double GridSearchConfig::resolved_min_separation(const SystemConfig& cfg) const {
  return min_separation_m.value_or(cfg.wavelength_m());
}

Rect GridSearchConfig::resolved_bounds(const SystemConfig& cfg) const { return search_bounds.value_or(cfg.area()); }

GridSpec GridSearchConfig::grid(const SystemConfig& cfg) const {
  validate();
  return GridSpec::corner_aligned(resolved_bounds(cfg), resolved_spacing(cfg));
}

void GridSearchConfig::validate() const {
  if (spacing_m && !(*spacing_m > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (num_candidates < 1) throw std::invalid_argument("num_candidates must be at least 1");
  if (min_separation_m && !(*min_separation_m >= 0.0)) throw std::invalid_argument("min_separation_m must be >= 0");
  if (search_bounds && !(search_bounds->x_max >= search_bounds->x_min && search_bounds->y_max >= search_bounds->y_min)) {
    throw std::invalid_argument("search bounds are inverted");
  }
}

void LmConfig::validate() const {
  if (initial_damping && !(*initial_damping > 0.0)) throw std::invalid_argument("initial damping must be positive");
  if (!(damping_up > 1.0) || !(damping_down > 1.0)) throw std::invalid_argument("damping factors must exceed 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (!(step_tolerance_m > 0.0)) throw std::invalid_argument("step tolerance must be positive");
}

std::vector<std::string> EstimationResult::flags() const {
  std::vector<std::string> out;
  if (!converged) out.emplace_back("not_converged");
  if (out_of_bounds) out.emplace_back("out_of_bounds");
  if (grid_truncated) out.emplace_back("grid_truncated");
  if (clipped) out.emplace_back("clipped");
  return out;
}

// ---------------------------------------------------------------------------
// Coarse grid search

GridCandidates coarse_grid_search(const ModelTable& table, std::span<const Complex> r, const GridSearchConfig& gcfg,
                                  double min_separation_m) {
  gcfg.validate();
  const std::size_t total = table.size();
  std::vector<double> res(total);
  table.residuals(r, res);

  GridCandidates out;
  out.nodes_evaluated = total;
  const std::size_t wanted = gcfg.num_candidates;
  const GridSpec& grid = table.grid();

  auto less = [&res](std::size_t a, std::size_t b) { return res[a] < res[b] || (res[a] == res[b] && a < b); };
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Only a short prefix of the global (residual, index) order is ever needed;
  // grow it until enough well-separated nodes are found.
  std::size_t prefix = std::min(total, std::max<std::size_t>(1024, 64 * wanted));
  for (;;) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(prefix), order.end(), less);
    out.positions.clear();
    out.residuals.clear();
    out.node_indices.clear();
    for (std::size_t k = 0; k < prefix && out.positions.size() < wanted; ++k) {
      const std::size_t idx = order[k];
      const Position p = grid.node(idx);
      const bool separated = std::all_of(out.positions.begin(), out.positions.end(), [&](const Position& q) {
        return distance_between(p, q) > min_separation_m;
      });
      if (separated || out.positions.empty()) {
        out.positions.push_back(p);
        out.residuals.push_back(res[idx]);
        out.node_indices.push_back(idx);
      }
    }
    if (out.positions.size() == wanted || prefix == total) break;
    prefix = std::min(total, prefix * 4);
  }
  out.truncated = out.positions.size() < wanted;
  return out;
}

GridCandidates coarse_grid_search(const SystemConfig& cfg, std::span<const Complex> r, const GridSearchConfig& gcfg) {
  const ModelTable table(cfg, gcfg.grid(cfg));
  return coarse_grid_search(table, r, gcfg, gcfg.resolved_min_separation(cfg));
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt refinement

namespace {

struct LocalModel {
  double residual = 0.0;
  Sym2 normal;                    // Re{Jac^H Jac}
  std::array<double, 2> rhs{};    // Re{Jac^H (r - s)}
};

// One pass over the antennas: s_n, ds_n/du and the quantities LM needs.
LocalModel local_model(const SystemConfig& cfg, std::span<const Complex> r, const Position& u) {
  LocalModel lm;
  const double k = cfg.wavenumber();
  for (std::size_t n = 0; n < cfg.antenna_count(); ++n) {
    const double d = distance(cfg, u, n);
    const Complex s = model_sample(cfg, u, n);
    const Complex m = s * Complex(1.0 / (d * d), k / d);
    const Complex jx = -m * u.x;
    const Complex jy = -m * (u.y - cfg.antenna_position(n));
    const Complex e = r[n] - s;
    lm.residual += std::norm(e);
    // Jac^H Jac is Hermitian with real diagonal; its off-diagonal is
    // conj(jx) jy = |m|^2 g_x g_y, also real, so Re{} drops nothing.
    lm.normal.xx += std::norm(jx);
    lm.normal.xy += (std::conj(jx) * jy).real();
    lm.normal.yy += std::norm(jy);
    lm.rhs[0] += (std::conj(jx) * e).real();
    lm.rhs[1] += (std::conj(jy) * e).real();
  }
  return lm;
}

}  // namespace

std::array<double, 2> lm_gradient_term(const SystemConfig& cfg, std::span<const Complex> r, const Position& u) {
  if (r.size() != cfg.antenna_count()) throw std::invalid_argument("observation length does not match antenna count");
  return local_model(cfg, r, u).rhs;
}

Sym2 lm_normal_matrix(const SystemConfig& cfg, const Position& u) {
  const SignalVector zeros(cfg.antenna_count());
  return local_model(cfg, zeros, u).normal;
}

LmOutcome lm_refine(const SystemConfig& cfg, std::span<const Complex> r, const Position& u0, const LmConfig& lcfg) {
  lcfg.validate();
  if (r.size() != cfg.antenna_count()) throw std::invalid_argument("observation length does not match antenna count");

  LmOutcome out;
  Position u = u0;
  LocalModel model = local_model(cfg, r, u);
  if (!std::isfinite(model.residual)) throw std::domain_error("non-finite residual at the LM starting point");
  out.initial_residual = model.residual;

  double damping = lcfg.initial_damping.value_or(1e-3 * 0.5 * model.normal.trace());
  if (!(damping > 0.0)) throw std::domain_error("LM damping is not positive (zero normal matrix at start)");

  for (std::size_t it = 1; it <= lcfg.max_iterations; ++it) {
    out.iterations = it;
    const Sym2 A{model.normal.xx + damping, model.normal.xy, model.normal.yy + damping};
    const double det = A.det();
    if (!(det > 0.0) || !std::isfinite(det)) throw std::domain_error("singular damped LM system");
    const double dx = (A.yy * model.rhs[0] - A.xy * model.rhs[1]) / det;
    const double dy = (A.xx * model.rhs[1] - A.xy * model.rhs[0]) / det;
    const double step = std::hypot(dx, dy);

    const Position trial{u.x + dx, u.y + dy};
    const LocalModel trial_model = local_model(cfg, r, trial);
    if (trial_model.residual < model.residual) {
      u = trial;
      model = trial_model;
      damping /= lcfg.damping_down;
      out.accepted_residuals.push_back(model.residual);
    } else {
      damping *= lcfg.damping_up;
    }
    if (step < lcfg.step_tolerance_m) {
      out.converged = true;
      break;
    }
  }
  out.position = u;
  out.residual = model.residual;
  return out;
}

// ---------------------------------------------------------------------------
// Two-stage ML

EstimationResult ml_estimate(const SystemConfig& cfg, const ModelTable& table, std::span<const Complex> r,
                             const GridSearchConfig& gcfg, const LmConfig& lcfg) {
  if (!table.compatible_with(cfg)) throw std::invalid_argument("model table was built for a different configuration");
  const GridCandidates cands = coarse_grid_search(table, r, gcfg, gcfg.resolved_min_separation(cfg));

  EstimationResult best;
  best.residual = std::numeric_limits<double>::infinity();
  best.grid_nodes_evaluated = cands.nodes_evaluated;
  best.grid_truncated = cands.truncated;
  for (const Position& start : cands.positions) {
    const LmOutcome refined = lm_refine(cfg, r, start, lcfg);
    best.lm_iterations_total += refined.iterations;
    ++best.candidates_evaluated;
    if (refined.residual < best.residual) {
      best.residual = refined.residual;
      best.position = refined.position;
      best.converged = refined.converged;
    }
  }
  best.out_of_bounds = !gcfg.resolved_bounds(cfg).contains(best.position);
  return best;
}

EstimationResult ml_estimate(const SystemConfig& cfg, std::span<const Complex> r, const GridSearchConfig& gcfg,
                             const LmConfig& lcfg) {
  const ModelTable table(cfg, gcfg.grid(cfg));
  return ml_estimate(cfg, table, r, gcfg, lcfg);
}

}  // namespace pinchloc
