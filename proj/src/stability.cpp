#include "qlstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>

#include "qlstab/errors.hpp"
#include "qlstab/kernels.hpp"

namespace qlstab {
namespace {

using cplx = std::complex<double>;

// u0 moved by j whole nodes: s[i] = u0[i + j], zero when i + j falls off the grid.
RealField node_shift(const RealField& u0, std::ptrdiff_t j) {
  RealField s(u0.grid);
  const auto n = static_cast<std::ptrdiff_t>(u0.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t k = i + j;
    if (k >= 0 && k < n) s.values[static_cast<std::size_t>(i)] = u0.values[static_cast<std::size_t>(k)];
  }
  return s;
}

struct ShiftTerms {
  double norm2 = 0.0;
  cplx inner;
};

// ‖s_j‖² and <s_j, z> without materialising s_j.
ShiftTerms shift_terms(const RealField& u0, const ComplexField& z, const OrbitMetric& metric,
                       std::ptrdiff_t j) {
  const Grid& g = *u0.grid;
  const auto n = static_cast<std::ptrdiff_t>(u0.size());
  const auto& m = metric.mass_weights();
  const auto faces = g.faces();
  const double inv_h = 1.0 / g.spacing();
  const auto at = [&](std::ptrdiff_t i) {
    const std::ptrdiff_t k = i + j;
    return (k >= 0 && k < n) ? u0.values[static_cast<std::size_t>(k)] : 0.0;
  };
  // Only nodes whose shifted index lands on the grid contribute to the zeroth-order sums;
  // edges need one extra node on either side.
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -j - 1);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, n - j);
  ShiftTerms t;
  for (std::ptrdiff_t i = lo; i <= hi; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double s = at(i);
    t.norm2 += m[iu] * s * s;
    t.inner += (m[iu] * s) * z.values[iu];
    if (i + 1 < n) {
      const double ds = (at(i + 1) - s) * faces[iu] * inv_h;
      t.norm2 += ds * (at(i + 1) - s);
      t.inner += ds * (z.values[iu + 1] - z.values[iu]);
    }
  }
  return t;
}

double wrap_phase(double eta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  eta = std::fmod(eta, two_pi);
  if (eta < 0.0) eta += two_pi;
  if (eta >= two_pi) eta = 0.0;
  return eta;
}

double direct_distance(const ComplexField& z, const RealField& s, double eta,
                       const OrbitMetric& metric) {
  ComplexField diff(z.grid);
  const cplx phase = std::polar(1.0, eta);
  for (std::size_t i = 0; i < z.size(); ++i) diff.values[i] = z.values[i] - phase * s[i];
  return std::sqrt(std::max(0.0, metric.norm2(diff)));
}

// Minimises ‖s(t)‖² - 2|<s(t), z>| over t in [0, 1] for s(t) = (1-t) s_a + t s_b.
struct CellMin {
  double t = 0.0;
  double value = 0.0;
};

CellMin minimise_cell(double aa, double ab, double bb, cplx za, cplx zb) {
  const auto f = [&](double t) {
    const double u = 1.0 - t;
    return u * u * aa + 2.0 * t * u * ab + t * t * bb - 2.0 * std::abs(u * za + t * zb);
  };
  constexpr int samples = 32;
  CellMin best{0.0, f(0.0)};
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const double v = f(t);
    if (v < best.value) best = {t, v};
  }
  // Golden-section search around the best sample.
  double lo = std::max(0.0, best.t - 1.0 / samples);
  double hi = std::min(1.0, best.t + 1.0 / samples);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  const double t = 0.5 * (lo + hi);
  const double v = f(t);
  if (v < best.value) best = {t, v};
  return best;
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

const char* to_string(DistanceNorm n) noexcept { return n == DistanceNorm::H1 ? "H1" : "H1V"; }

const char* to_string(PerturbationMode m) noexcept {
  switch (m) {
    case PerturbationMode::Scale: return "scale";
    case PerturbationMode::Bump: return "bump";
    case PerturbationMode::Random: return "random";
  }
  return "?";
}

OrbitMetric::OrbitMetric(GridPtr grid, DistanceNorm norm, std::optional<RealField> potential)
    : grid_(std::move(grid)), norm_(norm) {
  if (!grid_) throw InvalidArgument("OrbitMetric: null grid");
  const auto w = grid_->weights();
  mass_weights_.assign(w.begin(), w.end());
  if (norm_ == DistanceNorm::H1V && potential) {
    require_same_grid(potential->grid, grid_, "OrbitMetric");
    for (std::size_t i = 0; i < mass_weights_.size(); ++i) mass_weights_[i] *= 1.0 + (*potential)[i];
  }
}

double OrbitMetric::norm2(const RealField& f) const { return inner(f, f); }

double OrbitMetric::norm2(const ComplexField& f) const {
  require_same_grid(f.grid, grid_, "orbit norm");
  return kernels::weighted_norm2(mass_weights_, f.values) +
         kernels::edge_norm2(grid_->faces(), grid_->spacing(), f.values);
}

double OrbitMetric::inner(const RealField& a, const RealField& b) const {
  require_same_grid(a.grid, grid_, "orbit inner product");
  require_same_grid(b.grid, grid_, "orbit inner product");
  return kernels::weighted_dot(mass_weights_, a.values, b.values) +
         kernels::edge_dot(grid_->faces(), grid_->spacing(), a.values, b.values);
}

cplx OrbitMetric::inner(const RealField& s, const ComplexField& z) const {
  require_same_grid(s.grid, grid_, "orbit inner product");
  require_same_grid(z.grid, grid_, "orbit inner product");
  return kernels::weighted_mixed_dot(mass_weights_, s.values, z.values) +
         kernels::edge_mixed_dot(grid_->faces(), grid_->spacing(), s.values, z.values);
}

OrbitDistance orbit_distance(const ComplexField& z, const RealField& u0, const OrbitMetric& metric) {
  require_same_grid(z.grid, u0.grid, "orbit_distance");
  require_same_grid(z.grid, metric.grid(), "orbit_distance");
  const Grid& g = *u0.grid;
  OrbitDistance out;

  if (!g.is_line()) {
    const double eta = wrap_phase(std::arg(metric.inner(u0, z)));
    out.eta_star = eta;
    out.d = direct_distance(z, u0, eta, metric);
    out.lattice_d = out.d;
    return out;
  }

  // Exhaustive scan over whole-node translations, then refinement on the two
  // adjacent cells where the interpolated orbit is linear in the sub-node offset.
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  const double z_norm2 = metric.norm2(z);
  const std::ptrdiff_t count = 2 * n - 1;
  std::vector<double> score(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    const ShiftTerms t = shift_terms(u0, z, metric, c - (n - 1));
    score[static_cast<std::size_t>(c)] = z_norm2 + t.norm2 - 2.0 * std::abs(t.inner);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < score.size(); ++c)
    if (score[c] < score[best]) best = c;
  const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(best) - (n - 1);
  const double h = g.spacing();

  const RealField lattice = node_shift(u0, j);
  const double lattice_eta = wrap_phase(std::arg(metric.inner(lattice, z)));
  out.lattice_d = direct_distance(z, lattice, lattice_eta, metric);
  out.d = out.lattice_d;
  out.eta_star = lattice_eta;
  out.xi_star = static_cast<double>(j) * h;

  for (std::ptrdiff_t a : {j - 1, j}) {
    const std::ptrdiff_t b = a + 1;
    if (a < -(n - 1) || b > n - 1) continue;
    const RealField sa = node_shift(u0, a);
    const RealField sb = node_shift(u0, b);
    const CellMin cell = minimise_cell(metric.norm2(sa), metric.inner(sa, sb), metric.norm2(sb),
                                       metric.inner(sa, z), metric.inner(sb, z));
    RealField s(u0.grid);
    for (std::size_t i = 0; i < s.size(); ++i) s.values[i] = (1.0 - cell.t) * sa[i] + cell.t * sb[i];
    const double eta = wrap_phase(std::arg(metric.inner(s, z)));
    const double d = direct_distance(z, s, eta, metric);
    if (d < out.d) {
      out.d = d;
      out.eta_star = eta;
      out.xi_star = (static_cast<double>(a) + cell.t) * h;
    }
  }
  return out;
}

OrbitDistance orbit_distance(const ComplexField& z, const RealField& u0, DistanceNorm norm,
                             const ModelParams* params) {
  std::optional<RealField> potential;
  if (norm == DistanceNorm::H1V && params) potential = potential_values(*params, u0.grid);
  return orbit_distance(z, u0, OrbitMetric(u0.grid, norm, std::move(potential)));
}

RealField perturbation_field(const RealField& u0, const Perturbation& perturb,
                             const OrbitMetric& metric) {
  const GridPtr& grid = u0.grid;
  RealField f(grid);
  switch (perturb.mode) {
    case PerturbationMode::Scale:
      f = u0;
      break;
    case PerturbationMode::Bump: {
      if (!(perturb.bump_width > 0.0)) throw InvalidArgument("bump width must be > 0");
      const double c = grid->is_line() ? perturb.bump_center : 0.0;
      const double w2 = 2.0 * perturb.bump_width * perturb.bump_width;
      f = sample(grid, [&](double x) { return std::exp(-(x - c) * (x - c) / w2); });
      break;
    }
    case PerturbationMode::Random: {
      if (!(perturb.noise_width > 0.0)) throw InvalidArgument("noise width must be > 0");
      // splitmix64 keeps the stream identical across standard libraries.
      std::uint64_t state = perturb.seed;
      std::vector<double> noise(grid->size());
      for (double& v : noise)
        v = 2.0 * (static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53) - 1.0;
      const double h = grid->spacing();
      const double sigma = perturb.noise_width;
      const auto reach = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma / h));
      const auto n = static_cast<std::ptrdiff_t>(noise.size());
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, i - reach);
             k <= std::min(n - 1, i + reach); ++k) {
          const double dx = static_cast<double>(k - i) * h;
          acc += std::exp(-0.5 * dx * dx / (sigma * sigma)) * noise[static_cast<std::size_t>(k)];
        }
        f.values[static_cast<std::size_t>(i)] = acc;
      }
      break;
    }
  }
  pin_boundary(f);
  const double fn = std::sqrt(metric.norm2(f));
  if (!(fn > 0.0)) throw InvalidArgument("perturbation field vanishes");
  const double scale = std::sqrt(metric.norm2(u0)) / fn;
  for (double& v : f.values) v *= scale;
  return f;
}

StabilityReport stability_experiment(const GroundState& ground, const ModelParams& params,
                                     const StabilityRequest& req) {
  if (!(req.perturbation.delta >= 0.0)) throw InvalidArgument("stability: delta must be >= 0");
  if (!(req.C > 0.0)) throw InvalidArgument("stability: C must be > 0");
  const RealField& u0 = ground.u0;
  const GridPtr& grid = u0.grid;
  const DistanceNorm norm = req.norm.value_or(grid->is_line() ? DistanceNorm::H1 : DistanceNorm::H1V);
  std::optional<RealField> potential;
  if (norm == DistanceNorm::H1V) potential = potential_values(params, grid);
  const OrbitMetric metric(grid, norm, potential);

  StabilityReport report;
  report.params = params;
  report.regime = classify_regime(params);
  report.perturbation = req.perturbation;
  report.norm = norm;
  report.C = req.C;

  ComplexField z0(u0);
  if (req.perturbation.delta > 0.0) {
    const RealField f = perturbation_field(u0, req.perturbation, metric);
    for (std::size_t i = 0; i < z0.size(); ++i) z0.values[i] += req.perturbation.delta * f[i];
  }

  EvolveRequest evo;
  evo.duration = req.duration;
  evo.dt = req.dt;
  evo.sample_every = req.sample_every;
  evo.options = req.evolution;
  std::vector<double> distances;
  evo.on_sample = [&](double, const ComplexField& z) {
    distances.push_back(orbit_distance(z, u0, metric).d);
  };
  const Trajectory tr = evolve(z0, params, evo);

  for (std::size_t s = 0; s < tr.samples.size(); ++s) {
    const auto& rec = tr.samples[s];
    report.series.push_back({rec.t, distances[s], rec.pair.mass, rec.pair.energy});
    report.max_orbit_distance = std::max(report.max_orbit_distance, distances[s]);
  }
  report.initial_distance = distances.front();
  report.max_rel_mass_drift = tr.max_rel_mass_drift;
  report.max_rel_energy_drift = tr.max_rel_energy_drift;
  report.evolution_failed = tr.failed;

  const double bound = req.C * report.initial_distance;
  report.stable = !tr.failed && report.max_orbit_distance <= bound;
  std::ostringstream verdict;
  if (tr.failed) {
    verdict << "evolution stopped at t=" << tr.t_end << " (step failure)";
  } else if (report.stable) {
    verdict << "stable at scale (delta=" << req.perturbation.delta << ", C=" << req.C << ")";
  } else {
    verdict << "max d(t)=" << report.max_orbit_distance << " exceeds C*d(0)=" << bound;
  }
  if (report.regime.regime == Regime::OutOfTheory) verdict << " [OutOfTheory]";
  report.verdict = verdict.str();
  return report;
}

StabilityReport stability_experiment(const ModelParams& params, const GridPtr& grid,
                                     const SolverOptions& solver, const StabilityRequest& req) {
  return stability_experiment(solve(params, grid, solver), params, req);
}

StandingWaveCheck standing_wave_check(const GroundState& ground, const ModelParams& params,
                                      double duration, double dt, std::size_t sample_every,
                                      std::optional<DistanceNorm> norm,
                                      const EvolutionOptions& evolution) {
  const RealField& u0 = ground.u0;
  const GridPtr& grid = u0.grid;
  const DistanceNorm chosen = norm.value_or(grid->is_line() ? DistanceNorm::H1 : DistanceNorm::H1V);
  std::optional<RealField> potential;
  if (chosen == DistanceNorm::H1V) potential = potential_values(params, grid);
  const OrbitMetric metric(grid, chosen, potential);

  StandingWaveCheck check;
  EvolveRequest evo;
  evo.duration = duration;
  evo.dt = dt;
  evo.sample_every = sample_every;
  evo.options = evolution;
  ComplexField diff(grid);
  evo.on_sample = [&](double t, const ComplexField& z) {
    const cplx phase = std::polar(1.0, ground.mu * t);
    for (std::size_t i = 0; i < z.size(); ++i) diff.values[i] = z.values[i] - phase * u0[i];
    const double err = std::sqrt(metric.norm2(diff));
    check.series.emplace_back(t, err);
    check.max_error = std::max(check.max_error, err);
  };
  const Trajectory tr = evolve(ComplexField(u0), params, evo);
  check.evolution_failed = tr.failed;
  return check;
}

}  // namespace qlstab
