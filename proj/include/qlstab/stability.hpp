#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlstab/evolution.hpp"
#include "qlstab/ground_state.hpp"
#include "qlstab/grid.hpp"
#include "qlstab/model.hpp"

namespace qlstab {

/// H1:  ‖f‖² = ∫|f|² + ∫|∇f|²
/// H1V: H1 plus ∫V|f|²
enum class DistanceNorm { H1, H1V };

const char* to_string(DistanceNorm n) noexcept;

/// Inner products of the distance norm on one grid.
class OrbitMetric {
 public:
  OrbitMetric(GridPtr grid, DistanceNorm norm, std::optional<RealField> potential = std::nullopt);

  double norm2(const RealField& f) const;
  double norm2(const ComplexField& f) const;
  double inner(const RealField& a, const RealField& b) const;
  /// <s, z> with s real.
  std::complex<double> inner(const RealField& s, const ComplexField& z) const;

  const GridPtr& grid() const noexcept { return grid_; }
  DistanceNorm norm() const noexcept { return norm_; }
  /// Per-node weight w_i (1 + V_i) used by the zeroth-order term.
  const std::vector<double>& mass_weights() const noexcept { return mass_weights_; }

 private:
  GridPtr grid_;
  DistanceNorm norm_;
  std::vector<double> mass_weights_;
};

struct OrbitDistance {
  double d = 0.0;
  double eta_star = 0.0;          // in [0, 2π)
  std::optional<double> xi_star;  // line grids only
  double lattice_d = 0.0;         // best value on the node-shift lattice before refinement
};

/// inf over η (and ξ on line grids) of ‖z - e^{iη} u0(· + ξ)‖.
OrbitDistance orbit_distance(const ComplexField& z, const RealField& u0, const OrbitMetric& metric);
OrbitDistance orbit_distance(const ComplexField& z, const RealField& u0,
                             DistanceNorm norm = DistanceNorm::H1,
                             const ModelParams* params = nullptr);

enum class PerturbationMode { Scale, Bump, Random };

const char* to_string(PerturbationMode m) noexcept;

struct Perturbation {
  double delta = 1e-2;  // relative amplitude: ‖z0 - u0‖ = δ ‖u0‖
  PerturbationMode mode = PerturbationMode::Bump;
  std::uint64_t seed = 0;
  double bump_center = 1.0;  // line grids; radial bumps sit at r = 0
  double bump_width = 1.0;
  double noise_width = 1.0;  // Gaussian smoothing length of the random mode
};

/// Perturbation direction, scaled so that its norm equals ‖u0‖ in the metric.
RealField perturbation_field(const RealField& u0, const Perturbation& perturb,
                             const OrbitMetric& metric);

struct StabilitySample {
  double t = 0.0;
  double d = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

struct StabilityRequest {
  Perturbation perturbation;
  double duration = 10.0;
  double dt = 1e-3;
  std::size_t sample_every = 100;
  double C = 5.0;
  std::optional<DistanceNorm> norm;  // default: H1 on lines, H1V on radial grids
  EvolutionOptions evolution;
};

struct StabilityReport {
  ModelParams params;
  RegimeTag regime;
  Perturbation perturbation;
  DistanceNorm norm = DistanceNorm::H1;
  double C = 5.0;
  std::vector<StabilitySample> series;
  double initial_distance = 0.0;
  double max_orbit_distance = 0.0;
  double max_rel_mass_drift = 0.0;
  double max_rel_energy_drift = 0.0;
  bool evolution_failed = false;
  bool stable = false;
  std::string verdict;
};

StabilityReport stability_experiment(const GroundState& ground, const ModelParams& params,
                                     const StabilityRequest& req);
StabilityReport stability_experiment(const ModelParams& params, const GridPtr& grid,
                                     const SolverOptions& solver, const StabilityRequest& req);

struct StandingWaveCheck {
  double max_error = 0.0;
  std::vector<std::pair<double, double>> series;  // (t, ‖z(t) - e^{iμt}u0‖)
  bool evolution_failed = false;
};

/// Evolves z0 = u0 and compares with e^{iμt}u0, μ = -γ.
StandingWaveCheck standing_wave_check(const GroundState& ground, const ModelParams& params,
                                      double duration, double dt, std::size_t sample_every = 100,
                                      std::optional<DistanceNorm> norm = std::nullopt,
                                      const EvolutionOptions& evolution = {});

}  // namespace qlstab
