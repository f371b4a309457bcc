#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qlstab/functionals.hpp"
#include "qlstab/grid.hpp"
#include "qlstab/model.hpp"
#include "qlstab/tridiagonal.hpp"

namespace qlstab {

struct EvolutionOptions {
  double picard_tol = 1e-10;
  int max_sweeps = 50;
  int retry_budget = 8;

  void validate() const;
};

/// mass = ∫|z|^2, energy = ∫[½(|∇z|^2 + V|z|^2) + (k/4)|∇|z|^2|^2 - (θ/p)|z|^p].
struct ConservedPair {
  double mass = 0.0;
  double energy = 0.0;
};

ConservedPair conserved_quantities(const ComplexField& z, const ModelParams& params);

/// One Crank-Nicolson step of i z_t = H(z) z solved by Picard sweeps.
///
/// With z̄ = (z + z⁺)/2 and ρ = |z|^2, ρ⁺ = |z⁺|^2 the step solves
///   i (z⁺ - z)/dt = [-Δ + V - k Δ((ρ + ρ⁺)/2) - θ G(ρ, ρ⁺)] z̄,
///   G(ρ, ρ⁺) = (2/p)(ρ⁺^{p/2} - ρ^{p/2})/(ρ⁺ - ρ)  (→ ρ^{p/2-1} as ρ⁺ → ρ).
/// The bracket is real, so every sweep is a Cayley transform and preserves the
/// discrete mass to rounding; the averaged densities make the discrete energy
/// exactly conserved once the sweeps converge. The scheme is symmetric under
/// (z, z⁺, dt) -> (z⁺, z, -dt).
class Propagator {
 public:
  Propagator(ModelParams params, GridPtr grid, EvolutionOptions opts = {});

  /// dt may be negative (time reversal). Throws StepFailure when the sweeps stall.
  ComplexField step(const ComplexField& z, double dt);

  ConservedPair conserved(const ComplexField& z) const;

  int last_sweeps() const noexcept { return last_sweeps_; }
  double last_update() const noexcept { return last_update_; }
  const EnergyModel& model() const noexcept { return model_; }
  const EvolutionOptions& options() const noexcept { return opts_; }

 private:
  EnergyModel model_;
  EvolutionOptions opts_;
  TridiagonalSolver<std::complex<double>> solver_;
  std::vector<std::complex<double>> lower_, diag_, upper_, rhs_, x_;
  std::vector<double> rho_, rho_next_, rho_avg_, lap_rho_, coeff_;
  int last_sweeps_ = 0;
  double last_update_ = 0.0;
};

struct MonitorRecord {
  double t = 0.0;
  ConservedPair pair;
};

struct EvolutionState {
  ComplexField z;
  double t = 0.0;
  double dt = 0.0;
  ModelParams params;
  std::vector<MonitorRecord> monitors;
};

/// Advances by s.dt (> 0), halving on step failure within the retry budget.
EvolutionState step(const EvolutionState& s, const EvolutionOptions& opts = {});

struct Trajectory {
  std::vector<MonitorRecord> samples;
  std::vector<ComplexField> snapshots;  // only when requested
  ComplexField final_state;
  double t_end = 0.0;
  std::size_t steps = 0;
  bool failed = false;  // numerical step failure: reported, never interpreted further
  std::string failure;
  double max_rel_mass_drift = 0.0;
  double max_abs_energy_drift = 0.0;
  double max_rel_energy_drift = 0.0;
};

struct EvolveRequest {
  double duration = 0.0;
  double dt = 1e-3;
  std::size_t sample_every = 100;
  bool keep_snapshots = false;
  EvolutionOptions options;
  /// Called at t = 0 and every sample with the current field. Must not retain the reference.
  std::function<void(double t, const ComplexField& z)> on_sample;
};

Trajectory evolve(const ComplexField& z0, const ModelParams& params, const EvolveRequest& req);

}  // namespace qlstab
