#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qlstab/functionals.hpp"
#include "qlstab/grid.hpp"
#include "qlstab/model.hpp"

namespace qlstab {

/// Metric in which the descent direction is taken.
///   Sobolev: d = P^{-1} g projected onto the tangent of the mass sphere, P = I - Δ + V.
///   L2:      d = g - γ u, the plain normalized gradient flow (explicit, needs τ ~ h^2).
enum class Preconditioner { Sobolev, L2 };

struct Initializer {
  enum class Kind { Gaussian, Custom };
  Kind kind = Kind::Gaussian;
  double width = 1.0;
  double center = 0.0;  // line grids only
  std::optional<RealField> custom;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
};

struct SolverOptions {
  double tau = 0.0;  // 0 picks the default for the preconditioner
  std::size_t max_iterations = 100000;
  double energy_tol = 1e-14;
  double residual_tol = 1e-9;
  bool enforce_nonnegative = true;
  std::size_t recenter_every = 0;  // 0 disables recentering
  double recenter_radius = 2.0;
  Initializer initializer;
  Preconditioner preconditioner = Preconditioner::Sobolev;
  /// Called once per accepted iteration (and once for the initial state).
  std::function<void(const IterationRecord&)> on_iteration;

  void validate() const;
};

struct GroundState {
  RealField u0;
  double m = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  RegimeTag regime;
  FunctionalValues values;
};

/// Iteration budget exhausted (or step size collapsed) before both stopping tests passed.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, GroundState last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const GroundState& last_iterate() const noexcept { return last_; }

 private:
  GroundState last_;
};

/// Energy ran below -1e12: the constrained energy is not bounded below for these parameters.
class UnboundedBelow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimizes E = F1 + k F3 - θ F4 on {F2 = λ} by a normalized gradient flow.
GroundState solve(const ModelParams& params, const GridPtr& grid, const SolverOptions& opts);

/// γ = (∫(|∇u|^2 + V u^2) + k ∫|∇(u^2)|^2 - θ ∫|u|^p) / ∫u^2.
double compute_multiplier(const RealField& u, const ModelParams& params);
double compute_multiplier(const RealField& u, const EnergyModel& model);

/// Rescales u in place so that F2(u) = λ.
void normalize_mass(RealField& u, double lambda);

/// Initial profile (pinned and normalized to F2 = λ).
RealField initial_profile(const ModelParams& params, const GridPtr& grid, const Initializer& init);

struct ScalingSample {
  double xi = 0.0;
  double numeric = 0.0;
  double analytic = 0.0;
};

struct ScalingProbe {
  std::vector<ScalingSample> samples;
  double a = 0.0;  // ∫|ψ'|^2
  double b = 0.0;  // ∫|(ψ^2)'|^2
  double c = 0.0;  // ∫|ψ|^p
  /// Smallest sampled ξ whose analytic energy is negative, certifying m < 0.
  std::optional<double> negative_xi;
};

/// Compares I(ξ^{1/2} ψ(ξ·)) on the grid against ½ξ²a + (k/4)ξ³b - (θ/p)ξ^{p/2-1}c.
ScalingProbe scaling_probe(const RealField& psi, const ModelParams& params,
                           std::span<const double> xis);

/// Value at an arbitrary x by linear interpolation, zero outside the line grid.
double interpolate(const RealField& u, double x);

struct Concentration {
  double sup_local_mass = 0.0;
  double y_star = 0.0;
};

/// max over node centres y of ∫_{y-R}^{y+R} |u|^2; ties resolve to the smallest y.
Concentration concentration_diagnostic(const RealField& u, double radius);

/// shift(u, y*) so the mass peak sits at the origin, boundary re-pinned.
RealField recenter(const RealField& u, double radius);

}  // namespace qlstab
