#include "qlstab/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlstab/errors.hpp"
#include "qlstab/tridiagonal.hpp"

namespace qlstab {
namespace {

constexpr double kDivergenceEnergy = -1e12;
// Accepted iterates may raise E by at most this much (rounding allowance).
constexpr double kMonotoneSlack = 1e-12;
constexpr double kSobolevTau = 0.5;
constexpr int kMaxHalvings = 60;

double weighted_norm(const EnergyModel& model, const RealField& u) {
  return std::sqrt(std::max(0.0, model.inner(u, u)));
}

// Solves (I - Δ + V) a = g on the free nodes; Dirichlet nodes stay zero.
class SobolevPreconditioner {
 public:
  explicit SobolevPreconditioner(const EnergyModel& model) : grid_(model.grid()) {
    const Grid& g = *grid_;
    const std::size_t lo = g.first_free();
    const std::size_t m = g.last_free() - lo + 1;
    const double h = g.spacing();
    const auto w = g.weights();
    const auto s = g.faces();
    lower_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    upper_.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = lo + j;
      double d = w[i] * (1.0 + model.potential()[i]);
      if (i > 0) d += s[i - 1] / h;
      if (i + 1 < g.size()) d += s[i] / h;
      diag_[j] = d;
      if (j > 0) lower_[j] = -s[i - 1] / h;
      if (j + 1 < m) upper_[j] = -s[i] / h;
    }
    rhs_.resize(m);
    x_.resize(m);
  }

  void apply(const RealField& g_in, RealField& out) {
    const Grid& g = *grid_;
    const std::size_t lo = g.first_free();
    const auto w = g.weights();
    for (std::size_t j = 0; j < rhs_.size(); ++j) rhs_[j] = w[lo + j] * g_in[lo + j];
    solver_.solve(lower_, diag_, upper_, rhs_, x_);
    std::fill(out.values.begin(), out.values.end(), 0.0);
    for (std::size_t j = 0; j < x_.size(); ++j) out.values[lo + j] = x_[j];
  }

 private:
  GridPtr grid_;
  std::vector<double> lower_, diag_, upper_, rhs_, x_;
  TridiagonalSolver<double> solver_;
};

double default_tau(const SolverOptions& opts, const EnergyModel& model, const RealField& u) {
  if (opts.tau > 0.0) return opts.tau;
  if (opts.preconditioner == Preconditioner::Sobolev) return kSobolevTau;
  const Grid& g = *model.grid();
  const double h = g.spacing();
  double umax = 0.0;
  for (double v : u.values) umax = std::max(umax, std::abs(v));
  double vmax = 0.0;
  for (double v : model.potential().values) vmax = std::max(vmax, v);
  // -Δ has spectral radius ~4/h^2; the quasilinear term stiffens it by 1 + 2k max u^2.
  const double stiffness = 1.0 + 2.0 * model.params().k * umax * umax + 0.25 * vmax * h * h;
  return 0.1 * h * h / 2.0 / stiffness;
}

struct Snapshot {
  double energy = 0.0;
  double gamma = 0.0;
  double residual = 0.0;
};

Snapshot measure(const EnergyModel& model, const RealField& u, RealField& grad, RealField& resid) {
  model.grad_E(u, grad);
  Snapshot s;
  s.energy = model.energy(u);
  s.gamma = model.inner(grad, u) / model.inner(u, u);
  for (std::size_t i = 0; i < u.size(); ++i) resid.values[i] = grad[i] - s.gamma * u[i];
  s.residual = weighted_norm(model, resid);
  return s;
}

GroundState package(const EnergyModel& model, const RealField& u, const Snapshot& s,
                    std::size_t iterations) {
  GroundState gs;
  gs.u0 = u;
  gs.m = s.energy;
  gs.gamma = s.gamma;
  gs.mu = -s.gamma;
  gs.residual = s.residual;
  gs.iterations = iterations;
  gs.regime = classify_regime(model.params());
  gs.values = model.evaluate(u, gs.mu);
  return gs;
}

}  // namespace

void SolverOptions::validate() const {
  if (tau < 0.0 || !std::isfinite(tau)) throw InvalidArgument("solver: tau must be > 0 (or 0 for auto)");
  if (!(energy_tol > 0.0) || !(residual_tol > 0.0))
    throw InvalidArgument("solver: tolerances must be > 0");
  if (max_iterations == 0) throw InvalidArgument("solver: max_iterations must be > 0");
  if (initializer.kind == Initializer::Kind::Gaussian && !(initializer.width > 0.0))
    throw InvalidArgument("solver: initializer width must be > 0");
  if (recenter_every > 0 && !(recenter_radius > 0.0))
    throw InvalidArgument("solver: recenter radius must be > 0");
}

void normalize_mass(RealField& u, double lambda) {
  const double mass = u.grid->integrate([&] {
    std::vector<double> sq(u.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = u[i] * u[i];
    return sq;
  }());
  if (!(mass > 0.0)) throw InvalidArgument("normalize_mass: zero field");
  const double scale = std::sqrt(2.0 * lambda / mass);
  for (double& v : u.values) v *= scale;
}

RealField initial_profile(const ModelParams& params, const GridPtr& grid, const Initializer& init) {
  RealField u;
  if (init.kind == Initializer::Kind::Custom) {
    if (!init.custom) throw InvalidArgument("custom initializer without a field");
    require_same_grid(init.custom->grid, grid, "initializer");
    u = *init.custom;
  } else {
    const double c = grid->is_line() ? init.center : 0.0;
    const double w2 = 2.0 * init.width * init.width;
    u = sample(grid, [&](double x) { return std::exp(-(x - c) * (x - c) / w2); });
  }
  if (!u.all_finite()) throw InvalidArgument("initializer has non-finite samples");
  pin_boundary(u);
  normalize_mass(u, params.lambda);
  return u;
}

double compute_multiplier(const RealField& u, const EnergyModel& model) {
  const double mass = model.inner(u, u);
  if (!(mass > 0.0)) throw InvalidArgument("compute_multiplier: zero field");
  const ModelParams& prm = model.params();
  const FunctionalValues f = model.evaluate(u);
  return (2.0 * f.F1 + 4.0 * prm.k * f.F3 - prm.p * prm.theta * f.F4) / mass;
}

double compute_multiplier(const RealField& u, const ModelParams& params) {
  return compute_multiplier(u, EnergyModel(params, u.grid));
}

GroundState solve(const ModelParams& params, const GridPtr& grid, const SolverOptions& opts) {
  opts.validate();
  const EnergyModel model(params, grid);
  if (opts.recenter_every > 0 && !grid->is_line())
    throw InvalidArgument("solver: recentering needs a line grid");

  RealField u = initial_profile(params, grid, opts.initializer);
  RealField grad(grid), resid(grid), dir(grid), trial(grid), pg(grid), pu(grid);
  std::optional<SobolevPreconditioner> precond;
  if (opts.preconditioner == Preconditioner::Sobolev) precond.emplace(model);

  double tau = default_tau(opts, model, u);
  Snapshot cur = measure(model, u, grad, resid);
  if (opts.on_iteration) opts.on_iteration({0, cur.energy, cur.residual, cur.gamma, tau});

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    if (precond) {
      // Tangential Sobolev gradient: P^{-1}g - β P^{-1}u with <u, d> = 0.
      precond->apply(grad, pg);
      precond->apply(u, pu);
      const double beta = model.inner(u, pg) / model.inner(u, pu);
      for (std::size_t i = 0; i < u.size(); ++i) dir.values[i] = pg[i] - beta * pu[i];
    } else {
      dir = resid;
    }

    int halvings = 0;
    for (;;) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i] - tau * dir[i];
        trial.values[i] = opts.enforce_nonnegative ? std::abs(v) : v;
      }
      normalize_mass(trial, params.lambda);
      const double e = model.energy(trial);
      if (e < kDivergenceEnergy)
        throw UnboundedBelow("energy fell below -1e12 at iteration " + std::to_string(it) +
                             " (" + classify_regime(params).explanation + ")");
      if (std::isfinite(e) && e <= cur.energy + kMonotoneSlack) break;
      tau *= 0.5;
      if (++halvings > kMaxHalvings)
        throw ConvergenceFailure("step size collapsed at iteration " + std::to_string(it),
                                 package(model, u, cur, it - 1));
    }
    std::swap(u, trial);
    if (opts.recenter_every > 0 && it % opts.recenter_every == 0) {
      u = recenter(u, opts.recenter_radius);
      normalize_mass(u, params.lambda);
    }
    const Snapshot next = measure(model, u, grad, resid);
    if (!u.all_finite())
      throw ConvergenceFailure("non-finite iterate at iteration " + std::to_string(it),
                               package(model, u, next, it));
    const double de = std::abs(next.energy - cur.energy);
    cur = next;
    if (opts.on_iteration) opts.on_iteration({it, cur.energy, cur.residual, cur.gamma, tau});
    if (de <= opts.energy_tol * std::max(1.0, std::abs(cur.energy)) &&
        cur.residual <= opts.residual_tol)
      return package(model, u, cur, it);
  }
  throw ConvergenceFailure("no convergence within " + std::to_string(opts.max_iterations) +
                               " iterations (residual " + std::to_string(cur.residual) + ")",
                           package(model, u, cur, opts.max_iterations));
}

double interpolate(const RealField& u, double x) {
  const Grid& g = *u.grid;
  if (!g.is_line()) throw UnsupportedOperation("interpolate: line grids only");
  const double pos = (x + g.extent()) / g.spacing();
  if (pos < 0.0 || pos > static_cast<double>(g.size() - 1)) return 0.0;
  const auto k = std::min(static_cast<std::size_t>(pos), g.size() - 2);
  const double t = pos - static_cast<double>(k);
  return (1.0 - t) * u[k] + t * u[k + 1];
}

ScalingProbe scaling_probe(const RealField& psi, const ModelParams& params,
                           std::span<const double> xis) {
  if (!psi.grid->is_line()) throw UnsupportedOperation("scaling_probe: line grids only");
  if (params.dimension != 1 || params.potential.kind != PotentialKind::Zero)
    throw InvalidArgument("scaling_probe: needs N=1 and V=0");
  const EnergyModel model(params, psi.grid);
  const double f2 = model.evaluate(psi).F2;
  if (std::abs(f2 - params.lambda) > 1e-8 * params.lambda)
    throw InvalidArgument("scaling_probe: psi must satisfy F2 = lambda");

  ScalingProbe probe;
  probe.a = model.gradient_norm2(psi);
  probe.b = model.density_gradient_norm2(psi);
  probe.c = model.power_integral(psi);
  const double k = params.k, theta = params.theta, p = params.p;
  for (double xi : xis) {
    if (!(xi > 0.0)) throw InvalidArgument("scaling_probe: xi must be > 0");
    const double amp = std::sqrt(xi);
    RealField scaled = sample(psi.grid, [&](double x) { return amp * interpolate(psi, xi * x); });
    ScalingSample s;
    s.xi = xi;
    s.numeric = model.evaluate(scaled).I;
    s.analytic = 0.5 * xi * xi * probe.a + 0.25 * k * xi * xi * xi * probe.b -
                 theta / p * std::pow(xi, 0.5 * p - 1.0) * probe.c;
    if (s.analytic < 0.0 && (!probe.negative_xi || xi < *probe.negative_xi)) probe.negative_xi = xi;
    probe.samples.push_back(s);
  }
  return probe;
}

Concentration concentration_diagnostic(const RealField& u, double radius) {
  const Grid& g = *u.grid;
  if (!g.is_line()) throw UnsupportedOperation("concentration_diagnostic: line grids only");
  if (!(radius > 0.0) || radius > g.extent())
    throw InvalidArgument("concentration_diagnostic: radius must lie in (0, L]");
  const std::size_t n = g.size();
  const double h = g.spacing();
  const auto reach = static_cast<std::size_t>(std::floor(radius / h + 1e-9));

  // prefix[i] = h * sum_{j < i} u_j^2
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + h * u[i] * u[i];

  Concentration best{-1.0, g.nodes()[0]};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i >= reach ? i - reach : 0;
    const std::size_t b = std::min(n - 1, i + reach);
    double q = 0.0;
    if (b > a) q = prefix[b + 1] - prefix[a] - 0.5 * h * (u[a] * u[a] + u[b] * u[b]);
    if (q > best.sup_local_mass) best = {q, g.nodes()[i]};
  }
  best.sup_local_mass = std::max(best.sup_local_mass, 0.0);
  return best;
}

RealField recenter(const RealField& u, double radius) {
  RealField out = shift(u, concentration_diagnostic(u, radius).y_star);
  pin_boundary(out);
  return out;
}

}  // namespace qlstab
