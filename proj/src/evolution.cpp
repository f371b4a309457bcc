#include "qlstab/evolution.hpp"

#include <cmath>
#include <string>

#include "qlstab/errors.hpp"
#include "qlstab/kernels.hpp"

namespace qlstab {
namespace {

using cplx = std::complex<double>;

// (2/p)(b^{p/2} - a^{p/2})/(b - a): the averaged |z|^{p-2} that makes the
// discrete potential energy telescope. Series near b = a avoids cancellation.
double averaged_power(double a, double b, double p) {
  const double q = 0.5 * p;
  const double mid = 0.5 * (a + b);
  if (mid <= 0.0) return 0.0;
  const double d = b - a;
  if (std::abs(d) <= 1e-4 * mid)
    return std::pow(mid, q - 1.0) * (1.0 + (q - 1.0) * (q - 2.0) * d * d / (24.0 * mid * mid));
  return (std::pow(b, q) - std::pow(a, q)) / (q * d);
}

ComplexField advance(Propagator& prop, const ComplexField& z, double dt, int depth) {
  try {
    return prop.step(z, dt);
  } catch (const StepFailure&) {
    if (depth >= prop.options().retry_budget) throw;
    const ComplexField half = advance(prop, z, 0.5 * dt, depth + 1);
    return advance(prop, half, 0.5 * dt, depth + 1);
  }
}

}  // namespace

void EvolutionOptions::validate() const {
  if (!(picard_tol > 0.0)) throw InvalidArgument("evolution: picard_tol must be > 0");
  if (max_sweeps < 1) throw InvalidArgument("evolution: max_sweeps must be >= 1");
  if (retry_budget < 0) throw InvalidArgument("evolution: retry_budget must be >= 0");
}

Propagator::Propagator(ModelParams params, GridPtr grid, EvolutionOptions opts)
    : model_(std::move(params), std::move(grid)), opts_(opts) {
  opts_.validate();
  const Grid& g = *model_.grid();
  const std::size_t n = g.size();
  const std::size_t m = g.last_free() - g.first_free() + 1;
  lower_.resize(m);
  diag_.resize(m);
  upper_.resize(m);
  rhs_.resize(m);
  x_.resize(m);
  rho_.resize(n);
  rho_next_.resize(n);
  rho_avg_.resize(n);
  lap_rho_.resize(n);
  coeff_.resize(n);
}

ConservedPair Propagator::conserved(const ComplexField& z) const {
  require_same_grid(z.grid, model_.grid(), "conserved_quantities");
  const Grid& g = *model_.grid();
  const ModelParams& prm = model_.params();
  const auto w = g.weights();
  std::vector<double> rho(z.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(z.values[i]);
  ConservedPair pair;
  pair.mass = kernels::weighted_norm2(w, z.values);
  const double kinetic = 0.5 * kernels::edge_norm2(g.faces(), g.spacing(), z.values);
  const double trap = 0.5 * kernels::weighted_dot(w, model_.potential().values, rho);
  const double quasi = 0.25 * kernels::edge_dot(g.faces(), g.spacing(), rho, rho);
  std::vector<double> modulus(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) modulus[i] = std::sqrt(rho[i]);
  const double power = kernels::weighted_pow(w, modulus, prm.p) / prm.p;
  pair.energy = kinetic + trap + prm.k * quasi - prm.theta * power;
  return pair;
}

ConservedPair conserved_quantities(const ComplexField& z, const ModelParams& params) {
  return Propagator(params, z.grid).conserved(z);
}

ComplexField Propagator::step(const ComplexField& z, double dt) {
  require_same_grid(z.grid, model_.grid(), "step");
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("step: dt must be finite and non-zero");
  const Grid& g = *model_.grid();
  const ModelParams& prm = model_.params();
  const std::size_t n = g.size();
  const std::size_t lo = g.first_free();
  const std::size_t hi = g.last_free();
  const double h = g.spacing();
  const auto w = g.weights();
  const auto s = g.faces();
  const auto& v = model_.potential().values;
  const double half = 0.5 * dt;
  const cplx I{0.0, 1.0};

  for (std::size_t i = 0; i < n; ++i) rho_[i] = std::norm(z.values[i]);

  ComplexField next = z;
  ComplexField candidate(z.grid);
  for (int sweep = 1; sweep <= opts_.max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      rho_next_[i] = std::norm(next.values[i]);
      rho_avg_[i] = 0.5 * (rho_[i] + rho_next_[i]);
    }
    kernels::flux_laplacian(s, w, h, lo, hi, rho_avg_, lap_rho_);
    for (std::size_t i = lo; i <= hi; ++i)
      coeff_[i] = v[i] - prm.k * lap_rho_[i] - prm.theta * averaged_power(rho_[i], rho_next_[i], prm.p);

    for (std::size_t i = lo; i <= hi; ++i) {
      const std::size_t j = i - lo;
      const double left = i > 0 ? s[i - 1] / h : 0.0;
      const double right = i + 1 < n ? s[i] / h : 0.0;
      const double a = left + right + w[i] * coeff_[i];
      diag_[j] = {w[i], half * a};
      lower_[j] = {0.0, -half * left};
      upper_[j] = {0.0, -half * right};
      cplx hz = a * z.values[i];
      if (i > 0) hz -= left * z.values[i - 1];
      if (i + 1 < n) hz -= right * z.values[i + 1];
      rhs_[j] = w[i] * z.values[i] - I * half * hz;
    }
    solver_.solve(lower_, diag_, upper_, rhs_, x_);

    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx value = (i < lo || i > hi) ? cplx{} : x_[i - lo];
      change += w[i] * std::norm(value - next.values[i]);
      candidate.values[i] = value;
    }
    std::swap(next.values, candidate.values);
    last_sweeps_ = sweep;
    last_update_ = std::sqrt(change);
    if (!std::isfinite(last_update_)) break;
    if (last_update_ <= opts_.picard_tol) return next;
  }
  throw StepFailure("Picard iteration did not converge in " + std::to_string(opts_.max_sweeps) +
                    " sweeps (last update " + std::to_string(last_update_) + ", dt " +
                    std::to_string(dt) + ")");
}

EvolutionState step(const EvolutionState& s, const EvolutionOptions& opts) {
  if (!(s.dt > 0.0)) throw InvalidArgument("step: dt must be > 0");
  Propagator prop(s.params, s.z.grid, opts);
  EvolutionState out = s;
  out.z = advance(prop, s.z, s.dt, 0);
  out.t = s.t + s.dt;
  out.monitors.push_back({out.t, prop.conserved(out.z)});
  return out;
}

Trajectory evolve(const ComplexField& z0, const ModelParams& params, const EvolveRequest& req) {
  if (req.duration < 0.0 || !std::isfinite(req.duration))
    throw InvalidArgument("evolve: duration must be >= 0");
  if (!(req.dt > 0.0)) throw InvalidArgument("evolve: dt must be > 0");
  if (req.sample_every == 0) throw InvalidArgument("evolve: sample_every must be >= 1");

  Propagator prop(params, z0.grid, req.options);
  Trajectory tr;
  ComplexField z = z0;
  pin_boundary(z);
  const ConservedPair initial = prop.conserved(z);

  const auto record = [&](double t) {
    const ConservedPair pair = prop.conserved(z);
    tr.samples.push_back({t, pair});
    if (req.keep_snapshots) tr.snapshots.push_back(z);
    if (req.on_sample) req.on_sample(t, z);
    const double dm = std::abs(pair.mass - initial.mass);
    const double de = std::abs(pair.energy - initial.energy);
    tr.max_rel_mass_drift = std::max(tr.max_rel_mass_drift, initial.mass > 0.0 ? dm / initial.mass : dm);
    tr.max_abs_energy_drift = std::max(tr.max_abs_energy_drift, de);
    const double scale = std::abs(initial.energy);
    tr.max_rel_energy_drift = std::max(tr.max_rel_energy_drift, scale > 0.0 ? de / scale : de);
  };

  record(0.0);
  if (req.duration > 0.0) {
    const auto steps = static_cast<std::size_t>(std::ceil(req.duration / req.dt - 1e-9));
    const double dt = req.duration / static_cast<double>(steps);
    for (std::size_t k = 1; k <= steps; ++k) {
      try {
        z = advance(prop, z, dt, 0);
      } catch (const StepFailure& e) {
        tr.failed = true;
        tr.failure = e.what();
        break;
      }
      tr.steps = k;
      tr.t_end = static_cast<double>(k) * dt;
      if (k % req.sample_every == 0 || k == steps) record(tr.t_end);
    }
  }
  tr.final_state = z;
  return tr;
}

}  // namespace qlstab
