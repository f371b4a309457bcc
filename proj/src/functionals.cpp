#include "qlstab/functionals.hpp"

#include <cmath>
#include <string>

#include "qlstab/errors.hpp"
#include "qlstab/kernels.hpp"

namespace qlstab {

FunctionalId functional_id(std::string_view name) {
  if (name == "F1") return FunctionalId::F1;
  if (name == "F2") return FunctionalId::F2;
  if (name == "F3") return FunctionalId::F3;
  if (name == "F4") return FunctionalId::F4;
  throw InvalidArgument("unknown functional id '" + std::string(name) + "'");
}

double signed_power(double u, double p) noexcept {
  if (u == 0.0) return 0.0;
  const double a = std::abs(u);
  return std::copysign(std::pow(a, p - 1.0), u);
}

EnergyModel::EnergyModel(ModelParams params, GridPtr grid)
    : params_(std::move(params)), grid_(std::move(grid)) {
  if (!grid_) throw InvalidArgument("EnergyModel: null grid");
  params_.validate();
  require_compatible(params_, *grid_);
  potential_ = potential_values(params_, grid_);
}

void EnergyModel::check(const RealField& u, const char* where) const {
  require_same_grid(u.grid, grid_, where);
  if (u.size() != grid_->size())
    throw InvalidArgument(std::string(where) + ": sample count does not match grid");
}

double EnergyModel::inner(const RealField& a, const RealField& b) const {
  return kernels::weighted_dot(grid_->weights(), a.values, b.values);
}

double EnergyModel::gradient_norm2(const RealField& u) const {
  return kernels::edge_dot(grid_->faces(), grid_->spacing(), u.values, u.values);
}

double EnergyModel::density_gradient_norm2(const RealField& u) const {
  std::vector<double> rho(u.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = u[i] * u[i];
  return kernels::edge_dot(grid_->faces(), grid_->spacing(), rho, rho);
}

double EnergyModel::power_integral(const RealField& u) const {
  return kernels::weighted_pow(grid_->weights(), u.values, params_.p);
}

FunctionalValues EnergyModel::evaluate(const RealField& u, std::optional<double> mu) const {
  check(u, "evaluate");
  std::vector<double> rho(u.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = u[i] * u[i];
  const auto faces = grid_->faces();
  const double h = grid_->spacing();
  const double kinetic = 0.5 * gradient_norm2(u);
  const double trap = 0.5 * kernels::weighted_dot(grid_->weights(), potential_.values, rho);
  FunctionalValues f;
  f.F1 = kinetic + trap;
  f.F2 = 0.5 * inner(u, u);
  f.F3 = 0.25 * kernels::edge_dot(faces, h, rho, rho);
  f.F4 = power_integral(u) / params_.p;
  f.E = f.F1 + params_.k * f.F3 - params_.theta * f.F4;
  f.I = kinetic + params_.k * f.F3 - params_.theta * f.F4;
  if (mu) {
    f.F5 = f.F1 + *mu * f.F2 + params_.k * f.F3 - params_.theta * f.F4;
    f.F6 = 2.0 * f.F1 + 2.0 * *mu * f.F2 + 4.0 * params_.k * f.F3 -
           params_.p * params_.theta * f.F4;
  }
  return f;
}

double EnergyModel::energy(const RealField& u) const { return evaluate(u).E; }

RealField EnergyModel::grad_E(const RealField& u) const {
  RealField out(grid_);
  grad_E(u, out);
  return out;
}

void EnergyModel::grad_E(const RealField& u, RealField& out) const {
  check(u, "grad_E");
  const Grid& g = *grid_;
  const std::size_t n = g.size();
  if (out.grid != grid_ || out.size() != n) out = RealField(grid_);

  std::vector<double> rho(n), lap_u(n), lap_rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = u[i] * u[i];
  kernels::flux_laplacian(g.faces(), g.weights(), g.spacing(), g.first_free(), g.last_free(),
                          u.values, lap_u);
  kernels::flux_laplacian(g.faces(), g.weights(), g.spacing(), g.first_free(), g.last_free(),
                          rho, lap_rho);
  const double k = params_.k;
  const double theta = params_.theta;
  const double p = params_.p;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.is_pinned(i)) {
      out.values[i] = 0.0;
      continue;
    }
    out.values[i] = -lap_u[i] + potential_[i] * u[i] - k * lap_rho[i] * u[i] -
                    theta * signed_power(u[i], p);
  }
}

double EnergyModel::directional_derivative(const RealField& u, const RealField& v,
                                           FunctionalId which) const {
  check(u, "directional_derivative");
  check(v, "directional_derivative");
  const auto w = grid_->weights();
  const auto faces = grid_->faces();
  const double h = grid_->spacing();
  const std::size_t n = u.size();
  switch (which) {
    case FunctionalId::F1: {
      std::vector<double> vu(n);
      for (std::size_t i = 0; i < n; ++i) vu[i] = potential_[i] * u[i];
      return kernels::edge_dot(faces, h, u.values, v.values) + kernels::weighted_dot(w, vu, v.values);
    }
    case FunctionalId::F2:
      return kernels::weighted_dot(w, u.values, v.values);
    case FunctionalId::F3: {
      std::vector<double> rho(n), uv(n);
      for (std::size_t i = 0; i < n; ++i) {
        rho[i] = u[i] * u[i];
        uv[i] = u[i] * v[i];
      }
      return kernels::edge_dot(faces, h, rho, uv);
    }
    case FunctionalId::F4: {
      std::vector<double> nl(n);
      for (std::size_t i = 0; i < n; ++i) nl[i] = signed_power(u[i], params_.p);
      return kernels::weighted_dot(w, nl, v.values);
    }
  }
  throw InvalidArgument("unknown functional id");
}

FunctionalValues evaluate(const RealField& u, const ModelParams& params, std::optional<double> mu) {
  return EnergyModel(params, u.grid).evaluate(u, mu);
}

RealField grad_E(const RealField& u, const ModelParams& params) {
  return EnergyModel(params, u.grid).grad_E(u);
}

double directional_derivative(const RealField& u, const RealField& v, FunctionalId which,
                              const ModelParams& params) {
  return EnergyModel(params, u.grid).directional_derivative(u, v, which);
}

}  // namespace qlstab
