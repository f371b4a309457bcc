#pragma once

#include <optional>
#include <string_view>

#include "qlstab/grid.hpp"
#include "qlstab/model.hpp"

namespace qlstab {

/// F1 = 1/2 ∫(|∇u|^2 + V u^2), F2 = 1/2 ∫u^2, F3 = 1/4 ∫|∇(u^2)|^2, F4 = 1/p ∫|u|^p,
/// E = F1 + k F3 - θ F4, I = E without the potential term. F5 and F6 only
/// when a frequency μ is supplied.
struct FunctionalValues {
  double F1 = 0.0;
  double F2 = 0.0;
  double F3 = 0.0;
  double F4 = 0.0;
  double E = 0.0;
  double I = 0.0;
  std::optional<double> F5;
  std::optional<double> F6;
};

enum class FunctionalId { F1, F2, F3, F4 };

/// Parses "F1".."F4"; anything else is InvalidArgument.
FunctionalId functional_id(std::string_view name);

/// Discrete energy on one grid with the potential sampled once.
///
/// Gradients are taken in the quadrature inner product: grad_i = (1/w_i) ∂E/∂u_i
/// on free nodes and zero on Dirichlet nodes, so <grad_E(u), v> is the exact
/// directional derivative of the discrete E for every v vanishing on the boundary.
class EnergyModel {
 public:
  EnergyModel(ModelParams params, GridPtr grid);

  const ModelParams& params() const noexcept { return params_; }
  const GridPtr& grid() const noexcept { return grid_; }
  const RealField& potential() const noexcept { return potential_; }

  FunctionalValues evaluate(const RealField& u, std::optional<double> mu = std::nullopt) const;
  double energy(const RealField& u) const;

  /// -Δu + Vu - k Δ(u^2) u - θ |u|^{p-2} u.
  RealField grad_E(const RealField& u) const;
  /// grad_E written into out, reusing its storage.
  void grad_E(const RealField& u, RealField& out) const;

  double directional_derivative(const RealField& u, const RealField& v, FunctionalId which) const;

  /// ∫|∇u|^2, ∫|∇(u^2)|^2 and ∫|u|^p.
  double gradient_norm2(const RealField& u) const;
  double density_gradient_norm2(const RealField& u) const;
  double power_integral(const RealField& u) const;

  /// <a, b> = ∫ a b.
  double inner(const RealField& a, const RealField& b) const;

 private:
  void check(const RealField& u, const char* where) const;

  ModelParams params_;
  GridPtr grid_;
  RealField potential_;
};

FunctionalValues evaluate(const RealField& u, const ModelParams& params,
                          std::optional<double> mu = std::nullopt);
RealField grad_E(const RealField& u, const ModelParams& params);
double directional_derivative(const RealField& u, const RealField& v, FunctionalId which,
                              const ModelParams& params);

/// |u|^{p-2} u with the continuous limit 0 at u = 0.
double signed_power(double u, double p) noexcept;

}  // namespace qlstab
