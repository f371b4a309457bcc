#include "qlstab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlstab/errors.hpp"

namespace qlstab {

void ModelParams::validate() const {
  if (dimension < 1 || dimension > 3) throw InvalidArgument("N must be 1, 2 or 3");
  if (!(k >= 0.0)) throw InvalidArgument("k must be >= 0");
  if (!(theta > 0.0)) throw InvalidArgument("theta must be > 0");
  if (!(p > 2.0)) throw InvalidArgument("p must be > 2");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  if (dimension == 1 && potential.kind != PotentialKind::Zero)
    throw InvalidArgument("N=1 requires the zero potential");
  if (potential.kind == PotentialKind::TabulatedRadial) {
    if (potential.radii.empty() || potential.radii.size() != potential.values.size())
      throw InvalidArgument("tabulated potential needs matching, non-empty r and V columns");
    if (!std::is_sorted(potential.radii.begin(), potential.radii.end()))
      throw InvalidArgument("tabulated potential radii must be increasing");
    for (double v : potential.values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidArgument("tabulated potential has a negative or non-finite entry");
  }
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::StableRadial: return "StableRadial";
    case Regime::Stable1D: return "Stable1D";
    case Regime::OutOfTheory: return "OutOfTheory";
  }
  return "?";
}

const char* to_string(PotentialKind k) noexcept {
  switch (k) {
    case PotentialKind::Zero: return "zero";
    case PotentialKind::Harmonic: return "harmonic";
    case PotentialKind::TabulatedRadial: return "tabulated";
  }
  return "?";
}

RegimeTag classify_regime(const ModelParams& params) {
  const int n = params.dimension;
  const double p = params.p;
  std::ostringstream why;
  if (n >= 2) {
    const double critical = 2.0 + 4.0 / n;
    if (p > 2.0 && p < critical && params.k > 0.0) {
      why << "N=" << n << ", 2 < p=" << p << " < " << critical << ", k>0: radial minimizer exists and its set is orbitally stable";
      return {Regime::StableRadial, why.str()};
    }
    why << "N=" << n << " needs 2 < p < " << critical << " and k > 0 (p=" << p << ", k=" << params.k << ")";
    return {Regime::OutOfTheory, why.str()};
  }
  if (p >= 4.0 && p < 6.0) {
    why << "N=1, 4 <= p=" << p << " < 6: positive ground state, stable up to phase and translation";
    return {Regime::Stable1D, why.str()};
  }
  why << "N=1 needs 4 <= p < 6 (p=" << p << ")";
  return {Regime::OutOfTheory, why.str()};
}

void require_compatible(const ModelParams& params, const Grid& grid) {
  if (params.dimension == 1 && !grid.is_line())
    throw InvalidArgument("N=1 requires a line grid");
  if (params.dimension >= 2 && (grid.is_line() || grid.dimension() != params.dimension))
    throw InvalidArgument("N=" + std::to_string(params.dimension) +
                          " requires a radial grid of the same dimension");
}

RealField potential_values(const ModelParams& params, const GridPtr& grid) {
  RealField v(grid);
  const auto x = grid->nodes();
  const Potential& pot = params.potential;
  switch (pot.kind) {
    case PotentialKind::Zero:
      break;
    case PotentialKind::Harmonic:
      for (std::size_t i = 0; i < x.size(); ++i) v.values[i] = x[i] * x[i];
      break;
    case PotentialKind::TabulatedRadial: {
      if (grid->is_line()) throw InvalidArgument("tabulated potential needs a radial grid");
      for (double value : pot.values)
        if (!(value >= 0.0)) throw InvalidArgument("tabulated potential has a negative entry");
      if (pot.radii.empty() || pot.radii.size() != pot.values.size())
        throw InvalidArgument("tabulated potential needs matching, non-empty r and V columns");
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = x[i];
        auto hi = std::upper_bound(pot.radii.begin(), pot.radii.end(), r);
        if (hi == pot.radii.begin()) {
          v.values[i] = pot.values.front();
        } else if (hi == pot.radii.end()) {
          v.values[i] = pot.values.back();
        } else {
          const auto j = static_cast<std::size_t>(hi - pot.radii.begin());
          const double t = (r - pot.radii[j - 1]) / (pot.radii[j] - pot.radii[j - 1]);
          v.values[i] = (1.0 - t) * pot.values[j - 1] + t * pot.values[j];
        }
      }
      break;
    }
  }
  return v;
}

}  // namespace qlstab
