#pragma once

#include <string>
#include <vector>

#include "qlstab/grid.hpp"

namespace qlstab {

enum class PotentialKind { Zero, Harmonic, TabulatedRadial };

/// V(x) >= 0. Harmonic is |x|^2; a tabulated potential is a list of (r, V)
/// pairs interpolated linearly and held constant past the last radius.
struct Potential {
  PotentialKind kind = PotentialKind::Zero;
  std::vector<double> radii;
  std::vector<double> values;
};

/// Parameters of i z_t = -Δz + Vz - k Δ(|z|^2) z - θ |z|^{p-2} z and of the
/// mass constraint (1/2)∫|u|^2 = λ.
struct ModelParams {
  int dimension = 1;
  double k = 1.0;
  double theta = 1.0;
  double p = 4.0;
  double lambda = 0.5;
  Potential potential;

  /// Throws InvalidArgument naming the first violated invariant.
  void validate() const;
};

enum class Regime { StableRadial, Stable1D, OutOfTheory };

struct RegimeTag {
  Regime regime = Regime::OutOfTheory;
  std::string explanation;
};

const char* to_string(Regime r) noexcept;
const char* to_string(PotentialKind k) noexcept;

/// Depends on (N, p, k) only.
RegimeTag classify_regime(const ModelParams& params);

RealField potential_values(const ModelParams& params, const GridPtr& grid);

/// Throws InvalidArgument if the grid kind/dimension does not fit the parameters.
void require_compatible(const ModelParams& params, const Grid& grid);

}  // namespace qlstab
