#pragma once

// Shared generators and reference computations for the test binaries.
// Nothing here calls into the library's numerics except to build grids and fields.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <algorithm>
#include <numbers>
#include <vector>

#include "qlstab/grid.hpp"

namespace testing_support {

using qlstab::ComplexField;
using qlstab::GridPtr;
using qlstab::RealField;

/// SplitMix64, so generated cases are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Sum of a few random Gaussian bumps times a slow oscillation; smooth and
/// well inside the domain, then pinned.
inline RealField smooth_field(const GridPtr& g, Rng& rng, double reach) {
  const int bumps = 2 + static_cast<int>(rng.next() % 3);
  std::vector<double> amp, centre, width, freq;
  for (int b = 0; b < bumps; ++b) {
    amp.push_back(rng.uniform(-1.0, 1.0));
    centre.push_back(g->is_line() ? rng.uniform(-reach, reach) : 0.0);
    width.push_back(rng.uniform(0.6, 2.0));
    freq.push_back(rng.uniform(0.0, 1.5));
  }
  RealField u(g);
  const auto x = g->nodes();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = 0.0;
    for (int b = 0; b < bumps; ++b) {
      const double d = x[i] - centre[b];
      v += amp[b] * std::exp(-d * d / (2.0 * width[b] * width[b])) * std::cos(freq[b] * d);
    }
    u.values[i] = v;
  }
  qlstab::pin_boundary(u);
  return u;
}

/// Trapezoid rule on the line written out directly.
inline double trapezoid(const GridPtr& g, const std::vector<double>& f) {
  const double h = g->spacing();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i == 0 || i + 1 == f.size() ? 0.5 : 1.0) * f[i];
  return s * h;
}

/// Discrete H1 norm squared on a line grid: trapezoid mass term plus
/// forward-difference gradient term, written independently of the library.
inline double h1_norm2_line(const GridPtr& g, const std::vector<std::complex<double>>& f) {
  std::vector<double> m(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) m[i] = std::norm(f[i]);
  double grad = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) grad += std::norm(f[i + 1] - f[i]);
  return trapezoid(g, m) + grad / g->spacing();
}

/// <a, b> for the same discrete H1 norm, conjugate-linear in a.
inline std::complex<double> h1_inner_line(const GridPtr& g, const std::vector<std::complex<double>>& a,
                                          const std::vector<std::complex<double>>& b) {
  std::complex<double> mass{}, grad{};
  const auto n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    mass += (i == 0 || i + 1 == n ? 0.5 : 1.0) * std::conj(a[i]) * b[i];
  for (std::size_t i = 0; i + 1 < n; ++i) grad += std::conj(a[i + 1] - a[i]) * (b[i + 1] - b[i]);
  return mass * g->spacing() + grad / g->spacing();
}

/// Linear interpolation of u at x + xi, zero off the grid.
inline std::vector<double> shifted_line(const RealField& u, double xi) {
  const GridPtr& g = u.grid;
  const double h = g->spacing();
  const double L = g->extent();
  const auto n = u.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = (g->nodes()[i] + xi + L) / h;
    const double fl = std::floor(pos);
    const double t = pos - fl;
    const auto j = static_cast<long long>(fl);
    const auto at = [&](long long k) { return (k >= 0 && k < static_cast<long long>(n)) ? u[static_cast<std::size_t>(k)] : 0.0; };
    out[i] = (1.0 - t) * at(j) + t * at(j + 1);
  }
  return out;
}

/// psi(x) = sqrt(2 lambda) pi^{-1/4} exp(-x^2/2) and its closed-form functionals.
struct GaussianForms {
  double lambda;
  double F1() const { return 0.5 * lambda; }
  double F2() const { return lambda; }
  double F3() const { return lambda * lambda / std::sqrt(2.0 * std::numbers::pi); }
  /// (1/p) ∫ψ^p with ∫e^{-p x^2/2} = sqrt(2π/p).
  double F4(double p) const {
    const double amp = std::sqrt(2.0 * lambda) * std::pow(std::numbers::pi, -0.25);
    return std::pow(amp, p) * std::sqrt(2.0 * std::numbers::pi / p) / p;
  }
};

inline RealField gaussian_psi(const GridPtr& g, double lambda) {
  const double amp = std::sqrt(2.0 * lambda) * std::pow(std::numbers::pi, -0.25);
  return qlstab::sample(g, [&](double x) { return amp * std::exp(-0.5 * x * x); });
}

/// min over a uniform ξ lattice of min over η of ‖z - e^{iη} u(· + ξ)‖_H1.
/// For fixed ξ the phase optimum is closed form: ‖z‖² + ‖s‖² - 2|<s, z>|.
inline double orbit_lattice_min(const qlstab::ComplexField& z, const qlstab::RealField& u, double xi_lo,
                                double xi_hi, std::size_t steps) {
  const GridPtr& g = z.grid;
  const double zz = h1_norm2_line(g, z.values);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a <= steps; ++a) {
    const double xi = xi_lo + (xi_hi - xi_lo) * static_cast<double>(a) / static_cast<double>(steps);
    const std::vector<double> s = shifted_line(u, xi);
    const std::vector<std::complex<double>> sc(s.begin(), s.end());
    best = std::min(best, zz + h1_norm2_line(g, sc) - 2.0 * std::abs(h1_inner_line(g, sc, z.values)));
  }
  return std::sqrt(std::max(best, 0.0));
}

}  // namespace testing_support
