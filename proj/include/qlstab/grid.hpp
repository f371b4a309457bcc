#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace qlstab {

enum class GridKind { Line, Radial };

/// Uniform 1D line grid on [-L, L] or radial grid on [0, Rmax] for N = 2, 3.
///
/// Every node carries a cell measure (weights) and every edge i+1/2 a surface
/// measure (faces): 1 on the line, omega_N r_{i+1/2}^{N-1} on radial grids.
/// Nodes outside [first_free(), last_free()] are Dirichlet nodes pinned to zero:
/// both ends of a line grid, the outer node of a radial grid.
class Grid {
 public:
  static std::shared_ptr<const Grid> line(double half_width, std::size_t n);
  static std::shared_ptr<const Grid> radial(int dimension, double rmax, std::size_t n);

  GridKind kind() const noexcept { return kind_; }
  bool is_line() const noexcept { return kind_ == GridKind::Line; }
  int dimension() const noexcept { return dimension_; }
  double extent() const noexcept { return extent_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return h_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> faces() const noexcept { return faces_; }

  std::size_t first_free() const noexcept { return first_free_; }
  std::size_t last_free() const noexcept { return last_free_; }
  bool is_pinned(std::size_t i) const noexcept { return i < first_free_ || i > last_free_; }

  /// Quadrature sum_i w_i f_i.
  double integrate(std::span<const double> f) const;

  bool same_as(const Grid& other) const noexcept;

 private:
  Grid() = default;

  GridKind kind_ = GridKind::Line;
  int dimension_ = 1;
  double extent_ = 0.0;
  double h_ = 0.0;
  std::size_t first_free_ = 0;
  std::size_t last_free_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> faces_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real profile u(x) sampled on a grid.
struct RealField {
  GridPtr grid;
  std::vector<double> values;

  RealField() = default;
  explicit RealField(GridPtr g);
  RealField(GridPtr g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  bool all_finite() const noexcept;
};

/// Complex wavefunction z(x) sampled on a grid.
struct ComplexField {
  GridPtr grid;
  std::vector<std::complex<double>> values;

  ComplexField() = default;
  explicit ComplexField(GridPtr g);
  ComplexField(GridPtr g, std::vector<std::complex<double>> v);
  /// Lifts a real field to z = u + 0i.
  explicit ComplexField(const RealField& u);

  std::size_t size() const noexcept { return values.size(); }
  bool all_finite() const noexcept;
  RealField real() const;
  RealField imag() const;
  RealField modulus_squared() const;
};

/// Samples f at the grid nodes.
template <class F>
RealField sample(const GridPtr& g, F&& f) {
  RealField out(g);
  const auto x = g->nodes();
  for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = f(x[i]);
  return out;
}

/// Throws InvalidArgument unless both fields live on the same grid.
void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where);

double integrate(const Grid& g, std::span<const double> f);

RealField laplacian(const RealField& u);
ComplexField laplacian(const ComplexField& z);

/// Central differences inside, one-sided at both ends.
RealField first_derivative(const RealField& u);
ComplexField first_derivative(const ComplexField& z);

/// x -> u(x + xi) by linear interpolation, zero outside [-L, L]. Line grids only.
RealField shift(const RealField& u, double xi);
ComplexField shift(const ComplexField& z, double xi);

/// Sets the Dirichlet nodes to zero.
void pin_boundary(RealField& u);
void pin_boundary(ComplexField& z);

}  // namespace qlstab
