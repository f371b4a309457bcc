#include "qlstab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qlstab/errors.hpp"
#include "qlstab/kernels.hpp"

namespace qlstab {

std::shared_ptr<const Grid> Grid::line(double half_width, std::size_t n) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("line grid: half-width L must be positive");
  if (n < 3) throw InvalidArgument("line grid: need at least 3 nodes");

  auto g = std::shared_ptr<Grid>(new Grid());
  g->kind_ = GridKind::Line;
  g->dimension_ = 1;
  g->extent_ = half_width;
  const double cells = static_cast<double>(n - 1);
  g->h_ = 2.0 * half_width / cells;
  g->nodes_.resize(n);
  g->weights_.assign(n, g->h_);
  g->faces_.assign(n - 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Symmetric about zero: node (n-1)/2 is exactly 0 for odd n.
    g->nodes_[i] = half_width * (2.0 * static_cast<double>(i) - cells) / cells;
  }
  g->weights_.front() = g->weights_.back() = 0.5 * g->h_;
  g->first_free_ = 1;
  g->last_free_ = n - 2;
  return g;
}

std::shared_ptr<const Grid> Grid::radial(int dimension, double rmax, std::size_t n) {
  if (dimension != 2 && dimension != 3)
    throw InvalidArgument("radial grid: dimension must be 2 or 3, got " +
                          std::to_string(dimension));
  if (!(rmax > 0.0) || !std::isfinite(rmax))
    throw InvalidArgument("radial grid: Rmax must be positive");
  if (n < 3) throw InvalidArgument("radial grid: need at least 3 nodes");

  auto g = std::shared_ptr<Grid>(new Grid());
  g->kind_ = GridKind::Radial;
  g->dimension_ = dimension;
  g->extent_ = rmax;
  const double cells = static_cast<double>(n - 1);
  const double h = rmax / cells;
  g->h_ = h;
  const double omega = dimension == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  const auto shell = [&](double r) { return omega * std::pow(r, dimension) / dimension; };

  g->nodes_.resize(n);
  g->weights_.resize(n);
  g->faces_.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) g->nodes_[i] = rmax * static_cast<double>(i) / cells;
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double r_mid = (static_cast<double>(e) + 0.5) * h;
    g->faces_[e] = omega * std::pow(r_mid, dimension - 1);
  }
  // Cell volumes: [0, h/2], [r_i - h/2, r_i + h/2], [R - h/2, R].
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? 0.0 : (static_cast<double>(i) - 0.5) * h;
    const double hi = i + 1 == n ? rmax : (static_cast<double>(i) + 0.5) * h;
    g->weights_[i] = shell(hi) - shell(lo);
  }
  g->first_free_ = 0;
  g->last_free_ = n - 2;
  return g;
}

double Grid::integrate(std::span<const double> f) const {
  if (f.size() != size())
    throw InvalidArgument("integrate: expected " + std::to_string(size()) + " values, got " +
                          std::to_string(f.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
  return s;
}

bool Grid::same_as(const Grid& other) const noexcept {
  return this == &other || (kind_ == other.kind_ && dimension_ == other.dimension_ &&
                            extent_ == other.extent_ && size() == other.size());
}

double integrate(const Grid& g, std::span<const double> f) { return g.integrate(f); }

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where) {
  if (!a || !b || !a->same_as(*b))
    throw InvalidArgument(std::string(where) + ": fields live on different grids");
}

RealField::RealField(GridPtr g) : grid(std::move(g)), values(grid ? grid->size() : 0, 0.0) {}

RealField::RealField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid || values.size() != grid->size())
    throw InvalidArgument("RealField: sample count does not match grid");
}

bool RealField::all_finite() const noexcept {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

ComplexField::ComplexField(GridPtr g) : grid(std::move(g)), values(grid ? grid->size() : 0) {}

ComplexField::ComplexField(GridPtr g, std::vector<std::complex<double>> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid || values.size() != grid->size())
    throw InvalidArgument("ComplexField: sample count does not match grid");
}

ComplexField::ComplexField(const RealField& u) : grid(u.grid), values(u.values.begin(), u.values.end()) {}

bool ComplexField::all_finite() const noexcept {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

RealField ComplexField::real() const {
  RealField out(grid);
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = values[i].real();
  return out;
}

RealField ComplexField::imag() const {
  RealField out(grid);
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = values[i].imag();
  return out;
}

RealField ComplexField::modulus_squared() const {
  RealField out(grid);
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = std::norm(values[i]);
  return out;
}

RealField laplacian(const RealField& u) {
  const Grid& g = *u.grid;
  RealField out(u.grid);
  kernels::flux_laplacian(g.faces(), g.weights(), g.spacing(), g.first_free(), g.last_free(),
                          u.values, out.values);
  return out;
}

ComplexField laplacian(const ComplexField& z) {
  const RealField re = laplacian(z.real());
  const RealField im = laplacian(z.imag());
  ComplexField out(z.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = {re[i], im[i]};
  return out;
}

namespace {

template <class T>
std::vector<T> central_difference(std::span<const T> u, double h) {
  const std::size_t n = u.size();
  std::vector<T> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

// Linear interpolation of x -> f(x + xi) on a uniform line grid.
template <class T>
std::vector<T> shifted(std::span<const T> f, double xi, double h) {
  const std::size_t n = f.size();
  std::vector<T> out(n, T{});
  const double offset = xi / h;
  constexpr double snap = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i) + offset;
    double base = std::floor(pos);
    double t = pos - base;
    if (t > 1.0 - snap) {
      base += 1.0;
      t = 0.0;
    } else if (t < snap) {
      t = 0.0;
    }
    if (base < 0.0 || base > static_cast<double>(n - 1)) continue;
    const auto k = static_cast<std::size_t>(base);
    T v = (1.0 - t) * f[k];
    if (t > 0.0 && k + 1 < n) v += t * f[k + 1];
    out[i] = v;
  }
  return out;
}

void require_line(const Grid& g, const char* where) {
  if (!g.is_line()) throw UnsupportedOperation(std::string(where) + ": line grids only");
}

}  // namespace

RealField first_derivative(const RealField& u) {
  return RealField(u.grid, central_difference<double>(u.values, u.grid->spacing()));
}

ComplexField first_derivative(const ComplexField& z) {
  return ComplexField(z.grid,
                      central_difference<std::complex<double>>(z.values, z.grid->spacing()));
}

RealField shift(const RealField& u, double xi) {
  require_line(*u.grid, "shift");
  return RealField(u.grid, shifted<double>(u.values, xi, u.grid->spacing()));
}

ComplexField shift(const ComplexField& z, double xi) {
  require_line(*z.grid, "shift");
  return ComplexField(z.grid, shifted<std::complex<double>>(z.values, xi, z.grid->spacing()));
}

void pin_boundary(RealField& u) {
  const Grid& g = *u.grid;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (g.is_pinned(i)) u.values[i] = 0.0;
}

void pin_boundary(ComplexField& z) {
  const Grid& g = *z.grid;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (g.is_pinned(i)) z.values[i] = 0.0;
}

}  // namespace qlstab
