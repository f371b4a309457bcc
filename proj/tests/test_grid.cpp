#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qlstab/errors.hpp"
#include "qlstab/grid.hpp"
#include "support.hpp"

using namespace qlstab;
using testing_support::Rng;

TEST_CASE("line grid nodes and spacing") {
  const auto g = Grid::line(10.0, 5);
  CHECK(g->spacing() == 5.0);
  const double expected[] = {-10.0, -5.0, 0.0, 5.0, 10.0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(g->nodes()[i] == expected[i]);
  CHECK(g->is_pinned(0));
  CHECK(g->is_pinned(4));
  CHECK_FALSE(g->is_pinned(2));
}

TEST_CASE("grid construction rejects bad arguments") {
  CHECK_THROWS_AS(Grid::line(0.0, 5), InvalidArgument);
  CHECK_THROWS_AS(Grid::line(-1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(Grid::line(1.0, 2), InvalidArgument);
  CHECK_THROWS_AS(Grid::radial(4, 1.0, 11), InvalidArgument);
  CHECK_THROWS_AS(Grid::radial(1, 1.0, 11), InvalidArgument);
  CHECK_THROWS_AS(Grid::radial(2, 0.0, 11), InvalidArgument);
}

TEST_CASE("line quadrature of a Gaussian") {
  const auto g = Grid::line(10.0, 2001);
  const RealField f = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(std::abs(g->integrate(f.values) - std::sqrt(std::numbers::pi)) <= 1e-6);
  const std::vector<double> zeros(g->size(), 0.0);
  CHECK(g->integrate(zeros) == 0.0);
  CHECK_THROWS_AS(g->integrate(std::vector<double>(3, 1.0)), InvalidArgument);
}

TEST_CASE("radial quadrature gives disk area and ball volume") {
  const auto g2 = Grid::radial(2, 1.0, 2001);
  const auto g3 = Grid::radial(3, 1.0, 2001);
  CHECK(std::abs(g2->integrate(std::vector<double>(g2->size(), 1.0)) - std::numbers::pi) <= 1e-6);
  CHECK(std::abs(g3->integrate(std::vector<double>(g3->size(), 1.0)) - 4.0 * std::numbers::pi / 3.0) <= 1e-5);
  for (double w : g3->weights()) CHECK(w >= 0.0);
}

TEST_CASE("quadrature converges at second order") {
  // ∫ r^2 e^{-r^2} over R^3 = (3/2) π^{3/2}; the origin and cutoff contributions are smooth.
  const double exact3 = 1.5 * std::pow(std::numbers::pi, 1.5);
  const auto err3 = [&](std::size_t n) {
    const auto g = Grid::radial(3, 8.0, n);
    const RealField f = sample(g, [](double r) { return r * r * std::exp(-r * r); });
    return std::abs(g->integrate(f.values) - exact3);
  };
  const double r3 = err3(201) / err3(401);
  CHECK(r3 > 3.5);
  CHECK(r3 < 4.5);

  // The trapezoid rule is spectrally accurate on decaying Gaussians, so use e^x on [-2, 2].
  const auto errl = [&](std::size_t n) {
    const auto g = Grid::line(2.0, n);
    const RealField f = sample(g, [](double x) { return std::exp(x); });
    return std::abs(g->integrate(f.values) - (std::exp(2.0) - std::exp(-2.0)));
  };
  const double rl = errl(101) / errl(201);
  CHECK(rl > 3.9);
  CHECK(rl < 4.1);
}

TEST_CASE("laplacian exactness") {
  const auto g = Grid::line(3.0, 61);
  const RealField c = sample(g, [](double) { return 2.5; });
  const RealField lc = laplacian(c);
  for (std::size_t i = 1; i + 1 < g->size(); ++i) CHECK(std::abs(lc[i]) <= 1e-12);

  const RealField q = sample(g, [](double x) { return x * x; });
  const RealField lq = laplacian(q);
  for (std::size_t i = 1; i + 1 < g->size(); ++i) CHECK(lq[i] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lq[0] == 0.0);
  CHECK(lq[g->size() - 1] == 0.0);
}

TEST_CASE("radial laplacian of a Gaussian converges at second order") {
  const auto err = [](std::size_t n) {
    const auto g = Grid::radial(3, 6.0, n);
    const RealField u = sample(g, [](double r) { return std::exp(-r * r); });
    const RealField lu = laplacian(u);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < g->size(); ++i) {
      const double r = g->nodes()[i];
      worst = std::max(worst, std::abs(lu[i] - (4.0 * r * r - 6.0) * std::exp(-r * r)));
    }
    return worst;
  };
  const double e1 = err(301), e2 = err(601);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 > 3.5);
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("radial laplacian is exact on r^2 including the origin") {
  for (int N : {2, 3}) {
    const auto g = Grid::radial(N, 2.0, 41);
    const RealField lq = laplacian(sample(g, [](double r) { return r * r; }));
    for (std::size_t i = 0; i + 1 < g->size(); ++i)
      CHECK(lq[i] == doctest::Approx(2.0 * N).epsilon(1e-11));
  }
}

TEST_CASE("laplacian is symmetric in the quadrature inner product") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const bool radial = trial % 2 == 1;
    const auto g = radial ? Grid::radial(2 + trial % 4 / 2, 6.0, 301) : Grid::line(6.0, 301);
    const RealField u = testing_support::smooth_field(g, rng, 3.0);
    const RealField v = testing_support::smooth_field(g, rng, 3.0);
    const RealField lu = laplacian(u), lv = laplacian(v);
    std::vector<double> a(g->size()), b(g->size()), uu(g->size()), vv(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
      a[i] = lu[i] * v[i];
      b[i] = u[i] * lv[i];
      uu[i] = u[i] * u[i];
      vv[i] = v[i] * v[i];
    }
    const double scale = std::sqrt(g->integrate(uu) * g->integrate(vv));
    CHECK(std::abs(g->integrate(a) - g->integrate(b)) <= 1e-10 * scale);
  }
}

TEST_CASE("complex laplacian acts componentwise") {
  const auto g = Grid::line(4.0, 81);
  const RealField re = sample(g, [](double x) { return std::sin(x); });
  const RealField im = sample(g, [](double x) { return x * x * x; });
  ComplexField z(g);
  for (std::size_t i = 0; i < g->size(); ++i) z.values[i] = {re[i], im[i]};
  const ComplexField lz = laplacian(z);
  const RealField lre = laplacian(re), lim = laplacian(im);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(lz.values[i].real() == lre[i]);
    CHECK(lz.values[i].imag() == lim[i]);
  }
}

TEST_CASE("first derivative") {
  const auto g = Grid::line(std::numbers::pi, 201);
  const RealField c = first_derivative(sample(g, [](double) { return 1.0; }));
  for (double v : c.values) CHECK(std::abs(v) <= 1e-12);
  const RealField dx = first_derivative(sample(g, [](double x) { return x; }));
  for (double v : dx.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const auto err = [](std::size_t n) {
    const auto gg = Grid::line(std::numbers::pi, n);
    const RealField d = first_derivative(sample(gg, [](double x) { return std::sin(x); }));
    double worst = 0.0;
    for (std::size_t i = 0; i < gg->size(); ++i) worst = std::max(worst, std::abs(d[i] - std::cos(gg->nodes()[i])));
    return worst;
  };
  CHECK(err(201) < 1e-3);
  CHECK(err(201) / err(401) > 3.5);
}

TEST_CASE("shift") {
  const auto g = Grid::line(10.0, 1001);
  const RealField u = sample(g, [](double x) { return std::exp(-0.5 * x * x); });
  CHECK(shift(u, 0.0).values == u.values);

  const RealField one = shift(u, g->spacing());
  for (std::size_t i = 0; i + 1 < g->size(); ++i) CHECK(one[i] == u[i + 1]);
  CHECK(one[g->size() - 1] == 0.0);

  const RealField s = shift(u, 1.3);
  const double h = g->spacing();
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->nodes()[i];
    if (x + 1.3 > 10.0) {
      CHECK(s[i] == 0.0);
      continue;
    }
    // Linear interpolation error bound h^2/8 max|u''| with max|u''| = 1.
    CHECK(std::abs(s[i] - std::exp(-0.5 * (x + 1.3) * (x + 1.3))) <= h * h / 8.0 + 1e-15);
  }
  CHECK_THROWS_AS(shift(RealField(Grid::radial(2, 1.0, 11)), 0.1), UnsupportedOperation);
}

TEST_CASE("shift round trip is second-order accurate") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = Grid::line(12.0, 1201);
    const RealField u = testing_support::smooth_field(g, rng, 2.0);
    const double a = rng.uniform(-1.0, 1.0);
    const RealField back = shift(shift(u, a), -a);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      worst = std::max(worst, std::abs(back[i] - u[i]));
      scale = std::max(scale, std::abs(u[i]));
    }
    CHECK(worst <= 10.0 * g->spacing() * g->spacing() * scale);
  }
}

TEST_CASE("fields validate their size") {
  const auto g = Grid::line(1.0, 5);
  CHECK_THROWS_AS(RealField(g, std::vector<double>(4)), InvalidArgument);
  CHECK_THROWS_AS(ComplexField(g, std::vector<std::complex<double>>(6)), InvalidArgument);
  RealField u(g);
  CHECK(u.all_finite());
  u.values[2] = std::nan("");
  CHECK_FALSE(u.all_finite());
  CHECK_THROWS_AS(require_same_grid(g, Grid::line(1.0, 7), "test"), InvalidArgument);
}

TEST_CASE("pin_boundary zeroes the Dirichlet nodes") {
  const auto line = Grid::line(1.0, 5);
  RealField u = sample(line, [](double) { return 1.0; });
  pin_boundary(u);
  CHECK(u[0] == 0.0);
  CHECK(u[4] == 0.0);
  CHECK(u[2] == 1.0);
  const auto rad = Grid::radial(2, 1.0, 5);
  RealField r = sample(rad, [](double) { return 1.0; });
  pin_boundary(r);
  CHECK(r[0] == 1.0);
  CHECK(r[4] == 0.0);
}
