#include <doctest.h>

#include "qlstab/errors.hpp"
#include "qlstab/model.hpp"
#include "support.hpp"

using namespace qlstab;

namespace {
ModelParams params(int N, double p, double k) {
  ModelParams m;
  m.dimension = N;
  m.p = p;
  m.k = k;
  return m;
}
}  // namespace

TEST_CASE("regime classification examples") {
  CHECK(classify_regime(params(2, 3.0, 1.0)).regime == Regime::StableRadial);
  CHECK(classify_regime(params(1, 4.0, 1.0)).regime == Regime::Stable1D);
  CHECK(classify_regime(params(3, 4.0, 1.0)).regime == Regime::OutOfTheory);
  CHECK(classify_regime(params(3, 3.0, 1.0)).regime == Regime::StableRadial);
  CHECK(classify_regime(params(2, 4.0, 1.0)).regime == Regime::OutOfTheory);  // 2 + 4/2 = 4 excluded
  CHECK(classify_regime(params(2, 3.0, 0.0)).regime == Regime::OutOfTheory);  // k > 0 required
  CHECK(classify_regime(params(1, 3.0, 1.0)).regime == Regime::OutOfTheory);
  CHECK(classify_regime(params(1, 6.0, 1.0)).regime == Regime::OutOfTheory);
  CHECK(classify_regime(params(1, 5.99, 1.0)).regime == Regime::Stable1D);
  CHECK_FALSE(classify_regime(params(1, 4.0, 1.0)).explanation.empty());
}

TEST_CASE("regime depends on (N, p, k) only") {
  testing_support::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams a = params(1 + static_cast<int>(rng.next() % 3), rng.uniform(2.01, 7.0),
                           rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 3.0));
    ModelParams b = a;
    b.theta = rng.uniform(0.01, 10.0);
    b.lambda = rng.uniform(0.01, 10.0);
    CHECK(classify_regime(a).regime == classify_regime(b).regime);
  }
}

TEST_CASE("parameter invariants") {
  ModelParams m;
  CHECK_NOTHROW(m.validate());
  m.theta = 0.0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.lambda = -1.0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.p = 2.0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.k = -0.1;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.potential.kind = PotentialKind::Harmonic;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);  // N = 1 needs V = 0
}

TEST_CASE("potential values") {
  const auto radial = Grid::radial(2, 4.0, 41);
  ModelParams m = params(2, 3.0, 1.0);
  for (double v : potential_values(m, radial).values) CHECK(v == 0.0);

  m.potential.kind = PotentialKind::Harmonic;
  const RealField V = potential_values(m, radial);
  for (std::size_t i = 0; i < radial->size(); ++i) CHECK(V[i] == doctest::Approx(radial->nodes()[i] * radial->nodes()[i]));

  m.potential = {PotentialKind::TabulatedRadial, {0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}};
  const RealField T = potential_values(m, radial);
  for (std::size_t i = 0; i < radial->size(); ++i) {
    const double r = radial->nodes()[i];
    const double expect = r <= 1.0 ? 2.0 * r : (r <= 2.0 ? 2.0 - (r - 1.0) : 1.0);
    CHECK(T[i] == doctest::Approx(expect).epsilon(1e-12));
  }

  m.potential = {PotentialKind::TabulatedRadial, {0.0, 1.0}, {0.0, -1.0}};
  CHECK_THROWS_AS(potential_values(m, radial), InvalidArgument);
}

TEST_CASE("grid compatibility") {
  CHECK_THROWS_AS(require_compatible(params(2, 3.0, 1.0), *Grid::line(1.0, 11)), InvalidArgument);
  CHECK_THROWS_AS(require_compatible(params(1, 4.0, 1.0), *Grid::radial(2, 1.0, 11)), InvalidArgument);
  CHECK_THROWS_AS(require_compatible(params(3, 3.0, 1.0), *Grid::radial(2, 1.0, 11)), InvalidArgument);
  CHECK_NOTHROW(require_compatible(params(3, 3.0, 1.0), *Grid::radial(3, 1.0, 11)));
}
