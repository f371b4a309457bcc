#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qlstab/kernels.hpp"
#include "support.hpp"

using namespace qlstab;
namespace k = qlstab::kernels;

namespace {

struct Case {
  std::vector<double> w, f, a, b;
  std::vector<std::complex<double>> z;
  double h;
};

Case make_case(std::size_t n, testing_support::Rng& rng) {
  Case c;
  c.h = rng.uniform(0.001, 0.1);
  for (std::size_t i = 0; i < n; ++i) {
    c.w.push_back(rng.uniform(0.0, 1.0));
    c.f.push_back(rng.uniform(0.1, 2.0));
    c.a.push_back(rng.uniform(-1.0, 1.0));
    c.b.push_back(rng.uniform(-1.0, 1.0));
    c.z.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return c;
}

bool close(double x, double y, double scale) { return std::abs(x - y) <= 1e-12 * scale; }

}  // namespace

TEST_CASE("OpenMP kernels agree with the serial reference") {
  testing_support::Rng rng(17);
  for (std::size_t n : {1u, 2u, 7u, 1023u, 1024u, 4096u, 5000u, 40000u}) {
    const Case c = make_case(n, rng);
    const double scale = static_cast<double>(n);
    CHECK(close(k::weighted_dot(c.w, c.a, c.b), k::serial::weighted_dot(c.w, c.a, c.b), scale));
    CHECK(close(k::weighted_norm2(c.w, c.z), k::serial::weighted_norm2(c.w, c.z), scale));
    CHECK(close(k::weighted_pow(c.w, c.a, 3.3), k::serial::weighted_pow(c.w, c.a, 3.3), scale));
    CHECK(close(k::edge_dot(c.f, c.h, c.a, c.b), k::serial::edge_dot(c.f, c.h, c.a, c.b), scale / c.h));
    CHECK(close(k::edge_norm2(c.f, c.h, c.z), k::serial::edge_norm2(c.f, c.h, c.z), scale / c.h));
    const auto m1 = k::weighted_mixed_dot(c.w, c.a, c.z), m2 = k::serial::weighted_mixed_dot(c.w, c.a, c.z);
    CHECK(std::abs(m1 - m2) <= 1e-12 * scale);
    const auto e1 = k::edge_mixed_dot(c.f, c.h, c.a, c.z), e2 = k::serial::edge_mixed_dot(c.f, c.h, c.a, c.z);
    CHECK(std::abs(e1 - e2) <= 1e-12 * scale / c.h);
    if (n >= 3) {
      std::vector<double> o1(n, 7.0), o2(n, 7.0);
      k::flux_laplacian(c.f, c.w, c.h, 1, n - 2, c.a, o1);
      k::serial::flux_laplacian(c.f, c.w, c.h, 1, n - 2, c.a, o2);
      CHECK(o1 == o2);
      CHECK(o1[0] == 0.0);
      CHECK(o1[n - 1] == 0.0);
    }
  }
}

TEST_CASE("reductions do not depend on the thread count") {
  testing_support::Rng rng(23);
  const Case c = make_case(50000, rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double d1 = k::weighted_dot(c.w, c.a, c.b);
  const double n1 = k::edge_norm2(c.f, c.h, c.z);
  omp_set_num_threads(4);
  const double d4 = k::weighted_dot(c.w, c.a, c.b);
  const double n4 = k::edge_norm2(c.f, c.h, c.z);
  omp_set_num_threads(saved);
  CHECK(d1 == d4);
  CHECK(n1 == n4);
}

TEST_CASE("kernels on hand-computed data") {
  const std::vector<double> w{1.0, 2.0, 3.0}, a{1.0, -1.0, 2.0}, b{2.0, 2.0, 1.0}, f{1.0, 1.0, 0.0};
  CHECK(k::weighted_dot(w, a, b) == doctest::Approx(1.0 * 2.0 - 2.0 * 2.0 + 3.0 * 2.0));
  CHECK(k::weighted_pow(w, a, 2.0) == doctest::Approx(1.0 + 2.0 + 12.0));
  // edges: (-1 - 1)(2 - 2) + (2 + 1)(1 - 2) = -3, over h = 0.5
  CHECK(k::edge_dot(f, 0.5, a, b) == doctest::Approx(-6.0));
}
