#include "qlstab/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace qlstab::kernels {
namespace {

constexpr std::size_t kBlock = 1024;
// Below this many blocks the fork/join costs more than the loop.
constexpr std::int64_t kParallelBlocks = 4;

// term(i) is summed over [0, count) block by block.
template <class Term>
double blocked_sum(std::size_t count, Term term) {
  const auto blocks = static_cast<std::int64_t>((count + kBlock - 1) / kBlock);
  if (blocks == 0) return 0.0;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (blocks >= kParallelBlocks)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(count, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

template <class Term>
cplx blocked_csum(std::size_t count, Term term) {
  const auto blocks = static_cast<std::int64_t>((count + kBlock - 1) / kBlock);
  if (blocks == 0) return {};
  std::vector<cplx> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static) if (blocks >= kParallelBlocks)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(count, lo + kBlock);
    cplx s{};
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  cplx total{};
  for (const cplx& s : partial) total += s;
  return total;
}

std::size_t edge_count(std::size_t nodes) { return nodes > 0 ? nodes - 1 : 0; }

}  // namespace

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  return blocked_sum(w.size(), [&](std::size_t i) { return w[i] * a[i] * b[i]; });
}

double weighted_norm2(std::span<const double> w, std::span<const cplx> a) {
  return blocked_sum(w.size(), [&](std::size_t i) { return w[i] * std::norm(a[i]); });
}

double weighted_pow(std::span<const double> w, std::span<const double> a, double p) {
  return blocked_sum(w.size(),
                     [&](std::size_t i) { return w[i] * std::pow(std::abs(a[i]), p); });
}

double edge_dot(std::span<const double> faces, double h, std::span<const double> a,
                std::span<const double> b) {
  const double inv_h = 1.0 / h;
  return blocked_sum(edge_count(a.size()), [&](std::size_t e) {
    return faces[e] * (a[e + 1] - a[e]) * (b[e + 1] - b[e]) * inv_h;
  });
}

double edge_norm2(std::span<const double> faces, double h, std::span<const cplx> z) {
  const double inv_h = 1.0 / h;
  return blocked_sum(edge_count(z.size()), [&](std::size_t e) {
    return faces[e] * std::norm(z[e + 1] - z[e]) * inv_h;
  });
}

cplx weighted_mixed_dot(std::span<const double> w, std::span<const double> a,
                        std::span<const cplx> z) {
  return blocked_csum(w.size(), [&](std::size_t i) { return (w[i] * a[i]) * z[i]; });
}

cplx edge_mixed_dot(std::span<const double> faces, double h, std::span<const double> a,
                    std::span<const cplx> z) {
  const double inv_h = 1.0 / h;
  return blocked_csum(edge_count(a.size()), [&](std::size_t e) {
    return (faces[e] * (a[e + 1] - a[e]) * inv_h) * (z[e + 1] - z[e]);
  });
}

void flux_laplacian(std::span<const double> faces, std::span<const double> weights, double h,
                    std::size_t first, std::size_t last, std::span<const double> in,
                    std::span<double> out) {
  const auto n = static_cast<std::int64_t>(in.size());
  const double inv_h = 1.0 / h;
#pragma omp parallel for schedule(static) if (n >= 8192)
  for (std::int64_t s = 0; s < n; ++s) {
    const auto i = static_cast<std::size_t>(s);
    if (i < first || i > last) {
      out[i] = 0.0;
      continue;
    }
    double flux = 0.0;
    if (i + 1 < in.size()) flux += faces[i] * (in[i + 1] - in[i]);
    if (i > 0) flux -= faces[i - 1] * (in[i] - in[i - 1]);
    out[i] = flux * inv_h / weights[i];
  }
}

namespace serial {

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

double weighted_norm2(std::span<const double> w, std::span<const cplx> a) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::norm(a[i]);
  return s;
}

double weighted_pow(std::span<const double> w, std::span<const double> a, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::pow(std::abs(a[i]), p);
  return s;
}

double edge_dot(std::span<const double> faces, double h, std::span<const double> a,
                std::span<const double> b) {
  double s = 0.0;
  for (std::size_t e = 0; e + 1 < a.size(); ++e)
    s += faces[e] * (a[e + 1] - a[e]) * (b[e + 1] - b[e]) / h;
  return s;
}

double edge_norm2(std::span<const double> faces, double h, std::span<const cplx> z) {
  double s = 0.0;
  for (std::size_t e = 0; e + 1 < z.size(); ++e) s += faces[e] * std::norm(z[e + 1] - z[e]) / h;
  return s;
}

cplx weighted_mixed_dot(std::span<const double> w, std::span<const double> a,
                        std::span<const cplx> z) {
  cplx s{};
  for (std::size_t i = 0; i < w.size(); ++i) s += (w[i] * a[i]) * z[i];
  return s;
}

cplx edge_mixed_dot(std::span<const double> faces, double h, std::span<const double> a,
                    std::span<const cplx> z) {
  cplx s{};
  for (std::size_t e = 0; e + 1 < a.size(); ++e)
    s += (faces[e] * (a[e + 1] - a[e]) / h) * (z[e + 1] - z[e]);
  return s;
}

void flux_laplacian(std::span<const double> faces, std::span<const double> weights, double h,
                    std::size_t first, std::size_t last, std::span<const double> in,
                    std::span<double> out) {
  const double inv_h = 1.0 / h;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i < first || i > last) {
      out[i] = 0.0;
      continue;
    }
    double flux = 0.0;
    if (i + 1 < in.size()) flux += faces[i] * (in[i + 1] - in[i]);
    if (i > 0) flux -= faces[i - 1] * (in[i] - in[i - 1]);
    out[i] = flux * inv_h / weights[i];
  }
}

}  // namespace serial
}  // namespace qlstab::kernels
