#pragma once

// Inner loops shared by the functionals, the solvers and the orbit scan.
//
// Two implementations with identical signatures:
//   qlstab::kernels         OpenMP, used by the library
//   qlstab::kernels::serial plain loops, kept as the reference for tests and benchmarks
//
// The OpenMP reductions sum fixed-size blocks and then add the block partials
// in order, so results do not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace qlstab::kernels {

using cplx = std::complex<double>;

/// Sum_i w_i a_i b_i.
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
/// Sum_i w_i |a_i|^2 for a complex field.
double weighted_norm2(std::span<const double> w, std::span<const cplx> a);
/// Sum_i w_i |a_i|^p.
double weighted_pow(std::span<const double> w, std::span<const double> a, double p);
/// Sum_e S_e (a_{e+1} - a_e)(b_{e+1} - b_e) / h over the n-1 edges.
double edge_dot(std::span<const double> faces, double h, std::span<const double> a,
                std::span<const double> b);
/// Sum_e S_e |z_{e+1} - z_e|^2 / h.
double edge_norm2(std::span<const double> faces, double h, std::span<const cplx> z);

/// Sum_i w_i a_i z_i (real a, complex z).
cplx weighted_mixed_dot(std::span<const double> w, std::span<const double> a,
                        std::span<const cplx> z);
/// Sum_e S_e (Da)_e (Dz)_e / h (real a, complex z).
cplx edge_mixed_dot(std::span<const double> faces, double h, std::span<const double> a,
                    std::span<const cplx> z);

/// Flux-form Laplacian on nodes [first, last]; all other outputs are zero.
void flux_laplacian(std::span<const double> faces, std::span<const double> weights, double h,
                    std::size_t first, std::size_t last, std::span<const double> in,
                    std::span<double> out);

namespace serial {

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
double weighted_norm2(std::span<const double> w, std::span<const cplx> a);
double weighted_pow(std::span<const double> w, std::span<const double> a, double p);
double edge_dot(std::span<const double> faces, double h, std::span<const double> a,
                std::span<const double> b);
double edge_norm2(std::span<const double> faces, double h, std::span<const cplx> z);
cplx weighted_mixed_dot(std::span<const double> w, std::span<const double> a,
                        std::span<const cplx> z);
cplx edge_mixed_dot(std::span<const double> faces, double h, std::span<const double> a,
                    std::span<const cplx> z);
void flux_laplacian(std::span<const double> faces, std::span<const double> weights, double h,
                    std::size_t first, std::size_t last, std::span<const double> in,
                    std::span<double> out);

}  // namespace serial
}  // namespace qlstab::kernels
