#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qlstab/errors.hpp"

namespace qlstab {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored. No pivoting: intended for matrices whose
/// Hermitian part is positive definite (the mass matrix plus a Hermitian
/// stiffness), where elimination without pivoting is stable.
template <class T>
class TridiagonalSolver {
 public:
  void solve(std::span<const T> lower, std::span<const T> diag, std::span<const T> upper,
             std::span<const T> rhs, std::span<T> x) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    c_.resize(n);
    d_.resize(n);
    T denom = diag[0];
    if (denom == T{}) throw InvalidArgument("tridiagonal solve: zero pivot");
    c_[0] = upper[0] / denom;
    d_[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = diag[i] - lower[i] * c_[i - 1];
      if (denom == T{}) throw InvalidArgument("tridiagonal solve: zero pivot");
      c_[i] = i + 1 < n ? upper[i] / denom : T{};
      d_[i] = (rhs[i] - lower[i] * d_[i - 1]) / denom;
    }
    x[n - 1] = d_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d_[i] - c_[i] * x[i + 1];
  }

 private:
  std::vector<T> c_;
  std::vector<T> d_;
};

}  // namespace qlstab
