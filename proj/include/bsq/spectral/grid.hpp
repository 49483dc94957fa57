#pragma once
// Periodic grid on the flat torus [0, 2*pi)^2.
//
// Physical samples are row-major: sample (i1, i2) at x = (2*pi*i1/n,
// 2*pi*i2/n) lives at index i2*n + i1, so a row runs along x1.
//
// Spectral storage is the real-to-complex half spectrum: index j2*(n/2+1) + j1
// with k1 = j1 in [0, n/2] and k2 = j2 for j2 < n/2, j2 - n otherwise. The
// coefficients are normalised so that
//     f(x) = sum_k fhat(k) exp(i k.x),   fhat(k) = n^-2 sum_x f(x) exp(-i k.x),
// and Parseval reads ||f||_{L2}^2 = (2*pi)^2 sum_k |fhat(k)|^2, where the sum
// over the half spectrum counts columns 0 < k1 < n/2 twice.
//
// The Nyquist index n/2 stands for wavenumber -n/2 on both axes. Odd
// multipliers (first derivatives) vanish there; even multipliers use (n/2)^2.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "bsq/spectral/aligned.hpp"

namespace bsq::spectral {

using cplx = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid {
 public:
  // n must be a power of two and at least 16.
  static GridPtr create(int n);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const noexcept { return n_; }
  int half() const noexcept { return n_ / 2 + 1; }
  std::size_t physical_size() const noexcept {
    return static_cast<std::size_t>(n_) * n_;
  }
  std::size_t spectral_size() const noexcept {
    return static_cast<std::size_t>(n_) * half();
  }
  double spacing() const noexcept;
  // floor(n/3): modes with max(|k1|,|k2|) above this are removed by dealiasing.
  int dealias_cutoff() const noexcept { return n_ / 3; }

  int k1_of(std::size_t idx) const noexcept;
  int k2_of(std::size_t idx) const noexcept;
  std::size_t index_of(int k1, int k2) const;  // k1 >= 0 required

  // Per-mode tables over the half spectrum.
  std::span<const double> deriv1() const noexcept { return deriv1_; }
  std::span<const double> deriv2() const noexcept { return deriv2_; }
  std::span<const double> ksq() const noexcept { return ksq_; }
  std::span<const double> inv_ksq() const noexcept { return inv_ksq_; }
  std::span<const double> dealias_mask() const noexcept { return mask_; }
  std::span<const double> parseval_weight() const noexcept { return weight_; }
  bool retained(std::size_t idx) const noexcept { return mask_[idx] != 0.0; }

  // Unnormalised FFTW transforms; callers apply the 1/n^2 factor.
  void r2c(const double* in, cplx* out) const;
  void c2r(cplx* in_destroyed, double* out) const;

 private:
  explicit Grid(int n);
  int n_;
  AlignedVector<double> deriv1_, deriv2_, ksq_, inv_ksq_, mask_, weight_;
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
};

bool is_power_of_two(int n) noexcept;

}  // namespace bsq::spectral
