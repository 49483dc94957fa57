#include "bsq/spectral/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bsq::spectral {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

GridPtr Grid::create(int n) {
  if (!is_power_of_two(n) || n < 16)
    throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                std::to_string(n));
  return GridPtr(new Grid(n));
}

Grid::Grid(int n) : n_(n) {
  const std::size_t ns = spectral_size();
  deriv1_.assign(ns, 0.0);
  deriv2_.assign(ns, 0.0);
  ksq_.assign(ns, 0.0);
  inv_ksq_.assign(ns, 0.0);
  mask_.assign(ns, 0.0);
  weight_.assign(ns, 0.0);
  const int nyq = n / 2;
  const int cut = dealias_cutoff();
  for (std::size_t idx = 0; idx < ns; ++idx) {
    const int j1 = static_cast<int>(idx % half());
    const int k1 = k1_of(idx);
    const int k2 = k2_of(idx);
    deriv1_[idx] = (j1 == nyq) ? 0.0 : static_cast<double>(k1);
    deriv2_[idx] = (k2 == -nyq) ? 0.0 : static_cast<double>(k2);
    const double k1s = (j1 == nyq) ? double(nyq) : double(k1);
    const double m = k1s * k1s + double(k2) * double(k2);
    ksq_[idx] = m;
    inv_ksq_[idx] = m > 0.0 ? 1.0 / m : 0.0;
    const bool keep = (j1 != nyq) && std::abs(k1) <= cut && std::abs(k2) <= cut;
    mask_[idx] = keep ? 1.0 : 0.0;
    weight_[idx] = (j1 == 0 || j1 == nyq) ? 1.0 : 2.0;
  }

  AlignedVector<double> re(physical_size());
  AlignedVector<cplx> sp(spectral_size());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_r2c_ = fftw_plan_dft_r2c_2d(n, n, re.data(),
                                   reinterpret_cast<fftw_complex*>(sp.data()),
                                   FFTW_ESTIMATE);
  plan_c2r_ = fftw_plan_dft_c2r_2d(n, n,
                                   reinterpret_cast<fftw_complex*>(sp.data()),
                                   re.data(), FFTW_ESTIMATE);
  if (plan_r2c_ == nullptr || plan_c2r_ == nullptr)
    throw std::runtime_error("FFTW planning failed");
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

double Grid::spacing() const noexcept {
  return 2.0 * std::numbers::pi / n_;
}

int Grid::k1_of(std::size_t idx) const noexcept {
  return static_cast<int>(idx % half());
}

int Grid::k2_of(std::size_t idx) const noexcept {
  const int j2 = static_cast<int>(idx / half());
  return j2 < n_ / 2 ? j2 : j2 - n_;
}

std::size_t Grid::index_of(int k1, int k2) const {
  if (k1 < 0 || k1 > n_ / 2 || k2 < -n_ / 2 || k2 >= n_ / 2)
    throw std::out_of_range("wavenumber outside the half spectrum");
  const int j2 = k2 >= 0 ? k2 : k2 + n_;
  return static_cast<std::size_t>(j2) * half() + static_cast<std::size_t>(k1);
}

void Grid::r2c(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_),
                       const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void Grid::c2r(cplx* in_destroyed, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                       reinterpret_cast<fftw_complex*>(in_destroyed), out);
}

}  // namespace bsq::spectral
