#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace bsq::simd::detail {
namespace {

void scale_real(cplx* x, const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

void mul_imag(const cplx* x, const double* k, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = cplx(-k[i] * x[i].imag(), k[i] * x[i].real());
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void dot2(const double* a1, const double* b1, const double* a2,
          const double* b2, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a1[i] * b1[i] + a2[i] * b2[i];
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(const double* a, const double* b, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

double max_hypot(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, a[i] * a[i] + b[i] * b[i]);
  return std::sqrt(m);
}

double pow_abs(double v, double p) {
  const double a = std::abs(v);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 4.0) {
    const double s = a * a;
    return s * s;
  }
  if (p == 8.0) {
    const double s = a * a;
    const double q = s * s;
    return q * q;
  }
  return std::pow(a, p);
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += pow_abs(x[i], p);
  return s;
}

double sum_hypot_pow(const double* a, const double* b, std::size_t n,
                     double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m2 = a[i] * a[i] + b[i] * b[i];
    if (p == 2.0) {
      s += m2;
    } else if (p == 4.0) {
      s += m2 * m2;
    } else if (p == 8.0) {
      const double q = m2 * m2;
      s += q * q;
    } else if (p == 1.0) {
      s += std::sqrt(m2);
    } else {
      s += std::pow(m2, 0.5 * p);
    }
  }
  return s;
}

double weighted_norm2(const cplx* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(x[i]);
  return s;
}

double weighted_dot(const cplx* x, const cplx* y, const double* w,
                    std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += w[i] * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
  return s;
}

}  // namespace

KernelTable make_scalar_table() noexcept {
  return KernelTable{Backend::Scalar, scale_real,   mul_imag,      axpy,
                     dot2,            multiply,     multiply_add,  max_abs,
                     max_hypot,       sum_abs_pow,  sum_hypot_pow, weighted_norm2,
                     weighted_dot};
}

}  // namespace bsq::simd::detail
