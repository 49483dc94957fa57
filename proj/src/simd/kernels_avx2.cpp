#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace bsq::simd::detail {
namespace {

inline __m256d dup_pairs(const double* m) {
  const __m128d v = _mm_loadu_pd(m);
  return _mm256_set_m128d(_mm_unpackhi_pd(v, v), _mm_unpacklo_pd(v, v));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void scale_real(cplx* x, const double* m, std::size_t n) {
  double* d = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, dup_pairs(m + i)));
  }
  for (; i < n; ++i) x[i] *= m[i];
}

void mul_imag(const cplx* x, const double* k, cplx* out, std::size_t n) {
  const double* s = reinterpret_cast<const double*>(x);
  double* d = reinterpret_cast<double*>(out);
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(s + 2 * i);
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    const __m256d kk = _mm256_mul_pd(dup_pairs(k + i), sign);
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(swapped, kk));
  }
  for (; i < n; ++i) out[i] = cplx(-k[i] * x[i].imag(), k[i] * x[i].real());
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void dot2(const double* a1, const double* b1, const double* a2,
          const double* b2, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(b1 + i));
    const __m256d p2 = _mm256_mul_pd(_mm256_loadu_pd(a2 + i), _mm256_loadu_pd(b2 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(p1, p2));
  }
  for (; i < n; ++i) out[i] = a1[i] * b1[i] + a2[i] * b2[i];
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(const double* a, const double* b, double* out,
                  std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(_mm256_loadu_pd(a + i),
                                      _mm256_loadu_pd(b + i),
                                      _mm256_loadu_pd(out + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = std::fma(a[i], b[i], out[i]);
}

double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

double max_hypot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d m2 = _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb));
    acc = _mm256_max_pd(acc, m2);
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, a[i] * a[i] + b[i] * b[i]);
  return std::sqrt(m);
}

// |v|^p for the fast-path exponents, applied to a magnitude-squared vector.
inline __m256d pow_from_square(__m256d m2, int p) {
  switch (p) {
    case 1: return _mm256_sqrt_pd(m2);
    case 2: return m2;
    case 4: return _mm256_mul_pd(m2, m2);
    default: {
      const __m256d q = _mm256_mul_pd(m2, m2);
      return _mm256_mul_pd(q, q);
    }
  }
}

int fast_exponent(double p) {
  if (p == 1.0) return 1;
  if (p == 2.0) return 2;
  if (p == 4.0) return 4;
  if (p == 8.0) return 8;
  return 0;
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  const int fp = fast_exponent(p);
  const KernelTable fallback = make_scalar_table();
  if (fp == 0) return fallback.sum_abs_pow(x, n, p);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d term =
        fp == 1 ? abs_pd(v) : pow_from_square(_mm256_mul_pd(v, v), fp);
    acc = _mm256_add_pd(acc, term);
  }
  return hsum(acc) + fallback.sum_abs_pow(x + i, n - i, p);
}

double sum_hypot_pow(const double* a, const double* b, std::size_t n,
                     double p) {
  const int fp = fast_exponent(p);
  const KernelTable fallback = make_scalar_table();
  if (fp == 0) return fallback.sum_hypot_pow(a, b, n, p);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d m2 = _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb));
    acc = _mm256_add_pd(acc, pow_from_square(m2, fp));
  }
  return hsum(acc) + fallback.sum_hypot_pow(a + i, b + i, n - i, p);
}

double weighted_norm2(const cplx* x, const double* w, std::size_t n) {
  const double* d = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    acc = _mm256_fmadd_pd(dup_pairs(w + i), _mm256_mul_pd(v, v), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * std::norm(x[i]);
  return s;
}

double weighted_dot(const cplx* x, const cplx* y, const double* w,
                    std::size_t n) {
  const double* dx = reinterpret_cast<const double*>(x);
  const double* dy = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d p =
        _mm256_mul_pd(_mm256_loadu_pd(dx + 2 * i), _mm256_loadu_pd(dy + 2 * i));
    acc = _mm256_fmadd_pd(dup_pairs(w + i), p, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += w[i] * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
  return s;
}

}  // namespace

KernelTable make_avx2_table() noexcept {
  return KernelTable{Backend::Avx2, scale_real,   mul_imag,      axpy,
                     dot2,          multiply,     multiply_add,  max_abs,
                     max_hypot,     sum_abs_pow,  sum_hypot_pow, weighted_norm2,
                     weighted_dot};
}

}  // namespace bsq::simd::detail
