#pragma once
// Data-parallel inner loops shared by the spectral and diagnostic code.
//
// Every kernel exists as a scalar reference implementation and, on x86-64,
// as an AVX2/FMA variant. The variant is picked once at startup from the CPU
// feature flags (override with BSQLAB_SIMD=scalar) and can be switched at
// runtime for equivalence testing. Reductions in the AVX2 table accumulate in
// four lanes, so sums differ from the scalar table in the last bits; maxima
// are bit-identical.

#include <complex>
#include <cstddef>
#include <span>

namespace bsq::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

// Raw kernel signatures. Lengths are element counts of the real arrays unless
// the name says otherwise.
struct KernelTable {
  Backend backend;
  // x[i] *= m[i] for complex x, real m (length = number of complex entries)
  void (*scale_real)(cplx* x, const double* m, std::size_t n);
  // out[i] = i * k[i] * x[i]
  void (*mul_imag)(const cplx* x, const double* k, cplx* out, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[i] = a1[i]*b1[i] + a2[i]*b2[i]
  void (*dot2)(const double* a1, const double* b1, const double* a2,
               const double* b2, double* out, std::size_t n);
  // out[i] = a[i]*b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] += a[i]*b[i]
  void (*multiply_add)(const double* a, const double* b, double* out,
                       std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // max_i sqrt(a[i]^2 + b[i]^2)
  double (*max_hypot)(const double* a, const double* b, std::size_t n);
  // sum_i |x[i]|^p; p in {1,2,4,8} takes the fast path
  double (*sum_abs_pow)(const double* x, std::size_t n, double p);
  // sum_i (a[i]^2 + b[i]^2)^(p/2)
  double (*sum_hypot_pow)(const double* a, const double* b, std::size_t n,
                          double p);
  // sum_i w[i] * |x[i]|^2 (complex x)
  double (*weighted_norm2)(const cplx* x, const double* w, std::size_t n);
  // sum_i w[i] * Re(x[i] * conj(y[i]))
  double (*weighted_dot)(const cplx* x, const cplx* y, const double* w,
                         std::size_t n);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the AVX2 table was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
void set_backend(Backend b);  // throws std::invalid_argument if unsupported
const char* backend_name(Backend b) noexcept;
const KernelTable& active() noexcept;

// Span front-ends over the active table.
void scale_real(std::span<cplx> x, std::span<const double> m);
void mul_imag(std::span<const cplx> x, std::span<const double> k,
              std::span<cplx> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
void axpy(double a, std::span<const cplx> x, std::span<cplx> y);
void dot2(std::span<const double> a1, std::span<const double> b1,
          std::span<const double> a2, std::span<const double> b2,
          std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
void multiply_add(std::span<const double> a, std::span<const double> b,
                  std::span<double> out);
double max_abs(std::span<const double> x);
double max_hypot(std::span<const double> a, std::span<const double> b);
double sum_abs_pow(std::span<const double> x, double p);
double sum_hypot_pow(std::span<const double> a, std::span<const double> b,
                     double p);
double weighted_norm2(std::span<const cplx> x, std::span<const double> w);
double weighted_dot(std::span<const cplx> x, std::span<const cplx> y,
                    std::span<const double> w);

}  // namespace bsq::simd
