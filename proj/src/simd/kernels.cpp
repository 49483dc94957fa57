#include "bsq/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_impl.hpp"

namespace bsq::simd {
namespace {

const KernelTable kScalar = detail::make_scalar_table();

#if defined(BSQLAB_HAVE_AVX2)
bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
const KernelTable kAvx2 = detail::make_avx2_table();
#endif

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("BSQLAB_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &kScalar;
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd kernel: length mismatch");
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(BSQLAB_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

bool backend_supported(Backend b) noexcept {
  return b == Backend::Scalar || avx2_table() != nullptr;
}

Backend active_backend() noexcept { return current().load()->backend; }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument(std::string("simd backend not available: ") +
                                backend_name(b));
  current().store(b == Backend::Scalar ? &kScalar : avx2_table());
}

const char* backend_name(Backend b) noexcept {
  return b == Backend::Scalar ? "scalar" : "avx2";
}

const KernelTable& active() noexcept { return *current().load(); }

void scale_real(std::span<cplx> x, std::span<const double> m) {
  require_same(x.size(), m.size());
  active().scale_real(x.data(), m.data(), x.size());
}

void mul_imag(std::span<const cplx> x, std::span<const double> k,
              std::span<cplx> out) {
  require_same(x.size(), k.size());
  require_same(x.size(), out.size());
  active().mul_imag(x.data(), k.data(), out.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_same(x.size(), y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const cplx> x, std::span<cplx> y) {
  require_same(x.size(), y.size());
  active().axpy(a, reinterpret_cast<const double*>(x.data()),
                reinterpret_cast<double*>(y.data()), 2 * x.size());
}

void dot2(std::span<const double> a1, std::span<const double> b1,
          std::span<const double> a2, std::span<const double> b2,
          std::span<double> out) {
  require_same(a1.size(), b1.size());
  require_same(a1.size(), a2.size());
  require_same(a1.size(), b2.size());
  require_same(a1.size(), out.size());
  active().dot2(a1.data(), b1.data(), a2.data(), b2.data(), out.data(),
                out.size());
}

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
  require_same(a.size(), b.size());
  require_same(a.size(), out.size());
  active().multiply(a.data(), b.data(), out.data(), out.size());
}

void multiply_add(std::span<const double> a, std::span<const double> b,
                  std::span<double> out) {
  require_same(a.size(), b.size());
  require_same(a.size(), out.size());
  active().multiply_add(a.data(), b.data(), out.data(), out.size());
}

double max_abs(std::span<const double> x) {
  return active().max_abs(x.data(), x.size());
}

double max_hypot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size());
  return active().max_hypot(a.data(), b.data(), a.size());
}

double sum_abs_pow(std::span<const double> x, double p) {
  return active().sum_abs_pow(x.data(), x.size(), p);
}

double sum_hypot_pow(std::span<const double> a, std::span<const double> b,
                     double p) {
  require_same(a.size(), b.size());
  return active().sum_hypot_pow(a.data(), b.data(), a.size(), p);
}

double weighted_norm2(std::span<const cplx> x, std::span<const double> w) {
  require_same(x.size(), w.size());
  return active().weighted_norm2(x.data(), w.data(), x.size());
}

double weighted_dot(std::span<const cplx> x, std::span<const cplx> y,
                    std::span<const double> w) {
  require_same(x.size(), y.size());
  require_same(x.size(), w.size());
  return active().weighted_dot(x.data(), y.data(), w.data(), x.size());
}

}  // namespace bsq::simd
