#pragma once
#include "bsq/simd/kernels.hpp"

namespace bsq::simd::detail {

KernelTable make_scalar_table() noexcept;
#if defined(BSQLAB_HAVE_AVX2)
KernelTable make_avx2_table() noexcept;
#endif

}  // namespace bsq::simd::detail
