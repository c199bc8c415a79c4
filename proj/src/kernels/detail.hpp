#pragma once

// Raw entry points on column-major 36-double blocks. Kept free of Eigen so
// the AVX2 translation unit never instantiates shared inline code.

#include <cstddef>

namespace octa::kernels::detail {

void determinant_scalar(const double* mats, std::size_t n, double* out);
void hadamard_ratio_scalar(const double* mats, std::size_t n, double* out);

#if defined(__x86_64__) || defined(__i386__)
#define OCTA_HAVE_AVX2_KERNELS 1
void determinant_avx2(const double* mats, std::size_t n, double* out);
void hadamard_ratio_avx2(const double* mats, std::size_t n, double* out);
#endif

}  // namespace octa::kernels::detail
