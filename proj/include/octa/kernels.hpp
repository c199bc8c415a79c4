#pragma once

// Batched 6x6 determinant kernels.
//
// The scalar routines are the reference implementation. The AVX2 variant
// processes four matrices per pass with lane-wise partial pivoting and is
// selected at runtime when the CPU supports it. Both perform the same
// floating point operations in the same order, so results agree bit for bit
// on IEEE hardware (the tests still allow a few ulps).

#include <cstddef>
#include <span>
#include <string_view>

#include "octa/types.hpp"

namespace octa::kernels {

enum class Path { Auto, Scalar, Avx2 };

bool avx2_available();

/// Maps Auto to the best path this CPU supports. Requesting Avx2 on a CPU
/// without it throws InvalidArgument.
Path resolve(Path requested);

std::string_view path_name(Path p);

/// Gaussian elimination with partial pivoting.
double determinant(const Mat6& a);

/// det(a) / prod_i ||row_i||, in [-1, 1] by Hadamard's inequality; 0 when a
/// row vanishes.
double hadamard_ratio(const Mat6& a);

void determinant_batch(std::span<const Mat6> mats, std::span<double> out,
                       Path path = Path::Auto);
void hadamard_ratio_batch(std::span<const Mat6> mats, std::span<double> out,
                          Path path = Path::Auto);

}  // namespace octa::kernels
