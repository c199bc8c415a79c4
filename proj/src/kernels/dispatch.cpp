#include "octa/errors.hpp"
#include "octa/kernels.hpp"

#include "detail.hpp"

namespace octa::kernels {

bool avx2_available() {
#ifdef OCTA_HAVE_AVX2_KERNELS
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
#else
  return false;
#endif
}

Path resolve(Path requested) {
  switch (requested) {
    case Path::Auto:
      return avx2_available() ? Path::Avx2 : Path::Scalar;
    case Path::Avx2:
      if (!avx2_available()) throw InvalidArgument("AVX2 kernels requested but not supported");
      return Path::Avx2;
    case Path::Scalar:
      break;
  }
  return Path::Scalar;
}

std::string_view path_name(Path p) {
  switch (p) {
    case Path::Auto: return "auto";
    case Path::Scalar: return "scalar";
    case Path::Avx2: return "avx2";
  }
  return "?";
}

double determinant(const Mat6& a) {
  double out;
  detail::determinant_scalar(a.data(), 1, &out);
  return out;
}

double hadamard_ratio(const Mat6& a) {
  double out;
  detail::hadamard_ratio_scalar(a.data(), 1, &out);
  return out;
}

namespace {

void check_sizes(std::span<const Mat6> mats, std::span<double> out) {
  if (out.size() != mats.size()) throw InvalidArgument("kernel output size mismatch");
}

}  // namespace

void determinant_batch(std::span<const Mat6> mats, std::span<double> out, Path path) {
  check_sizes(mats, out);
  // Eigen fixed-size 6x6 matrices are plain arrays of 36 doubles.
  static_assert(sizeof(Mat6) == 36 * sizeof(double));
  const double* raw = mats.empty() ? nullptr : mats.front().data();
#ifdef OCTA_HAVE_AVX2_KERNELS
  if (resolve(path) == Path::Avx2) {
    detail::determinant_avx2(raw, mats.size(), out.data());
    return;
  }
#else
  resolve(path);
#endif
  detail::determinant_scalar(raw, mats.size(), out.data());
}

void hadamard_ratio_batch(std::span<const Mat6> mats, std::span<double> out, Path path) {
  check_sizes(mats, out);
  static_assert(sizeof(Mat6) == 36 * sizeof(double));
  const double* raw = mats.empty() ? nullptr : mats.front().data();
#ifdef OCTA_HAVE_AVX2_KERNELS
  if (resolve(path) == Path::Avx2) {
    detail::hadamard_ratio_avx2(raw, mats.size(), out.data());
    return;
  }
#else
  resolve(path);
#endif
  detail::hadamard_ratio_scalar(raw, mats.size(), out.data());
}

}  // namespace octa::kernels
