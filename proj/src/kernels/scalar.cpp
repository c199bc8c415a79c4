#include <cmath>
#include <utility>

#include "detail.hpp"

namespace octa::kernels::detail {
namespace {

// a is row-major scratch: a[r * 6 + c].
double eliminate(double* a) {
  double sign = 1.0;
  double det = 1.0;
  for (int k = 0; k < 6; ++k) {
    int piv = k;
    double best = std::fabs(a[k * 6 + k]);
    for (int r = k + 1; r < 6; ++r) {
      const double v = std::fabs(a[r * 6 + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv != k) {
      for (int c = 0; c < 6; ++c) std::swap(a[k * 6 + c], a[piv * 6 + c]);
      sign = -sign;
    }
    const double p = a[k * 6 + k];
    det = det * p;
    for (int r = k + 1; r < 6; ++r) {
      const double f = p == 0.0 ? 0.0 : a[r * 6 + k] / p;
      for (int c = k + 1; c < 6; ++c) a[r * 6 + c] = a[r * 6 + c] - f * a[k * 6 + c];
    }
  }
  return sign * det;
}

void load_row_major(const double* colmajor, double* a) {
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) a[r * 6 + c] = colmajor[c * 6 + r];
}

double row_norm_product(const double* a) {
  double prod = 1.0;
  for (int r = 0; r < 6; ++r) {
    double ss = 0.0;
    for (int c = 0; c < 6; ++c) ss = ss + a[r * 6 + c] * a[r * 6 + c];
    prod = prod * std::sqrt(ss);
  }
  return prod;
}

}  // namespace

void determinant_scalar(const double* mats, std::size_t n, double* out) {
  double a[36];
  for (std::size_t i = 0; i < n; ++i) {
    load_row_major(mats + 36 * i, a);
    out[i] = eliminate(a);
  }
}

void hadamard_ratio_scalar(const double* mats, std::size_t n, double* out) {
  double a[36];
  for (std::size_t i = 0; i < n; ++i) {
    load_row_major(mats + 36 * i, a);
    const double bound = row_norm_product(a);
    const double det = eliminate(a);
    out[i] = bound == 0.0 ? 0.0 : det / bound;
  }
}

}  // namespace octa::kernels::detail
