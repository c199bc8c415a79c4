#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "octa/errors.hpp"
#include "octa/kernels.hpp"
#include "oracles.hpp"

using namespace octa;
using kernels::Path;

namespace {

std::vector<Mat6> random_batch(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Mat6> out(n);
  for (auto& m : out)
    for (int i = 0; i < 36; ++i) m.data()[i] = u(rng);
  return out;
}

double ulps_apart(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) / (scale * 2.220446049250313e-16);
}

}  // namespace

TEST_CASE("scalar determinant matches cofactor expansion") {
  for (const Mat6& m : random_batch(200, 1)) {
    const double ref = oracle::cofactor_det(m);
    CHECK(kernels::determinant(m) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("determinant handles structure") {
  CHECK(kernels::determinant(Mat6::Identity()) == 1.0);
  Mat6 p = Mat6::Zero();
  for (int i = 0; i < 6; ++i) p(i, (i + 1) % 6) = 1.0;  // 6-cycle, odd
  CHECK(kernels::determinant(p) == -1.0);
  Mat6 s = random_batch(1, 2)[0];
  s.row(4) = 2.0 * s.row(1) - s.row(3);
  CHECK(std::fabs(kernels::determinant(s)) < 1e-12);
  Mat6 z = random_batch(1, 3)[0];
  z.col(2).setZero();
  CHECK(kernels::determinant(z) == 0.0);
}

TEST_CASE("hadamard ratio is bounded and scale free") {
  for (const Mat6& m : random_batch(100, 4)) {
    const double r = kernels::hadamard_ratio(m);
    CHECK(std::fabs(r) <= 1.0);
    Mat6 scaled = m;
    scaled.row(2) *= 1e3;
    scaled.row(5) *= 1e-2;
    CHECK(kernels::hadamard_ratio(scaled) == doctest::Approx(r).epsilon(1e-12));
  }
  Mat6 q = Eigen::HouseholderQR<Mat6>(random_batch(1, 5)[0]).householderQ();
  CHECK(std::fabs(kernels::hadamard_ratio(q)) == doctest::Approx(1.0).epsilon(1e-12));
  Mat6 zero_row = random_batch(1, 6)[0];
  zero_row.row(0).setZero();
  CHECK(kernels::hadamard_ratio(zero_row) == 0.0);
}

TEST_CASE("batch scalar path equals single-matrix reference") {
  const auto mats = random_batch(37, 7);
  std::vector<double> det(mats.size()), ratio(mats.size());
  kernels::determinant_batch(mats, det, Path::Scalar);
  kernels::hadamard_ratio_batch(mats, ratio, Path::Scalar);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    CHECK(det[i] == kernels::determinant(mats[i]));
    CHECK(ratio[i] == kernels::hadamard_ratio(mats[i]));
  }
}

TEST_CASE("avx2 path agrees with the scalar reference") {
  if (!kernels::avx2_available()) {
    CHECK_THROWS_AS(kernels::resolve(Path::Avx2), InvalidArgument);
    return;
  }
  CHECK(kernels::resolve(Path::Auto) == Path::Avx2);
  // Every tail length, plus matrices that force pivoting and zero pivots.
  for (std::size_t n = 0; n <= 13; ++n) {
    auto mats = random_batch(n, 100 + n);
    if (n > 2) {
      mats[1](0, 0) = 0.0;
      mats[2].row(3) = mats[2].row(0);
      mats[2].col(5).setZero();
    }
    std::vector<double> ds(n), dv(n), rs(n), rv(n);
    kernels::determinant_batch(mats, ds, Path::Scalar);
    kernels::determinant_batch(mats, dv, Path::Avx2);
    kernels::hadamard_ratio_batch(mats, rs, Path::Scalar);
    kernels::hadamard_ratio_batch(mats, rv, Path::Avx2);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(ulps_apart(ds[i], dv[i]) <= 4.0);
      CHECK(ulps_apart(rs[i], rv[i]) <= 4.0);
    }
  }
}

TEST_CASE("avx2 path on a large random batch") {
  if (!kernels::avx2_available()) return;
  const auto mats = random_batch(4099, 11);
  std::vector<double> ds(mats.size()), dv(mats.size());
  kernels::determinant_batch(mats, ds, Path::Scalar);
  kernels::determinant_batch(mats, dv, Path::Avx2);
  int exact = 0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    CHECK(ulps_apart(ds[i], dv[i]) <= 4.0);
    exact += ds[i] == dv[i];
  }
  MESSAGE("bit-identical results: " << exact << " / " << mats.size());
}

TEST_CASE("batch size mismatch is rejected") {
  const auto mats = random_batch(3, 12);
  std::vector<double> out(2);
  CHECK_THROWS_AS(kernels::determinant_batch(mats, out), InvalidArgument);
  CHECK_THROWS_AS(kernels::hadamard_ratio_batch(mats, out), InvalidArgument);
}

TEST_CASE("path names") {
  CHECK(kernels::path_name(Path::Scalar) == "scalar");
  CHECK(kernels::path_name(Path::Avx2) == "avx2");
  CHECK(kernels::resolve(Path::Scalar) == Path::Scalar);
}
