#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "paritydisp/error.hpp"
#include "paritydisp/expm.hpp"

using namespace paritydisp;

namespace {

Matrix random_matrix(std::mt19937& rng, int n, double scale) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng)) * scale;
  return m;
}

}  // namespace

TEST(Expm, ScalarAndDiagonal) {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = cplx(1.0, 0.5);
  d(1, 1) = -2.0;
  d(2, 2) = cplx(0.0, 3.0);
  const Matrix e = pade_exp(d);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(e(i, i) - std::exp(d(i, i))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(0, 1)), 0.0, 1e-16);
}

TEST(Expm, RotationGenerator) {
  // exp(t [[0, -1], [1, 0]]) is a rotation by t.
  for (double t : {0.1, 1.0, 3.0, 25.0}) {
    Matrix a(2, 2);
    a << 0.0, -t, t, 0.0;
    const Matrix e = pade_exp(a);
    EXPECT_NEAR(std::abs(e(0, 0) - std::cos(t)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e(1, 0) - std::sin(t)), 0.0, 1e-13);
  }
}

TEST(Expm, NilpotentIsExactPolynomial) {
  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  const Matrix e = pade_exp(n);
  EXPECT_NEAR(std::abs(e(0, 2) - 3.0), 0.0, 1e-14);  // N^2/2 = 6/2
  EXPECT_NEAR(std::abs(e(0, 1) - 2.0), 0.0, 1e-14);
}

TEST(Expm, PadeAgreesWithEigenRouteOnRandomAntiHermitian) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial;
    const Matrix g = random_matrix(rng, n, 0.2 * (1 + trial % 5));
    const Matrix a = 0.5 * (g - g.adjoint());
    const Matrix p = pade_exp(a);
    const Matrix e = anti_hermitian_exp(a);
    EXPECT_LE(max_abs(p - e), 1e-11) << "n=" << n;
    EXPECT_LE(max_abs(p.adjoint() * p - Matrix::Identity(n, n)), 1e-12);
  }
}

TEST(Expm, InverseAndAdditivity) {
  std::mt19937 rng(5);
  const Matrix a = random_matrix(rng, 12, 0.4);
  const Matrix e = pade_exp(a);
  const Matrix f = pade_exp(-a);
  EXPECT_LE(max_abs(e * f - Matrix::Identity(12, 12)), 1e-12);
  EXPECT_LE(max_abs(pade_exp(2.0 * a) - e * e), 1e-11 * max_abs(e * e));
}

TEST(Expm, ScalingBoundIsEnforced) {
  Matrix a = Matrix::Identity(4, 4) * 1e6;
  EXPECT_THROW(pade_exp(a, 3), ExpmError);
  const Matrix huge = Matrix::Identity(2, 2) * 1e300;
  EXPECT_THROW(pade_exp(huge), ExpmError);
}

TEST(Expm, MatExpChecksAntiHermitianClaim) {
  const FockSpace s = make_space(6);
  Matrix h = Matrix::Zero(6, 6);
  h(0, 1) = 1.0;
  h(1, 0) = 1.0;
  EXPECT_THROW(mat_exp(Op(s, h, "h", Claim::anti_hermitian)), InvalidArgument);
  const Op ok = mat_exp(Op(s, kI * h, "ih", Claim::anti_hermitian));
  EXPECT_TRUE(has_claim(ok.claims(), Claim::unitary));
  EXPECT_NEAR(std::abs(ok.mat()(0, 0) - std::cos(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ok.mat()(1, 0) - kI * std::sin(1.0)), 0.0, 1e-14);
}

TEST(HermitianEvolution, MatchesPadeAndRejectsNonHermitian) {
  std::mt19937 rng(99);
  const FockSpace s = make_space(16);
  const Matrix g = random_matrix(rng, 16, 0.3);
  const Op h(s, 0.5 * (g + g.adjoint()));
  const HermitianEvolution ev(h);
  for (double l : {0.0, 0.7, 2.5}) {
    EXPECT_LE(max_abs(ev(l).mat() - pade_exp(kI * l * h.mat())), 1e-12);
  }
  EXPECT_LE(max_abs(ev(0.0).mat() - Matrix::Identity(16, 16)), 1e-14);
  EXPECT_THROW(HermitianEvolution(Op(s, g)), NotHermitian);
}
