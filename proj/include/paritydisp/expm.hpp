#pragma once

#include "paritydisp/linalg.hpp"

namespace paritydisp {

struct ExpmOptions {
  /// Refuse inputs that would need more than this many squarings.
  int max_squarings = 60;
  /// For inputs claiming Claim::anti_hermitian, also exponentiate through a
  /// hermitian eigendecomposition and require max-norm agreement.
  bool cross_check = true;
  double cross_check_tol = 1e-10;
};

/// Scaling-and-squaring with diagonal Padé approximants of degree 3..13
/// (Higham's 2005 selection thresholds).
Matrix pade_exp(const Matrix& a, int max_squarings = 60);

/// exp(A) for anti-hermitian A via the eigendecomposition of the hermitian
/// matrix iA. Independent of pade_exp.
Matrix anti_hermitian_exp(const Matrix& a);

/// exp(M). Throws ExpmError on scaling overflow or when the cross-check
/// disagrees, InvalidArgument when the anti-hermitian claim is false.
Op mat_exp(const Op& m, const ExpmOptions& options = {});

/// Reusable spectral decomposition of a hermitian operator H, used to
/// evaluate exp(i lambda H) for many lambda.
class HermitianEvolution {
 public:
  /// Throws NotHermitian when edge_residual(H - H^dag) exceeds `hermitian_tol`.
  explicit HermitianEvolution(const Op& h, double hermitian_tol = 1e-8);

  Op operator()(double lambda) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  FockSpace space_;
  std::string label_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
};

/// exp(i lambda H) for hermitian H.
Op exp_i_hermitian(const Op& h, double lambda);

}  // namespace paritydisp
