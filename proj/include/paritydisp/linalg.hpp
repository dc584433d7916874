#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "paritydisp/fock_space.hpp"

namespace paritydisp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Structural properties a constructor asserts about an operator. They are
/// claims only; verification code measures them with edge_residual.
enum class Claim : unsigned {
  none = 0,
  hermitian = 1u << 0,
  unitary = 1u << 1,
  anti_hermitian = 1u << 2,
};

constexpr Claim operator|(Claim a, Claim b) {
  return static_cast<Claim>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has_claim(Claim set, Claim c) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(c)) != 0;
}

/// Amplitude vector over number states; index n holds <n|psi>.
class Ket {
 public:
  Ket(FockSpace space, Vector amps);

  const FockSpace& space() const { return space_; }
  const Vector& amps() const { return amps_; }
  int dim() const { return space_.dim(); }
  cplx operator[](int n) const { return amps_(n); }

 private:
  FockSpace space_;
  Vector amps_;
};

/// Dense N x N operator with a provenance label. Entries are always finite.
class Op {
 public:
  Op(FockSpace space, Matrix mat, std::string label = {}, Claim claims = Claim::none);

  const FockSpace& space() const { return space_; }
  const Matrix& mat() const { return mat_; }
  const std::string& label() const { return label_; }
  Claim claims() const { return claims_; }
  int dim() const { return space_.dim(); }

  Op relabeled(std::string label, Claim claims = Claim::none) const;

 private:
  FockSpace space_;
  Matrix mat_;
  std::string label_;
  Claim claims_;
};

Ket basis_ket(const FockSpace& space, int n);
Op identity(const FockSpace& space);

// Exact dense algebra. Mixing spaces throws SpaceMismatch.
Ket apply(const Op& op, const Ket& ket);
cplx inner(const Ket& bra, const Ket& ket);  // conjugate-linear in `bra`
double norm(const Ket& ket);
Ket normalized(const Ket& ket);
Op adjoint(const Op& op);
Op mul(const Op& a, const Op& b);
Op power(const Op& op, int k);
Op commutator(const Op& a, const Op& b);
Op anticommutator(const Op& a, const Op& b);

Op operator+(const Op& a, const Op& b);
Op operator-(const Op& a, const Op& b);
Op operator*(const Op& a, const Op& b);
Op operator*(cplx s, const Op& a);
Ket operator*(const Op& a, const Ket& k);
Ket operator+(const Ket& a, const Ket& b);
Ket operator-(const Ket& a, const Ket& b);
Ket operator*(cplx s, const Ket& k);

struct LadderOps {
  Op a;
  Op a_dag;
  Op number;
};

/// a|n> = sqrt(n)|n-1>, a_dag = adjoint(a), number = a_dag a = diag(0..N-1).
LadderOps ladder_ops(const FockSpace& space);

/// diag(f(0), ..., f(N-1)).
Op diag_fn_op(const FockSpace& space, const std::function<cplx(int)>& f,
              std::string label = {});

/// cos(pi n / m) and sin(pi n / m) with range reduction modulo 2m, so that
/// shifting n by m flips the sign bit-exactly and the zeros are exact.
double cos_pi_ratio(long n, int m);
double sin_pi_ratio(long n, int m);

double spectral_norm(const Matrix& m);
double max_abs(const Matrix& m);

/// Spectral norm of P_K M P_K with P_K the projector on levels 0..K-1.
double edge_residual(const Op& op);
/// ||P_K v||_2 for a residual vector.
double edge_residual(const Ket& ket);

void require_same_space(const FockSpace& a, const FockSpace& b);

}  // namespace paritydisp
