#include "paritydisp/linalg.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "paritydisp/error.hpp"

namespace paritydisp {

namespace {

std::string describe(const FockSpace& s) {
  return "{N=" + std::to_string(s.dim()) + ", K=" + std::to_string(s.interior_dim()) + "}";
}

}  // namespace

void require_same_space(const FockSpace& a, const FockSpace& b) {
  if (!(a == b)) {
    throw SpaceMismatch("operands live in different Fock spaces " + describe(a) + " vs " +
                        describe(b));
  }
}

Ket::Ket(FockSpace space, Vector amps) : space_(space), amps_(std::move(amps)) {
  if (amps_.size() != space_.dim()) {
    throw SpaceMismatch("ket length " + std::to_string(amps_.size()) +
                        " does not match space dimension " + std::to_string(space_.dim()));
  }
}

Op::Op(FockSpace space, Matrix mat, std::string label, Claim claims)
    : space_(space), mat_(std::move(mat)), label_(std::move(label)), claims_(claims) {
  if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim()) {
    throw SpaceMismatch("operator shape does not match space dimension " +
                        std::to_string(space_.dim()));
  }
  if (!mat_.allFinite()) {
    throw Error("operator '" + label_ + "' has non-finite entries");
  }
}

Op Op::relabeled(std::string label, Claim claims) const {
  return Op(space_, mat_, std::move(label), claims);
}

Ket basis_ket(const FockSpace& space, int n) {
  if (n < 0 || n >= space.dim()) {
    throw InvalidArgument("number state index " + std::to_string(n) + " outside truncation");
  }
  Vector v = Vector::Zero(space.dim());
  v(n) = 1.0;
  return Ket(space, std::move(v));
}

Op identity(const FockSpace& space) {
  return Op(space, Matrix::Identity(space.dim(), space.dim()), "I",
            Claim::hermitian | Claim::unitary);
}

Ket apply(const Op& op, const Ket& ket) {
  require_same_space(op.space(), ket.space());
  return Ket(ket.space(), op.mat() * ket.amps());
}

cplx inner(const Ket& bra, const Ket& ket) {
  require_same_space(bra.space(), ket.space());
  return bra.amps().dot(ket.amps());
}

double norm(const Ket& ket) { return ket.amps().norm(); }

Ket normalized(const Ket& ket) {
  const double n = norm(ket);
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  return Ket(ket.space(), ket.amps() / n);
}

Op adjoint(const Op& op) {
  Claim c = Claim::none;
  if (has_claim(op.claims(), Claim::hermitian)) c = c | Claim::hermitian;
  if (has_claim(op.claims(), Claim::unitary)) c = c | Claim::unitary;
  if (has_claim(op.claims(), Claim::anti_hermitian)) c = c | Claim::anti_hermitian;
  return Op(op.space(), op.mat().adjoint(), "adjoint(" + op.label() + ")", c);
}

Op mul(const Op& a, const Op& b) {
  require_same_space(a.space(), b.space());
  return Op(a.space(), a.mat() * b.mat(), a.label() + "*" + b.label());
}

Op power(const Op& op, int k) {
  if (k < 0) throw InvalidArgument("negative operator power");
  Matrix result = Matrix::Identity(op.dim(), op.dim());
  for (int i = 0; i < k; ++i) result = result * op.mat();
  return Op(op.space(), std::move(result), op.label() + "^" + std::to_string(k));
}

Op commutator(const Op& a, const Op& b) {
  require_same_space(a.space(), b.space());
  return Op(a.space(), a.mat() * b.mat() - b.mat() * a.mat(),
            "[" + a.label() + "," + b.label() + "]");
}

Op anticommutator(const Op& a, const Op& b) {
  require_same_space(a.space(), b.space());
  return Op(a.space(), a.mat() * b.mat() + b.mat() * a.mat(),
            "{" + a.label() + "," + b.label() + "}");
}

Op operator+(const Op& a, const Op& b) {
  require_same_space(a.space(), b.space());
  return Op(a.space(), a.mat() + b.mat(), a.label() + "+" + b.label());
}

Op operator-(const Op& a, const Op& b) {
  require_same_space(a.space(), b.space());
  return Op(a.space(), a.mat() - b.mat(), a.label() + "-" + b.label());
}

Op operator*(const Op& a, const Op& b) { return mul(a, b); }

Op operator*(cplx s, const Op& a) { return Op(a.space(), s * a.mat(), a.label()); }

Ket operator*(const Op& a, const Ket& k) { return apply(a, k); }

Ket operator+(const Ket& a, const Ket& b) {
  require_same_space(a.space(), b.space());
  return Ket(a.space(), a.amps() + b.amps());
}

Ket operator-(const Ket& a, const Ket& b) {
  require_same_space(a.space(), b.space());
  return Ket(a.space(), a.amps() - b.amps());
}

Ket operator*(cplx s, const Ket& k) { return Ket(k.space(), s * k.amps()); }

LadderOps ladder_ops(const FockSpace& space) {
  const int n = space.dim();
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  Matrix a_dag = a.adjoint();
  Matrix number = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) number(k, k) = static_cast<double>(k);
  return {Op(space, std::move(a), "a"), Op(space, std::move(a_dag), "a^dag"),
          Op(space, std::move(number), "a^dag a", Claim::hermitian)};
}

Op diag_fn_op(const FockSpace& space, const std::function<cplx(int)>& f, std::string label) {
  Vector d(space.dim());
  for (int n = 0; n < space.dim(); ++n) d(n) = f(n);
  return Op(space, d.asDiagonal().toDenseMatrix(), std::move(label));
}

double cos_pi_ratio(long n, int m) {
  if (m < 1) throw InvalidArgument("parity order m must be >= 1");
  const long period = 2L * m;
  long k = ((n % period) + period) % period;  // [0, 2m)
  if (k > m) k = period - k;                  // cos is even about pi: now [0, m]
  if (2 * k == m) return 0.0;
  if (2 * k > m) return -std::cos(std::numbers::pi * static_cast<double>(m - k) / m);
  return std::cos(std::numbers::pi * static_cast<double>(k) / m);
}

double sin_pi_ratio(long n, int m) {
  if (m < 1) throw InvalidArgument("parity order m must be >= 1");
  const long period = 2L * m;
  long k = ((n % period) + period) % period;
  double sign = 1.0;
  if (k >= m) {
    sign = -1.0;
    k -= m;
  }
  if (k == 0) return 0.0;
  if (2 * k > m) k = m - k;
  if (2 * k == m) return sign;
  return sign * std::sin(std::numbers::pi * static_cast<double>(k) / m);
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double edge_residual(const Op& op) {
  const int k = op.space().interior_dim();
  return spectral_norm(op.mat().topLeftCorner(k, k));
}

double edge_residual(const Ket& ket) {
  const int k = ket.space().interior_dim();
  return ket.amps().head(k).norm();
}

}  // namespace paritydisp
