#include "paritydisp/expm.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "paritydisp/error.hpp"

namespace paritydisp {

namespace {

constexpr std::array<double, 4> kB3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kB9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// r = q^{-1} p with p = u + v, q = -u + v.
Matrix solve_pade(const Matrix& u, const Matrix& v) {
  return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t D>
Matrix pade_low(const Matrix& a, const std::array<double, D>& b) {
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix even = b[0] * ident;
  Matrix odd = b[1] * ident;
  Matrix pw = ident;
  for (std::size_t k = 1; 2 * k < D; ++k) {
    pw = pw * a2;
    even += b[2 * k] * pw;
    if (2 * k + 1 < D) odd += b[2 * k + 1] * pw;
  }
  return solve_pade(a * odd, even);
}

Matrix pade13(const Matrix& a) {
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const auto& b = kB13;
  Matrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Matrix u = a * (a6 * inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  Matrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Matrix v = a6 * inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return solve_pade(u, v);
}

}  // namespace

Matrix pade_exp(const Matrix& a, int max_squarings) {
  if (a.rows() != a.cols()) throw InvalidArgument("matrix exponential of a non-square matrix");
  if (!a.allFinite()) throw ExpmError("matrix exponential of a non-finite matrix");
  if (a.size() == 0) return a;

  const double norm1 = one_norm(a);
  if (norm1 <= kTheta3) return pade_low(a, kB3);
  if (norm1 <= kTheta5) return pade_low(a, kB5);
  if (norm1 <= kTheta7) return pade_low(a, kB7);
  if (norm1 <= kTheta9) return pade_low(a, kB9);

  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
  if (s > max_squarings) {
    std::ostringstream msg;
    msg << "matrix exponential needs " << s << " squarings (bound " << max_squarings
        << ", 1-norm " << norm1 << ")";
    throw ExpmError(msg.str());
  }
  Matrix r = pade13(a / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) r = r * r;
  if (!r.allFinite()) throw ExpmError("matrix exponential overflowed");
  return r;
}

Matrix anti_hermitian_exp(const Matrix& a) {
  // a = -i h with h = i a hermitian, so exp(a) = V diag(exp(-i mu)) V^dag.
  const Matrix h = kI * a;
  const Matrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
  if (eig.info() != Eigen::Success) throw ExpmError("hermitian eigensolver did not converge");
  const Eigen::VectorXd& mu = eig.eigenvalues();
  Vector phases(mu.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k) phases(k) = std::exp(-kI * mu(k));
  const Matrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Op mat_exp(const Op& m, const ExpmOptions& options) {
  Matrix primary = pade_exp(m.mat(), options.max_squarings);
  Claim claims = Claim::none;
  if (has_claim(m.claims(), Claim::anti_hermitian)) {
    const double scale = std::max(1.0, max_abs(m.mat()));
    const double skew = max_abs(m.mat() + m.mat().adjoint());
    if (skew > 1e-12 * scale) {
      std::ostringstream msg;
      msg << "operator '" << m.label() << "' claims anti-hermitian but |M + M^dag|_max = " << skew;
      throw InvalidArgument(msg.str());
    }
    claims = Claim::unitary;
    if (options.cross_check) {
      const double gap = max_abs(primary - anti_hermitian_exp(m.mat()));
      if (gap > options.cross_check_tol) {
        std::ostringstream msg;
        msg << "Pade and eigendecomposition exponentials of '" << m.label()
            << "' disagree by " << gap << " (tolerance " << options.cross_check_tol << ")";
        throw ExpmError(msg.str());
      }
    }
  }
  return Op(m.space(), std::move(primary), "exp(" + m.label() + ")", claims);
}

HermitianEvolution::HermitianEvolution(const Op& h, double hermitian_tol)
    : space_(h.space()), label_(h.label()) {
  const double residual = edge_residual(h - adjoint(h));
  if (residual > hermitian_tol) {
    std::ostringstream msg;
    msg << "operator '" << h.label() << "' is not hermitian: edge residual " << residual;
    throw NotHermitian(msg.str());
  }
  const Matrix herm = 0.5 * (h.mat() + h.mat().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
  if (eig.info() != Eigen::Success) throw ExpmError("hermitian eigensolver did not converge");
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
}

Op HermitianEvolution::operator()(double lambda) const {
  Vector phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    phases(k) = std::exp(kI * (lambda * eigenvalues_(k)));
  }
  std::ostringstream label;
  label << "exp(i*" << lambda << "*" << label_ << ")";
  return Op(space_, eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint(), label.str(),
            Claim::unitary);
}

Op exp_i_hermitian(const Op& h, double lambda) { return HermitianEvolution(h)(lambda); }

}  // namespace paritydisp
