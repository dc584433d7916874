#pragma once

// Closed forms computed without the library, used as reference values.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

// <n|z> = exp(-|z|^2/2) z^n / sqrt(n!)
inline cplx coherent_amp(cplx z, int n) {
  const double r = std::abs(z);
  if (r == 0.0) return n == 0 ? 1.0 : 0.0;
  const double mag = std::exp(n * std::log(r) - 0.5 * r * r - 0.5 * log_factorial(n));
  return std::polar(mag, n * std::arg(z));
}

// <row|D(z)|col> through associated Laguerre polynomials.
inline cplx displacement_element(cplx z, int row, int col) {
  const double x = std::norm(z);
  const double g = std::exp(-0.5 * x);
  if (row >= col) {
    const int d = row - col;
    const double pre = std::exp(0.5 * (log_factorial(col) - log_factorial(row)));
    return pre * std::pow(z, d) * g * std::assoc_laguerre(col, d, x);
  }
  const int d = col - row;
  const double pre = std::exp(0.5 * (log_factorial(row) - log_factorial(col)));
  return pre * std::pow(-std::conj(z), d) * g * std::assoc_laguerre(row, d, x);
}

// Squeezed vacuum exp((z* a^2 - z a_dag^2)/2)|0>.
inline cplx squeezed_vacuum_amp(cplx z, int n) {
  if (n % 2) return 0.0;
  const int k = n / 2;
  const double r = std::abs(z);
  const double t = std::tanh(r);
  const double mag = std::exp(0.5 * log_factorial(2 * k) - k * std::log(2.0) - log_factorial(k)) /
                     std::sqrt(std::cosh(r));
  if (k == 0) return mag;
  return mag * std::pow(-std::polar(t, std::arg(z)), k);
}

inline Eigen::MatrixXcd annihilation(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline cplx random_z(std::mt19937& rng, double radius) {
  std::uniform_real_distribution<double> r(0.0, radius);
  std::uniform_real_distribution<double> phi(-M_PI, M_PI);
  return std::polar(r(rng), phi(rng));
}

}  // namespace oracle
