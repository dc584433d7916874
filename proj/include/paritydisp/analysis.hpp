#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "paritydisp/linalg.hpp"
#include "paritydisp/operators.hpp"

namespace paritydisp {

struct NumberStatistics {
  std::vector<double> probs;  // p_n = |<n|psi>|^2
  double mean_n = 0.0;
  double tail_mass_above_k = 0.0;
  /// 1 - sum(p_n); sum(probs) + norm_deficit == 1 by construction.
  double norm_deficit = 0.0;
};

NumberStatistics number_statistics(const Ket& ket);

/// Sum of p_n over n not divisible by m.
double off_support_mass(const Ket& ket, int m);

/// |<a|b>|^2. Throws SpaceMismatch for kets from different spaces.
double fidelity(const Ket& a, const Ket& b);

struct ConvergenceReport {
  enum class Verdict { converged, not_converged };

  int m = 1;
  cplx z{};
  std::vector<int> dims;
  std::vector<double> deltas;  // 1 - fidelity between dims[i] and dims[i+1]
  double threshold = 1e-8;
  Verdict verdict = Verdict::not_converged;

  double max_delta() const;
  bool converged() const { return verdict == Verdict::converged; }
};

std::string to_string(ConvergenceReport::Verdict verdict);

/// Computes D_m(z)|0> at every dim (radius guard bypassed) and compares
/// consecutive dims. Throws InvalidArgument unless dims has >= 2 strictly
/// increasing entries.
ConvergenceReport convergence_diagnostic(int m, cplx z, const std::vector<int>& dims,
                                         double threshold = 1e-8, OperatorConfig cfg = {});

/// max over n <= n_max of |Im <n|D_m(z)|n>|, n_max < K.
double diagonal_reality_scan(const FockSpace& space, int m, cplx z, int n_max,
                             const OperatorConfig& cfg = {});

/// Moments of x = (a + a_dag)/sqrt(2) and p = (a - a_dag)/(i sqrt(2)); the
/// vacuum has var_x = var_p = 1/2.
struct QuadratureMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
};

QuadratureMoments quadrature_moments(const Ket& ket);

struct PhaseSpaceGrid {
  double x_min = -3.0;
  double x_max = 3.0;
  int nx = 31;
  double p_min = -3.0;
  double p_max = 3.0;
  int np = 31;
};

struct GridRow {
  double x;
  double p;
  double value;
};

/// Wigner function W(x, p) = (1/pi) <psi| B_1(2 alpha) |psi>, alpha = (x + ip)/sqrt(2),
/// normalised so that its integral over dx dp is 1.
/// Rows ordered x-major. Points are evaluated on up to `jobs` threads.
std::vector<GridRow> wigner_grid(const Ket& ket, const PhaseSpaceGrid& grid,
                                 const OperatorConfig& cfg = {}, int jobs = 1);

/// Comma-separated table with a one-line header and 17 significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);

}  // namespace paritydisp
