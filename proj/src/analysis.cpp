#include "paritydisp/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "paritydisp/error.hpp"
#include "paritydisp/states.hpp"

namespace paritydisp {

NumberStatistics number_statistics(const Ket& ket) {
  NumberStatistics stats;
  stats.probs.resize(ket.dim());
  double total = 0.0;
  for (int n = 0; n < ket.dim(); ++n) {
    const double p = std::norm(ket[n]);
    stats.probs[n] = p;
    stats.mean_n += n * p;
    total += p;
    if (n >= ket.space().interior_dim()) stats.tail_mass_above_k += p;
  }
  stats.norm_deficit = 1.0 - total;
  return stats;
}

double off_support_mass(const Ket& ket, int m) {
  if (m < 1) throw InvalidArgument("support order m must be >= 1");
  double mass = 0.0;
  for (int n = 0; n < ket.dim(); ++n) {
    if (n % m != 0) mass += std::norm(ket[n]);
  }
  return mass;
}

double fidelity(const Ket& a, const Ket& b) { return std::norm(inner(a, b)); }

double ConvergenceReport::max_delta() const {
  return deltas.empty() ? 0.0 : *std::max_element(deltas.begin(), deltas.end());
}

std::string to_string(ConvergenceReport::Verdict verdict) {
  return verdict == ConvergenceReport::Verdict::converged ? "converged" : "not-converged";
}

ConvergenceReport convergence_diagnostic(int m, cplx z, const std::vector<int>& dims,
                                         double threshold, OperatorConfig cfg) {
  if (dims.size() < 2) throw InvalidArgument("convergence diagnostic needs at least two dims");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 4) throw InvalidArgument("every dim must be >= 4");
    if (i > 0 && dims[i] <= dims[i - 1]) {
      throw InvalidArgument("dims must be strictly increasing");
    }
  }
  cfg.allow_unsafe_radius = true;
  ConvergenceReport report;
  report.m = m;
  report.z = z;
  report.dims = dims;
  report.threshold = threshold;
  report.deltas = detail::consecutive_infidelities(m, z, dims, cfg);
  report.verdict = report.max_delta() <= threshold ? ConvergenceReport::Verdict::converged
                                                   : ConvergenceReport::Verdict::not_converged;
  return report;
}

double diagonal_reality_scan(const FockSpace& space, int m, cplx z, int n_max,
                             const OperatorConfig& cfg) {
  if (n_max < 0 || n_max >= space.interior_dim()) {
    throw InvalidArgument("n_max must lie in [0, K)");
  }
  const Op d = generalized_displacement(space, m, z, cfg);
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) worst = std::max(worst, std::abs(d.mat()(n, n).imag()));
  return worst;
}

QuadratureMoments quadrature_moments(const Ket& ket) {
  const LadderOps lad = ladder_ops(ket.space());
  const double r2 = std::numbers::sqrt2;
  const Matrix x = (lad.a.mat() + lad.a_dag.mat()) / r2;
  const Matrix p = (lad.a.mat() - lad.a_dag.mat()) / (kI * r2);
  const Vector& v = ket.amps();
  const Vector xv = x * v;
  const Vector pv = p * v;
  QuadratureMoments q;
  q.mean_x = v.dot(xv).real();
  q.mean_p = v.dot(pv).real();
  q.var_x = xv.squaredNorm() - q.mean_x * q.mean_x;
  q.var_p = pv.squaredNorm() - q.mean_p * q.mean_p;
  return q;
}

std::vector<GridRow> wigner_grid(const Ket& ket, const PhaseSpaceGrid& grid,
                                 const OperatorConfig& cfg, int jobs) {
  if (grid.nx < 1 || grid.np < 1) throw InvalidArgument("phase-space grid must be non-empty");
  auto axis = [](double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  };
  const std::size_t total = static_cast<std::size_t>(grid.nx) * grid.np;
  std::vector<GridRow> rows(total);
  OperatorConfig local = cfg;
  local.cache = nullptr;

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int ix = static_cast<int>(idx / grid.np);
      const int ip = static_cast<int>(idx % grid.np);
      const double x = axis(grid.x_min, grid.x_max, grid.nx, ix);
      const double p = axis(grid.p_min, grid.p_max, grid.np, ip);
      const cplx alpha = cplx(x, p) / std::numbers::sqrt2;
      const Op b = parity_displacement(ket.space(), 1, 2.0 * alpha, local);
      const double w = 1.0 / std::numbers::pi * inner(ket, apply(b, ket)).real();
      rows[idx] = GridRow{x, p, w};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, total);
  if (workers == 1) {
    work(0, total);
    return rows;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin < end) threads.emplace_back(work, begin, end);
  }
  for (auto& t : threads) t.join();
  return rows;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << table.header[i];
  }
  out << '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[i], std::chars_format::general, 17);
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty table");
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc()) throw InvalidArgument("malformed table cell '" + cell + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace paritydisp
