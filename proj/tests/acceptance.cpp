// One line per acceptance criterion; exit status is nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "paritydisp/analysis.hpp"
#include "paritydisp/io.hpp"
#include "paritydisp/states.hpp"
#include "paritydisp/verify.hpp"

using namespace paritydisp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// Tracks the worst ratio residual/tolerance seen and which quantity produced it.
class Gate {
 public:
  void le(const std::string& what, double value, double tol) {
    record(what, value, tol, value <= tol);
  }
  void ge(const std::string& what, double value, double bound) {
    record(what, value, bound, value >= bound);
  }
  void require(const std::string& what, bool ok) {
    if (!ok) failures_.push_back(what);
  }
  Outcome outcome() const {
    std::ostringstream d;
    d.precision(3);
    if (!failures_.empty()) {
      d << failures_.size() << " failing, first: " << failures_.front();
      return {false, d.str()};
    }
    d << count_ << " quantities; tightest " << tightest_;
    return {true, d.str()};
  }

 private:
  void record(const std::string& what, double value, double limit, bool ok) {
    ++count_;
    std::ostringstream s;
    s.precision(3);
    s << what << " = " << value << " (limit " << limit << ")";
    if (!ok) failures_.push_back(s.str());
    const double margin = std::abs(value - limit) / std::max(std::abs(limit), 1e-300);
    if (margin < best_margin_) {
      best_margin_ = margin;
      tightest_ = s.str();
    }
  }

  int count_ = 0;
  double best_margin_ = 1e300;
  std::string tightest_;
  std::vector<std::string> failures_;
};

const FockSpace kN128 = make_space(128, 64);
const FockSpace kN256 = make_space(256);
const std::vector<cplx> kCoherentZs = {{0.3, 0.0}, {0.8, 0.0}, {0.5, 0.3}};

std::string tag(const char* name, int m, cplx z) {
  std::ostringstream s;
  s << name << " m=" << m << " z=" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return s.str();
}

// m = 3 needs N = 256 for its tail mass to clear the default tolerance.
const FockSpace& space_for(int m) { return m >= 3 ? kN256 : kN128; }
cplx z_for(int m) { return m >= 3 ? cplx(0.2, 0.0) : cplx(0.5, 0.3); }

Outcome ladder_parity_algebra() {
  Gate g;
  const LadderOps lad = ladder_ops(kN128);
  g.le("[a,a^dag]-I", edge_residual(commutator(lad.a, lad.a_dag) - identity(kN128)), 1e-10);
  g.le("{cos(pi N), a}", edge_residual(anticommutator(parity_cos(kN128, 1), lad.a)), 1e-10);
  for (int m = 1; m <= 5; ++m) {
    const Op c = parity_cos(kN128, m);
    g.le("{C_m, a^m} m=" + std::to_string(m), edge_residual(anticommutator(c, power(lad.a, m))), 1e-10);
    g.le("[C_m, a^2m] m=" + std::to_string(m), edge_residual(commutator(c, power(lad.a, 2 * m))), 1e-10);
  }
  return g.outcome();
}

Outcome coherent_facts() {
  Gate g;
  const LadderOps lad = ladder_ops(kN128);
  for (cplx z : kCoherentZs) {
    const Ket k = coherent(kN128, z).ket;
    g.le(tag("a|z>-z|z>", 1, z), edge_residual(apply(lad.a, k) - z * k), 1e-10);
    g.le(tag("<0|z>-exp(-|z|^2/2)", 1, z), std::abs(k[0] - std::exp(-0.5 * std::norm(z))), 1e-12);
  }
  return g.outcome();
}

Outcome b_cycle() {
  Gate g;
  const Ket vac = basis_ket(kN128, 0);
  for (cplx z : kCoherentZs) {
    const Ket k = coherent(kN128, z).ket;
    const Op b = parity_displacement(kN128, 1, z);
    g.ge(tag("F(B|z>,|0>)", 1, z), fidelity(apply(b, k), vac), 1 - 1e-9);
    g.ge(tag("F(B|0>,|z>)", 1, z), fidelity(apply(b, vac), k), 1 - 1e-9);
  }
  return g.outcome();
}

Outcome eigenstructure() {
  Gate g;
  for (int m = 1; m <= 3; ++m) {
    const FockSpace& s = space_for(m);
    const cplx z = z_for(m);
    const BEigenstates e = b_eigenstates(s, m, z);
    const Op b = parity_displacement(s, m, z);
    const Ket vac = basis_ket(s, 0);
    const Ket zm = gcs(s, m, z).ket;
    g.le(tag("B|b+>-|b+>", m, z), edge_residual(apply(b, e.plus.ket) - e.plus.ket), 1e-8);
    g.le(tag("B|b->+|b->", m, z), edge_residual(apply(b, e.minus.ket) + e.minus.ket), 1e-8);
    g.le(tag("|<b+|b->|", m, z), std::abs(inner(e.plus.ket, e.minus.ket)), 1e-10);
    const Ket rebuilt = cplx(0.5) * (cplx(e.norm_plus) * e.plus.ket + cplx(e.norm_minus) * e.minus.ket);
    g.le(tag("vacuum decomposition", m, z), edge_residual(rebuilt - vac), 1e-10);
    g.le(tag("N+ vs ||0>+|z_m>|", m, z), std::abs(e.norm_plus - norm(vac + zm)), 1e-10);
    g.le(tag("N- vs ||0>-|z_m>|", m, z), std::abs(e.norm_minus - norm(vac - zm)), 1e-10);
  }
  return g.outcome();
}

Outcome u_dual_construction() {
  Gate g;
  const ParameterGrid grid;
  for (int m : grid.ms) {
    for (cplx z : grid.zs) {
      if (m >= 3 && std::abs(z) > OperatorConfig::kDefaultSafeRadius) continue;
      for (double l : grid.lambdas) {
        const Op e = u_evolution(kN128, m, z, l, UMethod::exponential);
        g.le(tag("exp vs closed", m, z), edge_residual(e - u_evolution(kN128, m, z, l, UMethod::closed_form)),
             1e-8);
        for (double l2 : grid.lambdas) {
          g.le(tag("composition", m, z),
               edge_residual(e * u_evolution(kN128, m, z, l2) - u_evolution(kN128, m, z, l + l2)), 1e-8);
        }
        if (m == 1) {
          const Op form = cplx(std::cos(l)) * identity(kN128) +
                          (kI * std::sin(l)) * (displacement(kN128, z) * parity_cos(kN128, 1));
          g.le(tag("U_1 special form", m, z), edge_residual(e - form), 1e-10);
        }
        if (m == 2) {
          const Op c = parity_cos(kN128, 2);
          const Op s = parity_sin(kN128, 2);
          const Op form = s * s + cplx(std::cos(l)) * (c * c) +
                          (kI * std::sin(l)) * (generalized_displacement(kN128, 2, z) * c);
          g.le(tag("U_2 special form", m, z), edge_residual(e - form), 1e-10);
        }
      }
    }
  }
  return g.outcome();
}

Outcome superposition_action() {
  Gate g;
  for (int m = 1; m <= 3; ++m) {
    const FockSpace& s = space_for(m);
    const cplx z = z_for(m);
    const Ket zm = gcs(s, m, z).ket;
    for (double l : {0.7, M_PI / 4, M_PI / 2}) {
      const Ket out = superposition_state(s, m, z, l).ket;
      const Ket want = cplx(std::cos(l)) * basis_ket(s, 0) + (kI * std::sin(l)) * zm;
      g.le(tag("U|0> two-term", m, z), edge_residual(out - want), 1e-9);
    }
  }
  return g.outcome();
}

Outcome support_theorem() {
  Gate g;
  const cplx z(0.2, 0.0);
  for (int m = 1; m <= 4; ++m) {
    // m = 4 never converges under doubling, so it is built under the explicit override.
    const StateOptions opts = m == 4 ? StateOptions::overridden() : StateOptions{};
    const FockSpace& s = space_for(m);
    const State st = gcs(s, m, z, opts);
    g.require("override recorded for m=4", m != 4 || st.meta.override_used);
    g.le(tag("off-support mass", m, z), off_support_mass(st.ket, m), 1e-10);
    const Ket reflected = gcs(s, m, -z, opts).ket;
    g.le(tag("C|z_m>-|(-z)_m>", m, z), edge_residual(apply(parity_cos(s, m), st.ket) - reflected), 1e-9);
    g.le(tag("S|z_m>", m, z), edge_residual(apply(parity_sin(s, m), st.ket)), 1e-9);
  }
  return g.outcome();
}

Outcome squeeze_cross_check() {
  Gate g;
  for (double r : {0.3, 0.6, 1.0}) {
    const Ket k = gcs(kN256, 2, r).ket;
    g.le(tag("<0|z_2>-1/sqrt(cosh|z|)", 2, r), std::abs(k[0] - 1.0 / std::sqrt(std::cosh(r))), 1e-8);
  }
  return g.outcome();
}

Outcome cat_state_check() {
  Gate g;
  for (cplx z : {cplx(0.5, 0.0), cplx(1.0, 0.0), cplx(1.5, 0.0), cplx(0.5, 0.3)}) {
    const State cat = cat_state(kN128, z, M_PI / 4, -z);
    const Ket pair = normalized(coherent(kN128, -z).ket + kI * coherent(kN128, z).ket);
    g.ge(tag("F(cat, two-term)", 1, z), fidelity(cat.ket, pair), 1 - 1e-8);
    g.le(tag("|1-||V|0>|||", 1, z), std::abs(1.0 - std::sqrt(1.0 - cat.meta.truncation_loss)), 1e-10);
    const Ket scaled = cplx(1.0 / std::sqrt(2.0)) *
                       (coherent(kN128, -z).ket + kI * coherent(kN128, z).ket);
    g.le(tag("V|0> - (|-z>+i|z>)/sqrt2", 1, z),
         norm(apply(v_operator(kN128, 1, z, -z, M_PI / 4), basis_ket(kN128, 0)) - scaled), 1e-9);
  }
  return g.outcome();
}

Outcome bases() {
  Gate g;
  for (int m = 1; m <= 3; ++m) {
    const cplx z = m == 3 ? cplx(0.2, 0.0) : cplx(0.5, 0.3);
    Matrix cols(128, 16);
    for (int n = 0; n < 16; ++n) cols.col(n) = gdf_basis_state(kN128, m, z, n).ket.amps();
    g.le(tag("Gram-I n<16", m, z), max_abs(cols.adjoint() * cols - Matrix::Identity(16, 16)), 1e-8);
    g.le(tag("|Im<n|D_m|n>| n<=7", m, z), diagonal_reality_scan(kN128, m, z, 7), 1e-10);

    const FockSpace& s = space_for(m);
    for (double l : {0.7, M_PI / 4}) {
      const Op u = u_evolution(s, m, z, l);
      for (int n : {0, 1, 2, 3, 5}) {
        const Ket direct = apply(u, basis_ket(s, n));
        g.le(tag("U|n> vs dressed basis", m, z),
             edge_residual(direct - dressed_basis_state(s, m, z, l, n).ket), 1e-9);
        const Ket col = gdf_basis_state(s, m, z, n).ket;
        const double off = col.amps().squaredNorm() - std::norm(col[n]);
        const double theta = l * cos_pi_ratio(n, m);
        g.le(tag("number-statistics identity", m, z),
             std::abs(off * std::pow(std::sin(theta), 2) + std::norm(direct[n]) - 1.0), 1e-10);
      }
    }
  }
  return g.outcome();
}

Outcome suite_determinism_and_canary() {
  Gate g;
  auto strip = [](SuiteReport r) {
    r.generated_at.clear();
    return write_report(r);
  };
  const SuiteReport first = run_suite(ParameterGrid{});
  const SuiteReport second = run_suite(ParameterGrid{});
  g.require("identical default reports", strip(first) == strip(second));
  g.require("default suite has no genuine failures", first.ok());
  g.require("default suite confirms the printed-form discrepancies",
            first.summary.discrepancies_confirmed > 0);

  SuiteOptions faulty;
  OperatorCache private_cache;
  faulty.ops.cache = &private_cache;
  faulty.ops.fault = Fault::flip_creation_sign;
  const SuiteReport canary = run_suite(ParameterGrid{}, {"eq15a-hermiticity"}, faulty);
  bool failed = false;
  for (const auto& c : canary.results) {
    failed = failed || (c.variant == "hermiticity" && c.verdict == Verdict::fail);
  }
  g.require("canary makes eq15a-hermiticity fail", failed && !canary.ok());
  Outcome o = g.outcome();
  if (o.pass) {
    std::ostringstream d;
    d << first.summary.total << " results, " << first.summary.skipped << " skipped, "
      << first.summary.discrepancies_confirmed << " printed-form discrepancies; canary caught";
    o.detail = d.str();
  }
  return o;
}

Outcome convergence_guard() {
  Gate g;
  const ConvergenceReport hard = convergence_diagnostic(3, 1.5, {128, 256});
  g.require("m=3 |z|=1.5 not-converged between 128 and 256", !hard.converged());
  for (int m : {1, 2}) {
    for (cplx z : ParameterGrid{}.zs) {
      const ConvergenceReport r = convergence_diagnostic(m, z, {64, 128});
      g.le(tag("consecutive infidelity", m, z), r.max_delta(), r.threshold);
      g.require(tag("converged", m, z), r.converged());
    }
  }
  Outcome o = g.outcome();
  std::ostringstream d;
  d.precision(3);
  d << "; m=3 |z|=1.5 delta " << hard.max_delta();
  o.detail += d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"ladder/parity algebra", ladder_parity_algebra},
      {"coherent-state facts", coherent_facts},
      {"B(z) cycle", b_cycle},
      {"eigenstructure of B_m", eigenstructure},
      {"U_m dual construction", u_dual_construction},
      {"superposition action", superposition_action},
      {"support theorem and parity pair", support_theorem},
      {"squeeze cross-check", squeeze_cross_check},
      {"cat state", cat_state_check},
      {"bases", bases},
      {"suite determinism and canary", suite_determinism_and_canary},
      {"convergence guard", convergence_guard},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
