#include "paritydisp/states.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "paritydisp/complex_text.hpp"
#include "paritydisp/error.hpp"

namespace paritydisp {

namespace {

constexpr std::array<std::pair<StateKind, std::string_view>, 9> kKindNames = {{
    {StateKind::fock, "fock"},
    {StateKind::coherent, "coherent"},
    {StateKind::gcs, "gcs"},
    {StateKind::b_plus, "b_plus"},
    {StateKind::b_minus, "b_minus"},
    {StateKind::superposition, "superposition"},
    {StateKind::cat, "cat"},
    {StateKind::gdf_basis, "gdf_basis"},
    {StateKind::dressed_basis, "dressed_basis"},
}};

// Below this modulus <0|z_m> carries no usable phase.
constexpr double kUnphasableOverlap = 1e-12;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// Renormalises in place and returns the norm deficit 1 - ||v||^2.
double renormalize(Vector& v) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) throw InvalidArgument("state has zero norm");
  v /= std::sqrt(n2);
  return 1.0 - n2;
}

void enforce_tail(const Ket& ket, StateMeta& meta, const StateOptions& opts, const char* what) {
  meta.tail_mass_above_k = tail_mass_above_interior(ket);
  if (meta.tail_mass_above_k <= ket.space().tail_tol()) return;
  std::ostringstream msg;
  msg << what << ": probability mass above K=" << ket.space().interior_dim() << " is "
      << meta.tail_mass_above_k << " > tail_tol " << ket.space().tail_tol();
  if (!opts.allow_tail_excess) throw TailMassExceeded(msg.str());
  meta.override_used = true;
  meta.notes.push_back("override: " + msg.str());
}

void require_converged(const FockSpace& space, int m, cplx z, const StateOptions& opts,
                       StateMeta& meta) {
  if (m < 3) return;
  const int half = space.dim() / 2;
  std::ostringstream msg;
  if (half < 4) {
    msg << "convergence: N=" << space.dim() << " too small to compare against N/2";
  } else {
    const double delta = detail::consecutive_infidelities(m, z, {half, space.dim()}, opts.ops)[0];
    if (delta <= opts.convergence_threshold) return;
    msg << "convergence: D_m(z)|0> changes by infidelity " << delta << " between N=" << half
        << " and N=" << space.dim() << " (threshold " << opts.convergence_threshold
        << ", m=" << m << ", z=" << format_complex(z) << ")";
  }
  if (!opts.allow_unconverged) throw NotConverged(msg.str());
  meta.override_used = true;
  meta.notes.push_back("override: " + msg.str());
}

StateMeta meta_for(StateKind kind, int m, cplx z, cplx u, double lambda, int n,
                   const StateOptions& opts) {
  StateMeta meta;
  meta.kind = kind;
  meta.params = OperatorParams{m, z, u, lambda};
  meta.n = n;
  if (m >= 3 && std::abs(z) > opts.ops.safe_radius && opts.ops.allow_unsafe_radius) {
    meta.override_used = true;
    meta.notes.push_back("override: |z| beyond safe radius " + fmt(opts.ops.safe_radius));
  }
  return meta;
}

}  // namespace

std::string_view to_string(StateKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StateKind state_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw InvalidArgument("unknown state kind '" + std::string(name) + "'");
}

double tail_mass_above_interior(const Ket& ket) {
  const int k = ket.space().interior_dim();
  return ket.amps().tail(ket.dim() - k).squaredNorm();
}

namespace detail {

Vector vacuum_column(int dim, int m, cplx z, const OperatorConfig& cfg) {
  return generalized_displacement(make_space(dim), m, z, cfg).mat().col(0);
}

std::vector<double> consecutive_infidelities(int m, cplx z, const std::vector<int>& dims,
                                             const OperatorConfig& cfg) {
  std::vector<double> deltas;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const Vector small = vacuum_column(dims[i], m, z, cfg);
    const Vector large = vacuum_column(dims[i + 1], m, z, cfg);
    const cplx overlap = large.head(small.size()).dot(small);
    const double fid = std::norm(overlap) / (small.squaredNorm() * large.squaredNorm());
    deltas.push_back(std::max(0.0, 1.0 - fid));
  }
  return deltas;
}

}  // namespace detail

State fock_state(const FockSpace& space, int n) {
  StateMeta meta;
  meta.kind = StateKind::fock;
  meta.n = n;
  return State{basis_ket(space, n), meta};
}

State coherent(const FockSpace& space, cplx z, const StateOptions& opts) {
  Vector v(space.dim());
  v(0) = std::exp(-0.5 * std::norm(z));
  for (int n = 1; n < space.dim(); ++n) v(n) = v(n - 1) * z / std::sqrt(static_cast<double>(n));
  StateMeta meta = meta_for(StateKind::coherent, 1, z, {}, 0.0, 0, opts);
  meta.truncation_loss = renormalize(v);
  Ket ket(space, std::move(v));
  enforce_tail(ket, meta, opts, "coherent state");
  return State{std::move(ket), std::move(meta)};
}

State gcs(const FockSpace& space, int m, cplx z, const StateOptions& opts) {
  const Op d = generalized_displacement(space, m, z, opts.ops);
  StateMeta meta = meta_for(StateKind::gcs, m, z, {}, 0.0, 0, opts);
  require_converged(space, m, z, opts, meta);

  Vector v = d.mat().col(0);
  const cplx c0 = v(0);
  if (std::abs(c0) < kUnphasableOverlap) {
    meta.notes.push_back("unphasable: <0|z_m> vanishes, phase left as computed");
  } else {
    meta.phase_factor = std::conj(c0) / std::abs(c0);
    v *= meta.phase_factor;
    v(0) = std::abs(c0);
  }
  meta.truncation_loss = renormalize(v);
  Ket ket(space, std::move(v));
  enforce_tail(ket, meta, opts, "generalized coherent state");
  return State{std::move(ket), std::move(meta)};
}

BEigenstates b_eigenstates(const FockSpace& space, int m, cplx z, const StateOptions& opts) {
  const State zm = gcs(space, m, z, opts);
  const double c = zm.ket[0].real();
  if (1.0 + c < 1e-14 || 1.0 - c < 1e-14) {
    std::ostringstream msg;
    msg << "degenerate eigenpair: <0|z_m> = " << c << " zeroes a normalisation constant";
    throw InvalidArgument(msg.str());
  }
  BEigenstates out{zm, zm, std::sqrt(2.0 * (1.0 + c)), std::sqrt(2.0 * (1.0 - c)), c};
  const Ket vac = basis_ket(space, 0);
  auto build = [&](StateKind kind, double sign, double norm_const) {
    Vector v = (vac.amps() + sign * zm.ket.amps()) / norm_const;
    StateMeta meta = zm.meta;
    meta.kind = kind;
    meta.truncation_loss = renormalize(v);
    Ket ket(space, std::move(v));
    meta.tail_mass_above_k = tail_mass_above_interior(ket);
    return State{std::move(ket), std::move(meta)};
  };
  out.plus = build(StateKind::b_plus, 1.0, out.norm_plus);
  out.minus = build(StateKind::b_minus, -1.0, out.norm_minus);
  return out;
}

State superposition_state(const FockSpace& space, int m, cplx z, double lambda,
                          const StateOptions& opts) {
  const State zm = gcs(space, m, z, opts);
  const Op u = u_evolution(space, m, z, lambda, UMethod::exponential, opts.ops);
  Vector v = u.mat().col(0);
  StateMeta meta = zm.meta;
  meta.kind = StateKind::superposition;
  meta.params.lambda = lambda;
  meta.phase_factor = 1.0;
  meta.truncation_loss = renormalize(v);
  Ket ket(space, std::move(v));
  enforce_tail(ket, meta, opts, "superposition state");
  return State{std::move(ket), std::move(meta)};
}

State cat_state(const FockSpace& space, cplx z, double lambda, cplx u, const StateOptions& opts) {
  const Op v_op = v_operator(space, 1, z, u, lambda, opts.ops);
  Vector v = v_op.mat().col(0);
  StateMeta meta = meta_for(StateKind::cat, 1, z, u, lambda, 0, opts);
  meta.truncation_loss = renormalize(v);
  Ket ket(space, std::move(v));
  enforce_tail(ket, meta, opts, "cat state");
  return State{std::move(ket), std::move(meta)};
}

State gdf_basis_state(const FockSpace& space, int m, cplx z, int n, const StateOptions& opts) {
  if (n < 0 || n >= space.interior_dim()) {
    throw InvalidArgument("basis index n=" + std::to_string(n) + " must lie below K=" +
                          std::to_string(space.interior_dim()));
  }
  const Op d = generalized_displacement(space, m, z, opts.ops);
  StateMeta meta = meta_for(StateKind::gdf_basis, m, z, {}, 0.0, n, opts);
  require_converged(space, m, z, opts, meta);
  Vector v = d.mat().col(n);
  if (v(n).real() < 0.0) {
    meta.report_sign = -1.0;
    meta.notes.push_back("reported with sign -1 so that <n|z_m,n> is nonnegative");
  }
  meta.truncation_loss = renormalize(v);
  Ket ket(space, std::move(v));
  meta.tail_mass_above_k = tail_mass_above_interior(ket);
  return State{std::move(ket), std::move(meta)};
}

State dressed_basis_state(const FockSpace& space, int m, cplx z, double lambda, int n,
                          const StateOptions& opts) {
  const State basis = gdf_basis_state(space, m, z, n, opts);
  const double angle = lambda * cos_pi_ratio(n, m);
  Vector v = kI * std::sin(angle) * basis.ket.amps();
  v(n) += std::cos(angle);
  StateMeta meta = basis.meta;
  meta.kind = StateKind::dressed_basis;
  meta.params.lambda = lambda;
  meta.report_sign = 1.0;
  meta.notes.clear();
  if (basis.meta.override_used) meta.notes = basis.meta.notes;
  meta.truncation_loss = renormalize(v);
  Ket ket(space, std::move(v));
  meta.tail_mass_above_k = tail_mass_above_interior(ket);
  return State{std::move(ket), std::move(meta)};
}

State make_state(const FockSpace& space, const StateSpec& spec, const StateOptions& opts) {
  const auto& p = spec.params;
  switch (spec.kind) {
    case StateKind::fock:
      return fock_state(space, spec.n);
    case StateKind::coherent:
      return coherent(space, p.z, opts);
    case StateKind::gcs:
      return gcs(space, p.m, p.z, opts);
    case StateKind::b_plus:
      return b_eigenstates(space, p.m, p.z, opts).plus;
    case StateKind::b_minus:
      return b_eigenstates(space, p.m, p.z, opts).minus;
    case StateKind::superposition:
      return superposition_state(space, p.m, p.z, p.lambda, opts);
    case StateKind::cat:
      return cat_state(space, p.z, p.lambda, p.u, opts);
    case StateKind::gdf_basis:
      return gdf_basis_state(space, p.m, p.z, spec.n, opts);
    case StateKind::dressed_basis:
      return dressed_basis_state(space, p.m, p.z, p.lambda, spec.n, opts);
  }
  throw InvalidArgument("unknown state kind");
}

}  // namespace paritydisp
