#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "paritydisp/linalg.hpp"
#include "paritydisp/operators.hpp"

namespace paritydisp {

enum class StateKind {
  fock,
  coherent,
  gcs,
  b_plus,
  b_minus,
  superposition,
  cat,
  gdf_basis,
  dressed_basis,
};

std::string_view to_string(StateKind kind);
/// Throws InvalidArgument for an unknown name.
StateKind state_kind_from_string(std::string_view name);

/// Everything needed to reproduce a state, plus what happened to it on the way.
struct StateMeta {
  StateKind kind = StateKind::fock;
  OperatorParams params{};
  int n = 0;
  /// Global phase multiplied into the amplitudes (|z_m> convention).
  cplx phase_factor{1.0, 0.0};
  /// Sign applied only when the state is reported (basis states whose
  /// <n|D_m(z)|n> came out negative); the stored amplitudes stay raw.
  double report_sign = 1.0;
  /// 1 - ||psi||^2 before renormalisation.
  double truncation_loss = 0.0;
  double tail_mass_above_k = 0.0;
  bool override_used = false;
  std::vector<std::string> notes;

  bool phase_fix_applied() const { return phase_factor != cplx(1.0, 0.0) || report_sign < 0.0; }
};

struct State {
  Ket ket;
  StateMeta meta;

  /// Amplitudes as reported (report_sign applied).
  Ket reported() const { return meta.report_sign < 0.0 ? cplx(-1.0) * ket : ket; }
};

struct StateOptions {
  OperatorConfig ops{};
  /// Threshold on consecutive-dimension infidelity for m >= 3 states.
  double convergence_threshold = 1e-8;
  bool allow_unconverged = false;
  bool allow_tail_excess = false;

  /// Everything an explicit "--override" unlocks.
  static StateOptions overridden() {
    StateOptions o;
    o.ops.allow_unsafe_radius = true;
    o.allow_unconverged = true;
    o.allow_tail_excess = true;
    return o;
  }
};

/// Probability mass on levels >= K.
double tail_mass_above_interior(const Ket& ket);

State fock_state(const FockSpace& space, int n);

/// Glauber state e^{-|z|^2/2} sum z^n/sqrt(n!) |n>, renormalised to the truncation.
/// Throws TailMassExceeded when the mass above K exceeds space.tail_tol().
State coherent(const FockSpace& space, cplx z, const StateOptions& opts = {});

/// |z_m> = D_m(z)|0> with <0|z_m> made real and nonnegative.
/// m >= 3 requires convergence between N/2 and N unless allowed otherwise.
State gcs(const FockSpace& space, int m, cplx z, const StateOptions& opts = {});

struct BEigenstates {
  State plus;
  State minus;
  double norm_plus = 0.0;   // N_+^(m)
  double norm_minus = 0.0;  // N_-^(m)
  double vacuum_overlap = 0.0;  // <0|z_m>
};

/// |b_pm^(m)> = (|0> +- |z_m>) / sqrt(2 (1 +- <0|z_m>)).
BEigenstates b_eigenstates(const FockSpace& space, int m, cplx z, const StateOptions& opts = {});

/// U_m(lambda; z)|0>.
State superposition_state(const FockSpace& space, int m, cplx z, double lambda,
                          const StateOptions& opts = {});

/// V_1(lambda; z, u)|0>.
State cat_state(const FockSpace& space, cplx z, double lambda, cplx u,
                const StateOptions& opts = {});

/// |z_m, n> = D_m(z)|n>, n < K. Raw amplitudes; report_sign makes the
/// reported <n|z_m,n> nonnegative.
State gdf_basis_state(const FockSpace& space, int m, cplx z, int n, const StateOptions& opts = {});

/// |(lambda; z_m), n> = cos[lambda c_n]|n> + i sin[lambda c_n] |z_m, n>, c_n = cos(n pi/m).
State dressed_basis_state(const FockSpace& space, int m, cplx z, double lambda, int n,
                          const StateOptions& opts = {});

/// Declarative request for one state (used by the CLI and sweeps).
struct StateSpec {
  StateKind kind = StateKind::fock;
  OperatorParams params{};
  int n = 0;
};

State make_state(const FockSpace& space, const StateSpec& spec, const StateOptions& opts = {});

namespace detail {

/// Raw D_m(z)|0> at dimension `dim` (no guards beyond the operator config).
Vector vacuum_column(int dim, int m, cplx z, const OperatorConfig& cfg);

/// 1 - fidelity between D_m(z)|0> at consecutive dims (smaller zero-padded).
std::vector<double> consecutive_infidelities(int m, cplx z, const std::vector<int>& dims,
                                             const OperatorConfig& cfg);

}  // namespace detail

}  // namespace paritydisp
