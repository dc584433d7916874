#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "paritydisp/expm.hpp"
#include "paritydisp/linalg.hpp"

namespace paritydisp {

/// Order m, amplitudes z and u, evolution parameter lambda.
struct OperatorParams {
  int m = 1;
  cplx z{0.0, 0.0};
  cplx u{0.0, 0.0};
  double lambda = 0.0;
};

/// Deliberate constructor bugs used to prove the verification suite can fail.
enum class Fault {
  none,
  /// Flips the sign of the creation term of the D_m generator, which makes the
  /// generator hermitian instead of anti-hermitian.
  flip_creation_sign,
};

/// Content-addressed store of constructed operators. Lookups and inserts are
/// serialised by a mutex; values are immutable once stored.
class OperatorCache {
 public:
  using Factory = std::function<Op()>;

  std::shared_ptr<const Op> get_or_build(const std::string& key, const Factory& build);

  void set_enabled(bool enabled);
  bool enabled() const;
  void clear();
  std::size_t size() const;
  std::size_t hits() const;
  std::size_t misses() const;

  static OperatorCache& global();

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const Op>> entries_;
  bool enabled_ = true;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

struct OperatorConfig {
  static constexpr double kDefaultSafeRadius = 0.25;

  /// Largest |z| accepted for m >= 3 without `allow_unsafe_radius`.
  double safe_radius = kDefaultSafeRadius;
  bool allow_unsafe_radius = false;
  Fault fault = Fault::none;
  /// nullptr disables caching.
  OperatorCache* cache = &OperatorCache::global();
  ExpmOptions expm{};
  /// Max edge residual tolerated between the two U_m construction routes.
  double method_tol = 1e-8;
};

/// Anti-hermitian generator ((-1)^m/m)(z* a^m - z a_dag^m).
Op displacement_generator(const FockSpace& space, int m, cplx z, const OperatorConfig& cfg = {});

/// D(z) = exp(z a_dag - z* a).
Op displacement(const FockSpace& space, cplx z, const OperatorConfig& cfg = {});

/// D_m(z); D_1 = D, D_2 is the squeeze operator. Throws RadiusExceeded for
/// m >= 3 and |z| > safe_radius unless the config allows it.
Op generalized_displacement(const FockSpace& space, int m, cplx z, const OperatorConfig& cfg = {});

/// diag(cos(pi n / m)) and diag(sin(pi n / m)).
Op parity_cos(const FockSpace& space, int m);
Op parity_sin(const FockSpace& space, int m);

/// exp(i (pi/m) a_dag a), built with mat_exp.
Op phase_rotation(const FockSpace& space, int m, const OperatorConfig& cfg = {});

/// B_m(z) = D_m(z) cos(pi/m a_dag a).
Op parity_displacement(const FockSpace& space, int m, cplx z, const OperatorConfig& cfg = {});

enum class UMethod {
  /// exp(i lambda B_m(z)) through the hermitian eigendecomposition.
  exponential,
  /// cos(lambda C) + i D_m(z) sin(lambda C) with C = cos(pi/m a_dag a).
  closed_form,
  /// Builds both and throws Inconsistency when they disagree beyond method_tol.
  checked,
};

/// U_m(lambda; z) = exp(i lambda B_m(z)).
Op u_evolution(const FockSpace& space, int m, cplx z, double lambda,
               UMethod method = UMethod::exponential, const OperatorConfig& cfg = {});

/// V_m(lambda; z, u) = D_m(u/2) U_m(lambda; z) D_m(u/2), always as the triple product.
Op v_operator(const FockSpace& space, int m, cplx z, cplx u, double lambda,
              const OperatorConfig& cfg = {});

}  // namespace paritydisp
