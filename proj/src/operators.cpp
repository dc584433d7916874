#include "paritydisp/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "paritydisp/complex_text.hpp"
#include "paritydisp/error.hpp"

namespace paritydisp {

std::shared_ptr<const Op> OperatorCache::get_or_build(const std::string& key,
                                                       const Factory& build) {
  {
    std::lock_guard lock(mutex_);
    if (enabled_) {
      auto it = entries_.find(key);
      if (it != entries_.end()) {
        ++hits_;
        return it->second;
      }
    }
    ++misses_;
  }
  // Built outside the lock; a racing duplicate build yields an identical value.
  auto value = std::make_shared<const Op>(build());
  std::lock_guard lock(mutex_);
  if (!enabled_) return value;
  auto [it, inserted] = entries_.emplace(key, value);
  return it->second;
}

void OperatorCache::set_enabled(bool enabled) {
  std::lock_guard lock(mutex_);
  enabled_ = enabled;
}

bool OperatorCache::enabled() const {
  std::lock_guard lock(mutex_);
  return enabled_;
}

void OperatorCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
  hits_ = 0;
  misses_ = 0;
}

std::size_t OperatorCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t OperatorCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t OperatorCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

OperatorCache& OperatorCache::global() {
  static OperatorCache cache;
  return cache;
}

namespace {

std::string bits(double v) {
  std::ostringstream out;
  out << std::hex << std::bit_cast<std::uint64_t>(v);
  return out.str();
}

std::string space_key(const FockSpace& s) {
  return std::to_string(s.dim()) + "/" + std::to_string(s.interior_dim()) + "/" +
         bits(s.tail_tol());
}

std::string cache_key(const char* kind, const FockSpace& s, int m, cplx z, double lambda,
                      const OperatorConfig& cfg) {
  return std::string(kind) + "|" + space_key(s) + "|" + std::to_string(m) + "|" +
         bits(z.real()) + "," + bits(z.imag()) + "|" + bits(lambda) + "|" +
         std::to_string(static_cast<int>(cfg.fault));
}

Op cached(const OperatorConfig& cfg, const std::string& key, const OperatorCache::Factory& build) {
  if (cfg.cache == nullptr) return build();
  return *cfg.cache->get_or_build(key, build);
}

void require_order(int m) {
  if (m < 1) throw InvalidArgument("order m must be >= 1 (got " + std::to_string(m) + ")");
}

void require_radius(int m, cplx z, const OperatorConfig& cfg) {
  if (m >= 3 && std::abs(z) > cfg.safe_radius && !cfg.allow_unsafe_radius) {
    std::ostringstream msg;
    msg << "radius guard: |z|=" << std::abs(z) << " exceeds safe radius " << cfg.safe_radius
        << " for m=" << m;
    throw RadiusExceeded(msg.str());
  }
}

std::string label_for(const char* name, int m, cplx z) {
  return std::string(name) + ", m=" + std::to_string(m) + ", z=" + format_complex(z);
}

// a^m without forming repeated products: <n-m| a^m |n> = sqrt(n!/(n-m)!).
Matrix lowering_power(int dim, int m) {
  Matrix am = Matrix::Zero(dim, dim);
  for (int n = m; n < dim; ++n) {
    double amp = 1.0;
    for (int j = n - m + 1; j <= n; ++j) amp *= std::sqrt(static_cast<double>(j));
    am(n - m, n) = amp;
  }
  return am;
}

}  // namespace

Op displacement_generator(const FockSpace& space, int m, cplx z, const OperatorConfig& cfg) {
  require_order(m);
  const Matrix am = lowering_power(space.dim(), m);
  const double prefactor = (m % 2 == 0 ? 1.0 : -1.0) / m;
  const double creation_sign = cfg.fault == Fault::flip_creation_sign ? -1.0 : 1.0;
  Matrix g = prefactor * (std::conj(z) * am - creation_sign * z * am.adjoint());
  const Claim claims = cfg.fault == Fault::none ? Claim::anti_hermitian : Claim::none;
  return Op(space, std::move(g), label_for("G_m(z)", m, z), claims);
}

Op generalized_displacement(const FockSpace& space, int m, cplx z, const OperatorConfig& cfg) {
  require_order(m);
  require_radius(m, z, cfg);
  return cached(cfg, cache_key("D", space, m, z, 0.0, cfg), [&] {
    const Op gen = displacement_generator(space, m, z, cfg);
    const Op d = mat_exp(gen, cfg.expm);
    return d.relabeled(label_for("D_m(z)", m, z), d.claims());
  });
}

Op displacement(const FockSpace& space, cplx z, const OperatorConfig& cfg) {
  return generalized_displacement(space, 1, z, cfg);
}

Op parity_cos(const FockSpace& space, int m) {
  require_order(m);
  const Claim claims = m == 1 ? (Claim::hermitian | Claim::unitary) : Claim::hermitian;
  return diag_fn_op(space, [m](int n) { return cplx(cos_pi_ratio(n, m), 0.0); },
                    "cos(pi/" + std::to_string(m) + " a^dag a)")
      .relabeled("cos(pi/" + std::to_string(m) + " a^dag a)", claims);
}

Op parity_sin(const FockSpace& space, int m) {
  require_order(m);
  return diag_fn_op(space, [m](int n) { return cplx(sin_pi_ratio(n, m), 0.0); })
      .relabeled("sin(pi/" + std::to_string(m) + " a^dag a)", Claim::hermitian);
}

Op phase_rotation(const FockSpace& space, int m, const OperatorConfig& cfg) {
  require_order(m);
  const Op gen = diag_fn_op(space, [m](int n) {
    return kI * (std::numbers::pi / m) * static_cast<double>(n);
  }).relabeled("i pi/" + std::to_string(m) + " a^dag a", Claim::anti_hermitian);
  return mat_exp(gen, cfg.expm);
}

Op parity_displacement(const FockSpace& space, int m, cplx z, const OperatorConfig& cfg) {
  const Op d = generalized_displacement(space, m, z, cfg);
  const Op c = parity_cos(space, m);
  const Claim claims = m == 1 ? (Claim::hermitian | Claim::unitary) : Claim::hermitian;
  return Op(space, d.mat() * c.mat(), label_for("B_m(z)", m, z), claims);
}

namespace {

Op u_closed_form(const FockSpace& space, int m, cplx z, double lambda, const OperatorConfig& cfg) {
  const Op d = generalized_displacement(space, m, z, cfg);
  Vector cos_part(space.dim());
  Vector sin_part(space.dim());
  for (int n = 0; n < space.dim(); ++n) {
    const double c = cos_pi_ratio(n, m);
    cos_part(n) = std::cos(lambda * c);
    sin_part(n) = std::sin(lambda * c);
  }
  Matrix u = d.mat() * (kI * sin_part).asDiagonal();
  u.diagonal() += cos_part;
  std::ostringstream label;
  label << "U_m(lambda;z) closed form, m=" << m << ", z=" << format_complex(z)
        << ", lambda=" << lambda;
  return Op(space, std::move(u), label.str(), Claim::unitary);
}

Op u_exponential(const FockSpace& space, int m, cplx z, double lambda, const OperatorConfig& cfg) {
  return cached(cfg, cache_key("Uexp", space, m, z, lambda, cfg), [&] {
    const Op b = parity_displacement(space, m, z, cfg);
    std::ostringstream label;
    label << "U_m(lambda;z), m=" << m << ", z=" << format_complex(z) << ", lambda=" << lambda;
    return HermitianEvolution(b)(lambda).relabeled(label.str(), Claim::unitary);
  });
}

}  // namespace

Op u_evolution(const FockSpace& space, int m, cplx z, double lambda, UMethod method,
               const OperatorConfig& cfg) {
  switch (method) {
    case UMethod::exponential:
      return u_exponential(space, m, z, lambda, cfg);
    case UMethod::closed_form:
      return u_closed_form(space, m, z, lambda, cfg);
    case UMethod::checked: {
      Op exp_route = u_exponential(space, m, z, lambda, cfg);
      const double gap = edge_residual(exp_route - u_closed_form(space, m, z, lambda, cfg));
      if (gap > cfg.method_tol) {
        std::ostringstream msg;
        msg << "U_m exponential and closed-form routes disagree: edge residual " << gap
            << " > " << cfg.method_tol << " (m=" << m << ", z=" << format_complex(z)
            << ", lambda=" << lambda << ")";
        throw Inconsistency(msg.str());
      }
      return exp_route;
    }
  }
  throw InvalidArgument("unknown UMethod");
}

Op v_operator(const FockSpace& space, int m, cplx z, cplx u, double lambda,
              const OperatorConfig& cfg) {
  const Op half = generalized_displacement(space, m, u / 2.0, cfg);
  const Op evo = u_evolution(space, m, z, lambda, UMethod::exponential, cfg);
  std::ostringstream label;
  label << "V_m(lambda;z,u), m=" << m << ", z=" << format_complex(z)
        << ", u=" << format_complex(u) << ", lambda=" << lambda;
  return Op(space, half.mat() * evo.mat() * half.mat(), label.str(), Claim::unitary);
}

}  // namespace paritydisp
