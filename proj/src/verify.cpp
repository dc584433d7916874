#include "paritydisp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "paritydisp/analysis.hpp"
#include "paritydisp/complex_text.hpp"
#include "paritydisp/error.hpp"
#include "paritydisp/states.hpp"

namespace paritydisp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::skipped:
      return "skipped";
  }
  return "unknown";
}

std::string ParamPoint::describe() const {
  std::ostringstream out;
  const char* sep = "";
  auto put = [&](const char* key, const std::string& value) {
    out << sep << key << "=" << value;
    sep = " ";
  };
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  if (m) put("m", std::to_string(*m));
  if (z) put("z", format_complex(*z));
  if (u) put("u", format_complex(*u));
  if (lambda) put("lambda", num(*lambda));
  if (lambda2) put("lambda2", num(*lambda2));
  if (n) put("n", std::to_string(*n));
  return out.str();
}

namespace {

enum Use : unsigned { kM = 1, kZ = 2, kU = 4, kLambda = 8, kLambda2 = 16, kN = 32 };

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Context {
  FockSpace space;
  OperatorConfig ops;
  StateOptions states;
  const ParameterGrid& grid;

  Op d(int m, cplx z) const { return generalized_displacement(space, m, z, ops); }
  Op b(int m, cplx z) const { return parity_displacement(space, m, z, ops); }
  Op c(int m) const { return parity_cos(space, m); }
  Op s(int m) const { return parity_sin(space, m); }
  Op u_exp(int m, cplx z, double lambda) const {
    return u_evolution(space, m, z, lambda, UMethod::exponential, ops);
  }
  Op u_closed(int m, cplx z, double lambda) const {
    return u_evolution(space, m, z, lambda, UMethod::closed_form, ops);
  }
  Ket gcs_ket(int m, cplx z) const { return gcs(space, m, z, states).ket; }
  Ket coherent_ket(cplx z) const { return coherent(space, z, states).ket; }
  Ket vac() const { return basis_ket(space, 0); }
  Op id() const { return identity(space); }
};

double res(const Op& a, const Op& b) { return edge_residual(a - b); }
double res(const Ket& a, const Ket& b) { return edge_residual(a - b); }

class Recorder {
 public:
  void set(const std::string& variant, double residual, std::string note = {}) {
    values_[variant] = {residual, std::move(note)};
  }
  const std::map<std::string, std::pair<double, std::string>>& values() const { return values_; }

 private:
  std::map<std::string, std::pair<double, std::string>> values_;
};

struct Variant {
  std::string name;
  std::optional<double> tolerance;
  bool discrepancy = false;
  std::string note;
  std::function<bool(const ParamPoint&)> applies;
};

using Evaluator = std::function<void(const Context&, const ParamPoint&, Recorder&)>;

struct Family {
  std::string id;
  std::string summary;
  std::vector<std::string> covers;
  unsigned uses = 0;
  std::optional<int> fixed_m;
  std::function<bool(int)> m_allowed;
  std::vector<Variant> variants;
  Evaluator eval;
  std::function<void(ParamPoint&)> complete;
};

bool only_m1(const ParamPoint& p) { return p.m && *p.m == 1; }

double power_series_exp(const Op& b, double lambda, Matrix& out) {
  const auto n = b.dim();
  out = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  const Matrix step = (kI * lambda) * b.mat();
  int k = 1;
  for (; k < 400; ++k) {
    term = term * step / static_cast<double>(k);
    out += term;
    if (k > 4 && max_abs(term) < 1e-20) break;
  }
  return k;
}

std::vector<Family> build_registry() {
  std::vector<Family> f;

  f.push_back(Family{
      "eq1-ladder",
      "Ladder action, number operator and canonical commutator",
      {"eq1"},
      0,
      {},
      {},
      {{"lowering-action", 1e-12},
       {"raising-action", 1e-12, false,
        "printed a^dag|n+1> = sqrt(n+1)|n+1> is a typo; checked a^dag|n> = sqrt(n+1)|n+1>"},
       {"number-diagonal", 1e-12},
       {"canonical-commutator", 1e-12}},
      [](const Context& ctx, const ParamPoint&, Recorder& r) {
        const LadderOps lad = ladder_ops(ctx.space);
        const int dim = ctx.space.dim();
        double lower = 0.0;
        double raise = 0.0;
        for (int n = 0; n < dim; ++n) {
          const Ket k = basis_ket(ctx.space, n);
          Vector want = Vector::Zero(dim);
          if (n > 0) want(n - 1) = std::sqrt(static_cast<double>(n));
          lower = std::max(lower, (apply(lad.a, k).amps() - want).norm());
          if (n + 1 < dim) {
            want.setZero();
            want(n + 1) = std::sqrt(static_cast<double>(n + 1));
            raise = std::max(raise, (apply(lad.a_dag, k).amps() - want).norm());
          }
        }
        r.set("lowering-action", lower);
        r.set("raising-action", raise);
        const Op diag_n = diag_fn_op(ctx.space, [](int n) { return cplx(n, 0.0); });
        r.set("number-diagonal", max_abs(lad.number.mat() - diag_n.mat()));
        r.set("canonical-commutator", res(commutator(lad.a, lad.a_dag), ctx.id()));
      },
      {}});

  f.push_back(Family{
      "eq2-eigenstate",
      "Coherent state is an annihilation eigenstate with <0|z> = exp(-|z|^2/2)",
      {"eq2"},
      kZ,
      1,
      {},
      {{"annihilation-eigenvalue", 1e-10, false,
        "amplitudes use z^n/sqrt(n!); the printed z^n/n contradicts a|z> = z|z>"},
       {"vacuum-overlap", 1e-12}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const cplx z = *p.z;
        const Ket zk = ctx.coherent_ket(z);
        const LadderOps lad = ladder_ops(ctx.space);
        r.set("annihilation-eigenvalue", res(apply(lad.a, zk), z * zk));
        r.set("vacuum-overlap", std::abs(inner(ctx.vac(), zk) - std::exp(-0.5 * std::norm(z))));
      },
      {}});

  f.push_back(Family{
      "eq3-displacement-generation",
      "D(z)|0> reproduces the analytic coherent state",
      {"eq3"},
      kZ,
      1,
      {},
      {{"vacuum-image", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const Ket zk = ctx.coherent_ket(*p.z);
        r.set("vacuum-image", res(apply(ctx.d(1, *p.z), ctx.vac()), zk));
      },
      {}});

  f.push_back(Family{
      "eq4-composition",
      "D(z)D(z') = exp(i Im(z z'*)) D(z+z') and D(z)^dag = D(-z), with z' = u",
      {"eq4"},
      kZ | kU,
      1,
      {},
      {{"product-law", 1e-9}, {"adjoint-law", 1e-12}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const cplx z = *p.z;
        const cplx w = *p.u;
        const cplx phase = std::exp(kI * (z * std::conj(w)).imag());
        r.set("product-law", res(ctx.d(1, z) * ctx.d(1, w), phase * ctx.d(1, z + w)));
        r.set("adjoint-law", res(adjoint(ctx.d(1, z)), ctx.d(1, -z)));
      },
      {}});

  f.push_back(Family{
      "eq6-return-to-vacuum",
      "B(z)|z> = |0> and B(z)|0> = |z| as fidelity defects",
      {"eq6"},
      kZ,
      1,
      {},
      {{"return-to-vacuum", 1e-9}, {"vacuum-to-coherent", 1e-9}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const Ket zk = ctx.coherent_ket(*p.z);
        const Op b = ctx.b(1, *p.z);
        r.set("return-to-vacuum", 1.0 - fidelity(apply(b, zk), ctx.vac()));
        r.set("vacuum-to-coherent", 1.0 - fidelity(apply(b, ctx.vac()), zk));
      },
      {}});

  f.push_back(Family{
      "eq8-vacuum-decomposition",
      "|0> = (N_+|b_+> + N_-|b_->)/2",
      {"eq8"},
      kM | kZ,
      {},
      {},
      {{"reconstruction", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const BEigenstates e = b_eigenstates(ctx.space, *p.m, *p.z, ctx.states);
        const Ket rebuilt = cplx(0.5) * (cplx(e.norm_plus) * e.plus.ket +
                                         cplx(e.norm_minus) * e.minus.ket);
        r.set("reconstruction", res(rebuilt, ctx.vac()));
      },
      {}});

  f.push_back(Family{
      "eq11a-rotation",
      "exp(-i pi/m N) a exp(i pi/m N) = exp(i pi/m) a, and the Euler form of cos(pi/m N)",
      {"eq11a", "eq12a"},
      kM,
      {},
      {},
      {{"annihilation-rotation", 1e-10}, {"euler-form", 1e-12}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const Op e = phase_rotation(ctx.space, m, ctx.ops);
        const LadderOps lad = ladder_ops(ctx.space);
        const cplx root = std::exp(kI * (std::numbers::pi / m));
        r.set("annihilation-rotation", res(adjoint(e) * lad.a * e, root * lad.a));
        r.set("euler-form", res(cplx(0.5) * (e + adjoint(e)), ctx.c(m)));
      },
      {}});

  f.push_back(Family{
      "eq13a-anticommutation",
      "cos(pi/m N) anticommutes with a^m and commutes with a^2m",
      {"eq13a"},
      kM,
      {},
      {},
      {{"anticommutator-a^m", 1e-12},
       {"commutator-a^2m", 1e-12},
       {"sin-anticommutator-a^m", 1e-12},
       {"printed-anticommutator-a^2m", 1e-12, true,
        "printed {cos(pi/m N), a^2m} = 0; the operators commute, so the anticommutator is "
        "2 a^2m cos(pi/m N)"}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const LadderOps lad = ladder_ops(ctx.space);
        const Op am = power(lad.a, m);
        const Op a2m = power(lad.a, 2 * m);
        const Op zero = cplx(0.0) * ctx.id();
        r.set("anticommutator-a^m", res(anticommutator(ctx.c(m), am), zero));
        r.set("commutator-a^2m", res(commutator(ctx.c(m), a2m), zero));
        r.set("sin-anticommutator-a^m", res(anticommutator(ctx.s(m), am), zero));
        r.set("printed-anticommutator-a^2m", res(anticommutator(ctx.c(m), a2m), zero));
      },
      {}});

  f.push_back(Family{
      "eq15a-hermiticity",
      "B_m(z) is hermitian, equals cos(pi/m N) D_m(-z), and is unitary for m = 1",
      {"eq5", "eq14a", "eq15a"},
      kM | kZ,
      {},
      {},
      {{"hermiticity", 1e-9}, {"reflected-form", 1e-9}, {"unitarity", 1e-9, false, {}, only_m1}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const Op b = ctx.b(m, *p.z);
        r.set("hermiticity", res(b, adjoint(b)));
        r.set("reflected-form", res(b, ctx.c(m) * ctx.d(m, -*p.z)));
        if (m == 1) r.set("unitarity", res(adjoint(b) * b, ctx.id()));
      },
      {}});

  f.push_back(Family{
      "eq17a-generation",
      "B_m(z)|0> = D_m(z)|0> = |z_m>, and |z_1> is the coherent state",
      {"eq16a", "eq17a"},
      kM | kZ,
      {},
      {},
      {{"vacuum-image", 1e-12}, {"m1-coherent", 1e-10, false, {}, only_m1}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const Ket zm = ctx.gcs_ket(m, *p.z);
        r.set("vacuum-image", res(apply(ctx.b(m, *p.z), ctx.vac()), zm));
        if (m == 1) r.set("m1-coherent", res(zm, ctx.coherent_ket(*p.z)));
      },
      {}});

  f.push_back(Family{
      "eq18a-annihilation-return",
      "B_m(z)|z_m> = |0>",
      {"eq18a"},
      kM | kZ,
      {},
      {},
      {{"vacuum-return", 1e-9}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const Ket zm = ctx.gcs_ket(*p.m, *p.z);
        r.set("vacuum-return", res(apply(ctx.b(*p.m, *p.z), zm), ctx.vac()));
      },
      {}});

  f.push_back(Family{
      "eq19a-eigenpair",
      "B_m(z)|b_pm> = +-|b_pm> and <b_+|b_-> = 0",
      {"eq7", "eq19a"},
      kM | kZ,
      {},
      {},
      {{"eigenvalue-plus", 1e-8}, {"eigenvalue-minus", 1e-8}, {"orthogonality", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const BEigenstates e = b_eigenstates(ctx.space, *p.m, *p.z, ctx.states);
        const Op b = ctx.b(*p.m, *p.z);
        r.set("eigenvalue-plus", res(apply(b, e.plus.ket), e.plus.ket));
        r.set("eigenvalue-minus", res(apply(b, e.minus.ket), cplx(-1.0) * e.minus.ket));
        r.set("orthogonality", std::abs(inner(e.plus.ket, e.minus.ket)));
      },
      {}});

  f.push_back(Family{
      "eq20a-normalization",
      "N_pm = sqrt(2(1 +- <0|z_m>)) against the measured norms of |0> +- |z_m>",
      {"eq20a"},
      kM | kZ,
      {},
      {},
      {{"constants", 1e-10}, {"m1-closed-form", 1e-10, false, {}, only_m1}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const Ket zm = ctx.gcs_ket(*p.m, *p.z);
        const double c = inner(ctx.vac(), zm).real();
        const double np = std::sqrt(2.0 * (1.0 + c));
        const double nm = std::sqrt(2.0 * (1.0 - c));
        r.set("constants", std::max(std::abs(np - norm(ctx.vac() + zm)),
                                    std::abs(nm - norm(ctx.vac() - zm))));
        if (*p.m == 1) {
          const double g = std::exp(-0.5 * std::norm(*p.z));
          r.set("m1-closed-form", std::max(std::abs(np - std::sqrt(2.0 * (1.0 + g))),
                                           std::abs(nm - std::sqrt(2.0 * (1.0 - g)))));
        }
      },
      {}});

  f.push_back(Family{
      "eq22a-superposition-form",
      "U_m(lambda;z)|0> = cos(lambda)|0> + i sin(lambda)|z_m>, also via the b_pm expansion",
      {"eq9", "eq10", "eq21a", "eq22a"},
      kM | kZ | kLambda,
      {},
      {},
      {{"two-term-form", 1e-9, false,
        "printed with the label U_2 but derived for every m; checked for all m"},
       {"eigen-expansion", 1e-9},
       {"unit-norm", 1e-12}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const double l = *p.lambda;
        const BEigenstates e = b_eigenstates(ctx.space, m, *p.z, ctx.states);
        const Ket zm = ctx.gcs_ket(m, *p.z);
        const Ket out = apply(ctx.u_exp(m, *p.z, l), ctx.vac());
        r.set("two-term-form", res(out, cplx(std::cos(l)) * ctx.vac() + kI * std::sin(l) * zm));
        const Ket expansion = (0.5 * e.norm_plus * std::exp(kI * l)) * e.plus.ket +
                              (0.5 * e.norm_minus * std::exp(-kI * l)) * e.minus.ket;
        r.set("eigen-expansion", res(out, expansion));
        r.set("unit-norm", std::abs(norm(out) - 1.0));
      },
      {}});

  f.push_back(Family{
      "eq24a-square",
      "B_m(z)^2 = cos^2(pi/m N) and B_m(z)^4 = cos^4(pi/m N)",
      {"eq24a", "eq25a"},
      kM | kZ,
      {},
      {},
      {{"square", 1e-8}, {"fourth-power", 1e-8}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const Op b = ctx.b(*p.m, *p.z);
        const Op c = ctx.c(*p.m);
        const Op b2 = b * b;
        const Op c2 = c * c;
        r.set("square", res(b2, c2));
        r.set("fourth-power", res(b2 * b2, c2 * c2));
      },
      {}});

  f.push_back(Family{
      "eq26a-closed-form-agreement",
      "exp(i lambda B_m) against cos(lambda C) + i D_m sin(lambda C) and the power series",
      {"eq21a", "eq23a", "eq26a"},
      kM | kZ | kLambda,
      {},
      {},
      {{"exponential-vs-closed", 1e-8}, {"power-series-vs-closed", 1e-8}, {"unitarity", 1e-8}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const double l = *p.lambda;
        const Op closed = ctx.u_closed(m, *p.z, l);
        r.set("exponential-vs-closed", res(ctx.u_exp(m, *p.z, l), closed));
        Matrix series;
        const int terms = static_cast<int>(power_series_exp(ctx.b(m, *p.z), l, series));
        r.set("power-series-vs-closed", res(Op(ctx.space, series), closed),
              std::to_string(terms) + " series terms");
        r.set("unitarity", res(adjoint(closed) * closed, ctx.id()));
      },
      {}});

  f.push_back(Family{
      "eq27a-u1-form",
      "U_1(lambda;z) = cos(lambda) I + i sin(lambda) D(z) cos(pi N)",
      {"eq27a"},
      kZ | kLambda,
      1,
      {},
      {{"special-form", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const double l = *p.lambda;
        const Op form = cplx(std::cos(l)) * ctx.id() + (kI * std::sin(l)) * (ctx.d(1, *p.z) * ctx.c(1));
        r.set("special-form", res(ctx.u_exp(1, *p.z, l), form));
      },
      {}});

  f.push_back(Family{
      "eq28a-u2-form",
      "U_2(lambda;z) = sin^2(pi/2 N) + cos(lambda) cos^2(pi/2 N) + i sin(lambda) D_2(z) cos(pi/2 N)",
      {"eq28a"},
      kZ | kLambda,
      2,
      {},
      {{"special-form", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const double l = *p.lambda;
        const Op c = ctx.c(2);
        const Op s = ctx.s(2);
        const Op form = s * s + cplx(std::cos(l)) * (c * c) + (kI * std::sin(l)) * (ctx.d(2, *p.z) * c);
        r.set("special-form", res(ctx.u_exp(2, *p.z, l), form));
      },
      {}});

  f.push_back(Family{
      "eq29a-composition",
      "U_m(lambda) U_m(lambda') = U_m(lambda + lambda') on the exponential route",
      {"eq29a"},
      kM | kZ | kLambda | kLambda2,
      {},
      {},
      {{"semigroup", 1e-8}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        r.set("semigroup", res(ctx.u_exp(m, *p.z, *p.lambda) * ctx.u_exp(m, *p.z, *p.lambda2),
                               ctx.u_exp(m, *p.z, *p.lambda + *p.lambda2)));
      },
      {}});

  f.push_back(Family{
      "eq31a-v1-form",
      "V_1 = D(u/2) U_1 D(u/2) = cos(lambda) D(u) + i sin(lambda) exp(i Im(u z*)) B(z)",
      {"eq30a", "eq31a"},
      kZ | kU | kLambda,
      1,
      {},
      {{"expanded-form", 1e-9}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const cplx z = *p.z;
        const cplx u = *p.u;
        const double l = *p.lambda;
        const cplx phase = std::exp(kI * (u * std::conj(z)).imag());
        const Op form = cplx(std::cos(l)) * ctx.d(1, u) + (kI * std::sin(l) * phase) * ctx.b(1, z);
        r.set("expanded-form", res(v_operator(ctx.space, 1, z, u, l, ctx.ops), form));
      },
      {}});

  f.push_back(Family{
      "eq32a-v1-action",
      "V_1|0> = cos(lambda)|u> + i sin(lambda) exp(i Im(u z*))|z>",
      {"eq32a"},
      kZ | kU | kLambda,
      1,
      {},
      {{"vacuum-image", 1e-9}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const cplx z = *p.z;
        const cplx u = *p.u;
        const double l = *p.lambda;
        const cplx phase = std::exp(kI * (u * std::conj(z)).imag());
        const Ket want = cplx(std::cos(l)) * ctx.coherent_ket(u) +
                         (kI * std::sin(l) * phase) * ctx.coherent_ket(z);
        r.set("vacuum-image", res(apply(v_operator(ctx.space, 1, z, u, l, ctx.ops), ctx.vac()), want));
      },
      {}});

  f.push_back(Family{
      "eq33a-cat-amplitude",
      "V_1(pi/4; z, -z)|0> against the two-term cat superposition",
      {"eq33a"},
      kZ,
      1,
      {},
      {{"adjudicated-1/sqrt2", 1e-9},
       {"unit-norm", 1e-10},
       {"printed-1/2", 1e-9, true,
        "printed prefactor 1/2; <-z|z> is real, so unit norm forces 1/sqrt(2)"}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const cplx z = *p.z;
        const Ket out = apply(v_operator(ctx.space, 1, z, -z, *p.lambda, ctx.ops), ctx.vac());
        const Ket pair = ctx.coherent_ket(-z) + kI * ctx.coherent_ket(z);
        r.set("adjudicated-1/sqrt2", res(out, cplx(1.0 / std::numbers::sqrt2) * pair));
        r.set("unit-norm", std::abs(norm(out) - 1.0));
        r.set("printed-1/2", res(out, cplx(0.5) * pair));
      },
      [](ParamPoint& p) {
        p.u = -*p.z;
        p.lambda = std::numbers::pi / 4;
      }});

  f.push_back(Family{
      "eq35a-expansion",
      "V_m = D_m^2(u/2)[sin^2 + cos(lambda) cos^2] + i sin(lambda) D~_m(z) cos(pi/m N), m <= 2",
      {"eq34a", "eq35a"},
      kM | kZ | kU | kLambda,
      {},
      [](int m) { return m <= 2; },
      {{"expanded-form", 1e-8}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const cplx z = *p.z;
        const cplx u = *p.u;
        const double l = *p.lambda;
        const Op half = ctx.d(m, u / 2.0);
        const Op c = ctx.c(m);
        const Op s = ctx.s(m);
        const Op tilde = half * ctx.d(m, z) * ctx.d(m, -u / 2.0);
        const Op form = (half * half) * (s * s + cplx(std::cos(l)) * (c * c)) +
                        (kI * std::sin(l)) * (tilde * c);
        r.set("expanded-form", res(v_operator(ctx.space, m, z, u, l, ctx.ops), form));
      },
      {}});

  f.push_back(Family{
      "eq36a-candidates",
      "V_m|0> against both readings of its second term: |(-u/2)_m> (derived) and |(u/2)_m> (printed)",
      {"eq36a"},
      kM | kZ | kU | kLambda,
      {},
      {},
      {{"reading-derived", 1e-9},
       {"reading-printed", 1e-9, true, "printed second term D_m(u/2) D_m(z)|(u/2)_m>"}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const cplx z = *p.z;
        const cplx u = *p.u;
        const double l = *p.lambda;
        const Op half = ctx.d(m, u / 2.0);
        const Ket out = apply(v_operator(ctx.space, m, z, u, l, ctx.ops), ctx.vac());
        const Ket first = cplx(std::cos(l)) * apply(half, ctx.gcs_ket(m, u / 2.0));
        const Op hz = half * ctx.d(m, z);
        const Ket derived = first + (kI * std::sin(l)) * apply(hz, ctx.gcs_ket(m, -u / 2.0));
        const Ket printed = first + (kI * std::sin(l)) * apply(hz, ctx.gcs_ket(m, u / 2.0));
        const double rd = res(out, derived);
        const double rp = res(out, printed);
        std::ostringstream note;
        note.precision(3);
        note << "derived residual " << rd << ", printed residual " << rp;
        r.set("reading-derived", rd, note.str());
        r.set("reading-printed", rp, note.str());
      },
      {}});

  f.push_back(Family{
      "eq38a-dressed-basis",
      "U_m(lambda;z)|n> = cos[lambda c_n]|n> + i sin[lambda c_n]|z_m,n>",
      {"eq37a", "eq38a"},
      kM | kZ | kLambda | kN,
      {},
      {},
      {{"coefficient-structure", 1e-9}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const int n = *p.n;
        if (n >= ctx.space.interior_dim()) {
          throw PreconditionFailure("basis index n=" + std::to_string(n) + " not below K");
        }
        const State dressed = dressed_basis_state(ctx.space, m, *p.z, *p.lambda, n, ctx.states);
        const Ket direct = apply(ctx.u_exp(m, *p.z, *p.lambda), basis_ket(ctx.space, n));
        r.set("coefficient-structure", res(direct, dressed.ket));
      },
      {}});

  f.push_back(Family{
      "eq39a-statistics-identity",
      "sum_{j!=n} |c^j|^2 sin^2(theta) + |<n|U_m|n>|^2 = 1",
      {"eq39a"},
      kM | kZ | kLambda | kN,
      {},
      {},
      {{"effective-angle", 1e-10, false, "theta = lambda cos(n pi/m)"},
       {"printed-sin2-lambda", 1e-10, true,
        "printed theta = lambda; holds only when cos(n pi/m) = +-1"}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const int n = *p.n;
        if (n >= ctx.space.interior_dim()) {
          throw PreconditionFailure("basis index n=" + std::to_string(n) + " not below K");
        }
        const State basis = gdf_basis_state(ctx.space, m, *p.z, n, ctx.states);
        const Ket evolved = apply(ctx.u_exp(m, *p.z, *p.lambda), basis_ket(ctx.space, n));
        const double off = basis.ket.amps().squaredNorm() - std::norm(basis.ket[n]);
        const double diag = std::norm(evolved[n]);
        const double theta = *p.lambda * cos_pi_ratio(n, m);
        r.set("effective-angle", std::abs(off * std::pow(std::sin(theta), 2) + diag - 1.0));
        r.set("printed-sin2-lambda", std::abs(off * std::pow(std::sin(*p.lambda), 2) + diag - 1.0));
      },
      {}});

  f.push_back(Family{
      "sec3-parity-action-pair",
      "cos(pi/m N)|z_m> = |(-z)_m> and sin(pi/m N)|z_m> = 0",
      {"sec3-parity-cos", "sec3-parity-sin"},
      kM | kZ,
      {},
      {},
      {{"cos-reflects", 1e-9}, {"sin-annihilates", 1e-9}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int m = *p.m;
        const Ket zm = ctx.gcs_ket(m, *p.z);
        r.set("cos-reflects", res(apply(ctx.c(m), zm), ctx.gcs_ket(m, -*p.z)));
        r.set("sin-annihilates", edge_residual(apply(ctx.s(m), zm)));
      },
      {}});

  f.push_back(Family{
      "sec3-support-multiples",
      "|z_m> has no weight on number states that are not multiples of m",
      {"sec3-support"},
      kM | kZ,
      {},
      {},
      {{"off-support-mass", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        r.set("off-support-mass", off_support_mass(ctx.gcs_ket(*p.m, *p.z), *p.m));
      },
      {}});

  f.push_back(Family{
      "sec5-diagonal-reality",
      "Im <n|D_m(z)|n> = 0 for n <= reality_n_max",
      {"sec5-reality"},
      kM | kZ,
      {},
      {},
      {{"imaginary-diagonal", 1e-10}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        // Same precondition as the basis states themselves.
        gdf_basis_state(ctx.space, *p.m, *p.z, 0, ctx.states);
        const int n_max = std::min(ctx.grid.reality_n_max, ctx.space.interior_dim() - 1);
        r.set("imaginary-diagonal", diagonal_reality_scan(ctx.space, *p.m, *p.z, n_max, ctx.ops),
              "n <= " + std::to_string(n_max));
      },
      {}});

  f.push_back(Family{
      "basis-gram-orthonormality",
      "Gram matrix of {|z_m,n>: n < K/2} equals the identity",
      {"sec5-basis"},
      kM | kZ,
      {},
      {},
      {{"gram-deviation", 1e-8}},
      [](const Context& ctx, const ParamPoint& p, Recorder& r) {
        const int count = ctx.space.interior_dim() / 2;
        Matrix cols(ctx.space.dim(), count);
        for (int n = 0; n < count; ++n) {
          cols.col(n) = gdf_basis_state(ctx.space, *p.m, *p.z, n, ctx.states).ket.amps();
        }
        const Matrix gram = cols.adjoint() * cols;
        r.set("gram-deviation", max_abs(gram - Matrix::Identity(count, count)),
              "n < " + std::to_string(count));
      },
      {}});

  std::sort(f.begin(), f.end(), [](const Family& a, const Family& b) { return a.id < b.id; });
  return f;
}

const std::vector<Family>& registry() {
  static const std::vector<Family> families = build_registry();
  return families;
}

template <typename T>
std::vector<std::optional<T>> axis(bool used, const std::vector<T>& values) {
  std::vector<std::optional<T>> out;
  if (!used) {
    out.push_back(std::nullopt);
    return out;
  }
  for (const T& v : values) out.push_back(v);
  return out;
}

std::vector<ParamPoint> enumerate(const Family& fam, const ParameterGrid& grid) {
  std::vector<std::optional<int>> ms;
  if (fam.fixed_m) {
    ms.push_back(fam.fixed_m);
  } else if (fam.uses & kM) {
    for (int m : grid.ms) {
      if (!fam.m_allowed || fam.m_allowed(m)) ms.push_back(m);
    }
  } else {
    ms.push_back(std::nullopt);
  }
  std::vector<ParamPoint> points;
  for (const auto& m : ms) {
    for (const auto& z : axis(fam.uses & kZ, grid.zs)) {
      for (const auto& u : axis(fam.uses & kU, grid.us)) {
        for (const auto& l : axis(fam.uses & kLambda, grid.lambdas)) {
          for (const auto& l2 : axis(fam.uses & kLambda2, grid.lambdas)) {
            for (const auto& n : axis(fam.uses & kN, grid.basis_ns)) {
              ParamPoint p{m, z, u, l, l2, n};
              if (fam.complete) fam.complete(p);
              points.push_back(p);
            }
          }
        }
      }
    }
  }
  return points;
}

double tolerance_for(const Family& fam, const Variant& v, const SuiteOptions& opts) {
  if (auto it = opts.tolerance_overrides.find(fam.id + ":" + v.name);
      it != opts.tolerance_overrides.end()) {
    return it->second;
  }
  if (auto it = opts.tolerance_overrides.find(fam.id); it != opts.tolerance_overrides.end()) {
    return it->second;
  }
  return v.tolerance.value_or(opts.default_tolerance);
}

std::vector<CheckResult> evaluate(const Family& fam, const ParamPoint& p, const Context& ctx,
                                  const SuiteOptions& opts) {
  std::vector<const Variant*> active;
  for (const auto& v : fam.variants) {
    if (!v.applies || v.applies(p)) active.push_back(&v);
  }
  auto make = [&](const Variant& v) {
    CheckResult r;
    r.check_id = fam.id;
    r.variant = v.name;
    r.params = p;
    r.dim = ctx.space.dim();
    r.interior_dim = ctx.space.interior_dim();
    r.tolerance = tolerance_for(fam, v, opts);
    r.discrepancy = v.discrepancy;
    r.note = v.note;
    return r;
  };
  auto append_note = [](std::string& note, const std::string& extra) {
    if (extra.empty()) return;
    note = note.empty() ? extra : note + "; " + extra;
  };

  std::vector<CheckResult> out;
  Recorder rec;
  try {
    fam.eval(ctx, p, rec);
  } catch (const PreconditionFailure& e) {
    for (const Variant* v : active) {
      CheckResult r = make(*v);
      r.verdict = Verdict::skipped;
      r.residual = 0.0;
      append_note(r.note, std::string("skipped: ") + e.what());
      out.push_back(std::move(r));
    }
    return out;
  } catch (const std::exception& e) {
    for (const Variant* v : active) {
      CheckResult r = make(*v);
      r.verdict = Verdict::fail;
      r.residual = kInf;
      append_note(r.note, std::string("error: ") + e.what());
      out.push_back(std::move(r));
    }
    return out;
  }
  for (const Variant* v : active) {
    CheckResult r = make(*v);
    auto it = rec.values().find(v->name);
    if (it == rec.values().end()) {
      r.verdict = Verdict::fail;
      r.residual = kInf;
      append_note(r.note, "error: variant was not evaluated");
    } else {
      r.residual = it->second.first;
      append_note(r.note, it->second.second);
      r.verdict = r.residual <= r.tolerance ? Verdict::pass : Verdict::fail;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<CheckFamilyInfo> check_registry() {
  std::vector<CheckFamilyInfo> out;
  for (const auto& fam : registry()) {
    CheckFamilyInfo info{fam.id, fam.summary, fam.covers, {}};
    for (const auto& v : fam.variants) info.variants.push_back({v.name, v.tolerance, v.discrepancy});
    out.push_back(std::move(info));
  }
  return out;
}

std::vector<std::string> equation_tags() {
  std::vector<std::string> tags;
  for (int i = 1; i <= 10; ++i) tags.push_back("eq" + std::to_string(i));
  for (int i = 11; i <= 39; ++i) tags.push_back("eq" + std::to_string(i) + "a");
  tags.push_back("sec3-parity-cos");
  tags.push_back("sec3-parity-sin");
  return tags;
}

std::vector<std::string> audit_registry() {
  std::set<std::string> covered;
  for (const auto& fam : registry()) covered.insert(fam.covers.begin(), fam.covers.end());
  std::vector<std::string> missing;
  for (const auto& tag : equation_tags()) {
    if (!covered.count(tag)) missing.push_back(tag);
  }
  return missing;
}

SuiteReport run_suite(const ParameterGrid& grid, const std::vector<std::string>& selection,
                      const SuiteOptions& options) {
  const auto& families = registry();
  std::set<std::string> wanted(selection.begin(), selection.end());
  for (const auto& id : wanted) {
    const bool known = std::any_of(families.begin(), families.end(),
                                   [&](const Family& f) { return f.id == id; });
    if (!known) throw InvalidArgument("unknown check id '" + id + "'");
  }

  StateOptions state_opts;
  state_opts.ops = options.ops;
  state_opts.convergence_threshold = options.convergence_threshold;
  const Context ctx{make_space(grid.dim, grid.interior_dim, grid.tail_tol), options.ops, state_opts,
                    grid};

  struct Task {
    const Family* family;
    ParamPoint point;
  };
  std::vector<Task> tasks;
  for (const auto& fam : families) {
    if (!wanted.empty() && !wanted.count(fam.id)) continue;
    for (const auto& p : enumerate(fam, grid)) tasks.push_back({&fam, p});
  }

  std::vector<std::vector<CheckResult>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      slots[i] = evaluate(*tasks[i].family, tasks[i].point, ctx, options);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  SuiteReport report;
  report.environment = SuiteEnvironment{
      ctx.space.dim(),
      ctx.space.interior_dim(),
      ctx.space.tail_tol(),
      options.ops.safe_radius,
      options.default_tolerance,
      options.convergence_threshold,
      options.ops.fault == Fault::none ? "none" : "flip-creation-sign"};
  for (auto& slot : slots) {
    for (auto& r : slot) report.results.push_back(std::move(r));
  }
  auto& s = report.summary;
  for (const auto& r : report.results) {
    ++s.total;
    switch (r.verdict) {
      case Verdict::pass:
        ++s.passed;
        if (r.discrepancy) ++s.discrepancies_not_reproduced;
        break;
      case Verdict::fail:
        ++s.failed;
        if (r.discrepancy) {
          ++s.discrepancies_confirmed;
        } else {
          ++s.genuine_failures;
        }
        break;
      case Verdict::skipped:
        ++s.skipped;
        break;
    }
  }
  report.generated_at = options.timestamp.value_or(utc_now());
  return report;
}

}  // namespace paritydisp
