#include "paritydisp/io.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "paritydisp/complex_text.hpp"
#include "paritydisp/error.hpp"

namespace paritydisp {

using json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

json residual_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double residual_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw InvalidArgument("bad residual value '" + s + "'");
}

json params_json(const ParamPoint& p) {
  json j = json::object();
  if (p.m) j["m"] = *p.m;
  if (p.z) j["z"] = format_complex(*p.z);
  if (p.u) j["u"] = format_complex(*p.u);
  if (p.lambda) j["lambda"] = *p.lambda;
  if (p.lambda2) j["lambda2"] = *p.lambda2;
  if (p.n) j["n"] = *p.n;
  return j;
}

ParamPoint params_from(const json& j) {
  ParamPoint p;
  if (j.contains("m")) p.m = j["m"].get<int>();
  if (j.contains("z")) p.z = parse_complex(j["z"].get<std::string>());
  if (j.contains("u")) p.u = parse_complex(j["u"].get<std::string>());
  if (j.contains("lambda")) p.lambda = j["lambda"].get<double>();
  if (j.contains("lambda2")) p.lambda2 = j["lambda2"].get<double>();
  if (j.contains("n")) p.n = j["n"].get<int>();
  return p;
}

Verdict verdict_from(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "skipped") return Verdict::skipped;
  throw InvalidArgument("unknown verdict '" + s + "'");
}

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed ") + what + ": " + e.what());
  }
}

std::string tsv_cell(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n') c = ' ';
  }
  return s;
}

}  // namespace

std::string write_state(const State& state) {
  const auto& meta = state.meta;
  json amps = json::array();
  for (int n = 0; n < state.ket.dim(); ++n) {
    amps.push_back({state.ket[n].real(), state.ket[n].imag()});
  }
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["dim"] = state.ket.dim();
  doc["interior_dim"] = state.ket.space().interior_dim();
  doc["tail_tol"] = state.ket.space().tail_tol();
  doc["metadata"] = {
      {"kind", std::string(to_string(meta.kind))},
      {"m", meta.params.m},
      {"z", format_complex(meta.params.z)},
      {"u", format_complex(meta.params.u)},
      {"lambda", meta.params.lambda},
      {"n", meta.n},
      {"phase_fix_applied", meta.phase_fix_applied()},
      {"phase_factor", format_complex(meta.phase_factor)},
      {"report_sign", meta.report_sign},
      {"truncation_loss", meta.truncation_loss},
      {"tail_mass_above_k", meta.tail_mass_above_k},
      {"override_used", meta.override_used},
      {"notes", meta.notes},
  };
  doc["amplitudes"] = std::move(amps);
  return doc.dump(1) + "\n";
}

State read_state(std::string_view text) {
  const json doc = parse_document(text, "state document");
  try {
    const int dim = doc.at("dim").get<int>();
    const FockSpace space(dim, doc.at("interior_dim").get<int>(), doc.at("tail_tol").get<double>());
    const json& amps = doc.at("amplitudes");
    if (!amps.is_array() || static_cast<int>(amps.size()) != dim) {
      throw InvalidArgument("state document: amplitude count does not match dim");
    }
    Vector v(dim);
    for (int n = 0; n < dim; ++n) {
      const json& pair = amps[n];
      if (!pair.is_array() || pair.size() != 2) {
        throw InvalidArgument("state document: amplitude " + std::to_string(n) + " is not a pair");
      }
      v(n) = cplx(pair[0].get<double>(), pair[1].get<double>());
    }
    const json& md = doc.at("metadata");
    StateMeta meta;
    meta.kind = state_kind_from_string(md.at("kind").get<std::string>());
    meta.params.m = md.at("m").get<int>();
    meta.params.z = parse_complex(md.at("z").get<std::string>());
    meta.params.u = parse_complex(md.at("u").get<std::string>());
    meta.params.lambda = md.at("lambda").get<double>();
    meta.n = md.at("n").get<int>();
    meta.phase_factor = parse_complex(md.at("phase_factor").get<std::string>());
    meta.report_sign = md.at("report_sign").get<double>();
    meta.truncation_loss = md.at("truncation_loss").get<double>();
    meta.tail_mass_above_k = md.at("tail_mass_above_k").get<double>();
    meta.override_used = md.at("override_used").get<bool>();
    meta.notes = md.at("notes").get<std::vector<std::string>>();
    return State{Ket(space, std::move(v)), std::move(meta)};
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("state document: ") + e.what());
  }
}

std::string write_report(const SuiteReport& report) {
  const auto& env = report.environment;
  const auto& s = report.summary;
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["generated_at"] = report.generated_at;
  doc["environment"] = {
      {"dim", env.dim},
      {"interior_dim", env.interior_dim},
      {"tail_tol", env.tail_tol},
      {"safe_radius", env.safe_radius},
      {"default_tolerance", env.default_tolerance},
      {"convergence_threshold", env.convergence_threshold},
      {"fault", env.fault},
  };
  doc["summary"] = {
      {"total", s.total},
      {"passed", s.passed},
      {"failed", s.failed},
      {"skipped", s.skipped},
      {"genuine_failures", s.genuine_failures},
      {"discrepancies_confirmed", s.discrepancies_confirmed},
      {"discrepancies_not_reproduced", s.discrepancies_not_reproduced},
  };
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back({
        {"check_id", r.check_id},
        {"variant", r.variant},
        {"params", params_json(r.params)},
        {"dim", r.dim},
        {"interior_dim", r.interior_dim},
        {"residual", residual_json(r.residual)},
        {"tolerance", r.tolerance},
        {"verdict", to_string(r.verdict)},
        {"discrepancy", r.discrepancy},
        {"note", r.note},
    });
  }
  doc["results"] = std::move(results);
  return doc.dump(2) + "\n";
}

SuiteReport read_report(std::string_view text) {
  const json doc = parse_document(text, "suite report");
  try {
    SuiteReport report;
    report.generated_at = doc.at("generated_at").get<std::string>();
    const json& env = doc.at("environment");
    report.environment = SuiteEnvironment{
        env.at("dim").get<int>(),
        env.at("interior_dim").get<int>(),
        env.at("tail_tol").get<double>(),
        env.at("safe_radius").get<double>(),
        env.at("default_tolerance").get<double>(),
        env.at("convergence_threshold").get<double>(),
        env.at("fault").get<std::string>(),
    };
    const json& s = doc.at("summary");
    report.summary = SuiteSummary{
        s.at("total").get<int>(),
        s.at("passed").get<int>(),
        s.at("failed").get<int>(),
        s.at("skipped").get<int>(),
        s.at("genuine_failures").get<int>(),
        s.at("discrepancies_confirmed").get<int>(),
        s.at("discrepancies_not_reproduced").get<int>(),
    };
    for (const json& r : doc.at("results")) {
      CheckResult c;
      c.check_id = r.at("check_id").get<std::string>();
      c.variant = r.at("variant").get<std::string>();
      c.params = params_from(r.at("params"));
      c.dim = r.at("dim").get<int>();
      c.interior_dim = r.at("interior_dim").get<int>();
      c.residual = residual_from(r.at("residual"));
      c.tolerance = r.at("tolerance").get<double>();
      c.verdict = verdict_from(r.at("verdict").get<std::string>());
      c.discrepancy = r.at("discrepancy").get<bool>();
      c.note = r.at("note").get<std::string>();
      report.results.push_back(std::move(c));
    }
    return report;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("suite report: ") + e.what());
  }
}

void write_report_rows(std::ostream& out, const SuiteReport& report) {
  out << "check_id\tvariant\tparams\tdim\tK\tresidual\ttolerance\tverdict\tdiscrepancy\tnote\n";
  for (const auto& r : report.results) {
    out << r.check_id << '\t' << r.variant << '\t' << tsv_cell(r.params.describe()) << '\t' << r.dim
        << '\t' << r.interior_dim << '\t' << residual_json(r.residual).dump() << '\t'
        << json(r.tolerance).dump() << '\t' << to_string(r.verdict) << '\t'
        << (r.discrepancy ? "printed-form" : "-") << '\t' << tsv_cell(r.note) << '\n';
  }
}

std::string write_convergence(const ConvergenceReport& report) {
  json doc;
  doc["m"] = report.m;
  doc["z"] = format_complex(report.z);
  doc["dims"] = report.dims;
  doc["deltas"] = report.deltas;
  doc["threshold"] = report.threshold;
  doc["max_delta"] = report.max_delta();
  doc["verdict"] = to_string(report.verdict);
  return doc.dump(2) + "\n";
}

void write_convergence_rows(std::ostream& out, const ConvergenceReport& report) {
  out << "dim_from,dim_to,infidelity\n";
  for (std::size_t i = 0; i < report.deltas.size(); ++i) {
    out << report.dims[i] << ',' << report.dims[i + 1] << ',' << json(report.deltas[i]).dump()
        << '\n';
  }
  out << "# verdict " << to_string(report.verdict) << " (threshold " << json(report.threshold).dump()
      << ")\n";
}

}  // namespace paritydisp
