#include "paritydisp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "paritydisp/analysis.hpp"
#include "paritydisp/complex_text.hpp"
#include "paritydisp/error.hpp"
#include "paritydisp/io.hpp"
#include "paritydisp/states.hpp"
#include "paritydisp/verify.hpp"

namespace paritydisp {

namespace {

const std::vector<std::string> kObservables = {"p0",           "re_c0",        "im_c0",   "mean_n",
                                               "off_support",  "norm_deficit", "tail_mass"};

double parse_double(const std::string& text, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string("bad ") + what + " '" + text + "'");
  }
  return v;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw InvalidArgument("range must be start:stop:step, got '" + text + "'");
  const double start = parse_double(parts[0], "range start");
  const double stop = parse_double(parts[1], "range stop");
  const double step = parse_double(parts[2], "range step");
  if (step == 0.0 || !std::isfinite(step)) throw InvalidArgument("range step must be nonzero");
  const double span = (stop - start) / step;
  if (span < -1e-9) throw InvalidArgument("empty range '" + text + "'");
  const long count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  std::vector<double> values;
  for (long i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
  return values;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

void emit(const std::optional<std::string>& path, std::ostream& out, const std::string& text) {
  if (path) {
    write_text(*path, text);
  } else {
    out << text;
  }
}

struct Shared {
  std::string config_path;
  int dim = 0;
  int interior_dim = 0;
  double tail_tol = 0.0;
  double safe_radius = 0.0;
  double default_tolerance = 0.0;
  std::vector<std::string> tolerances;
  double convergence_threshold = 0.0;
  int jobs = 0;
  std::string format;
  bool override_guards = false;

  CLI::Option* dim_opt = nullptr;
  CLI::Option* interior_opt = nullptr;
  CLI::Option* tail_opt = nullptr;
  CLI::Option* radius_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* tols_opt = nullptr;
  CLI::Option* conv_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* config_opt = nullptr;
};

CliConfig resolve(const Shared& s) {
  CliConfig cfg;
  std::string path;
  if (s.config_opt->count()) {
    path = s.config_path;
  } else if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    path = env;
  }
  if (!path.empty()) cfg = load_config(path, cfg);
  if (s.dim_opt->count()) cfg.dim = s.dim;
  if (s.interior_opt->count()) cfg.interior_dim = s.interior_dim;
  if (s.tail_opt->count()) cfg.tail_tol = s.tail_tol;
  if (s.radius_opt->count()) cfg.safe_radius = s.safe_radius;
  if (s.tol_opt->count()) cfg.default_tolerance = s.default_tolerance;
  if (s.conv_opt->count()) cfg.convergence_threshold = s.convergence_threshold;
  if (s.jobs_opt->count()) cfg.jobs = s.jobs;
  if (s.format_opt->count()) cfg.format = s.format;
  for (const auto& item : s.tolerances) {
    const auto eq = item.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidArgument("tolerance must be check-id=value or check-id:variant=value");
    }
    cfg.tolerances[item.substr(0, eq)] = parse_double(item.substr(eq + 1), "tolerance");
  }
  if (cfg.format != "rows" && cfg.format != "structured") {
    throw InvalidArgument("format must be rows or structured, got '" + cfg.format + "'");
  }
  if (cfg.jobs < 1) throw InvalidArgument("jobs must be >= 1");
  return cfg;
}

StateOptions state_options(const CliConfig& cfg, bool override_guards) {
  StateOptions opts = override_guards ? StateOptions::overridden() : StateOptions{};
  opts.ops.safe_radius = cfg.safe_radius;
  opts.convergence_threshold = cfg.convergence_threshold;
  return opts;
}

FockSpace space_for(const CliConfig& cfg) { return make_space(cfg.dim, cfg.interior_dim, cfg.tail_tol); }

struct StateArgs {
  std::string kind;
  int m = 1;
  std::string z = "0";
  double lambda = 0.0;
  std::string u = "0";
  int n = 0;
};

void add_state_args(CLI::App* app, StateArgs& a, bool kind_required) {
  auto* kind = app->add_option("--kind", a.kind, "fock|coherent|gcs|b_plus|b_minus|superposition|cat|"
                                                 "gdf_basis|dressed_basis");
  if (kind_required) kind->required();
  app->add_option("--m", a.m, "Order m")->check(CLI::PositiveNumber);
  app->add_option("--z", a.z, "Complex amplitude, e.g. 0.5+0.3i");
  app->add_option("--lambda", a.lambda, "Evolution parameter (radians)");
  app->add_option("--u", a.u, "Second amplitude for cat/V states");
  app->add_option("--n", a.n, "Basis index")->check(CLI::NonNegativeNumber);
}

StateSpec spec_from(const StateArgs& a) {
  StateSpec spec;
  spec.kind = state_kind_from_string(a.kind);
  spec.params.m = a.m;
  spec.params.z = parse_complex(a.z);
  spec.params.u = parse_complex(a.u);
  spec.params.lambda = a.lambda;
  spec.n = a.n;
  return spec;
}

std::vector<double> observe(const State& s, const std::vector<std::string>& names) {
  const Ket k = s.reported();
  const NumberStatistics stats = number_statistics(k);
  std::vector<double> row;
  for (const auto& name : names) {
    if (name == "p0") {
      row.push_back(std::norm(k[0]));
    } else if (name == "re_c0") {
      row.push_back(k[0].real());
    } else if (name == "im_c0") {
      row.push_back(k[0].imag());
    } else if (name == "mean_n") {
      row.push_back(stats.mean_n);
    } else if (name == "off_support") {
      row.push_back(off_support_mass(k, s.meta.params.m));
    } else if (name == "norm_deficit") {
      row.push_back(s.meta.truncation_loss);
    } else if (name == "tail_mass") {
      row.push_back(s.meta.tail_mass_above_k);
    }
  }
  return row;
}

int cmd_gen(const CliConfig& cfg, const StateArgs& a, bool override_guards, std::ostream& out,
            std::ostream& err) {
  const FockSpace space = space_for(cfg);
  const StateSpec spec = spec_from(a);
  const StateOptions opts = state_options(cfg, override_guards);
  const State state = make_state(space, spec, opts);
  emit(cfg.out, out, write_state(state));

  std::ostream& notes = cfg.out ? out : err;
  const NumberStatistics stats = number_statistics(state.reported());
  notes << "kind " << to_string(state.meta.kind) << ", dim " << space.dim() << ", K "
        << space.interior_dim() << "\n";
  notes << "truncation loss " << state.meta.truncation_loss << ", tail mass above K "
        << state.meta.tail_mass_above_k << ", mean n " << stats.mean_n << "\n";
  notes << "phase fix " << (state.meta.phase_fix_applied() ? "applied" : "not applied")
        << " (factor " << format_complex(state.meta.phase_factor) << ", report sign "
        << state.meta.report_sign << ")\n";
  for (const auto& note : state.meta.notes) notes << "note: " << note << "\n";
  if (spec.kind == StateKind::cat) {
    const cplx z = spec.params.z;
    const cplx u = spec.params.u;
    const double l = spec.params.lambda;
    const cplx phase = std::exp(kI * (u * std::conj(z)).imag());
    const Ket two_term = normalized(cplx(std::cos(l)) * coherent(space, u, opts).ket +
                                    (kI * std::sin(l) * phase) * coherent(space, z, opts).ket);
    notes << "two-term fidelity defect " << 1.0 - fidelity(state.ket, two_term) << "\n";
  }
  if (cfg.stats) {
    Table table{{"n", "p_n"}, {}};
    for (std::size_t n = 0; n < stats.probs.size(); ++n) {
      table.rows.push_back({static_cast<double>(n), stats.probs[n]});
    }
    std::ostringstream csv;
    write_csv(csv, table);
    write_text(*cfg.stats, csv.str());
  }
  return kExitOk;
}

struct VerifyArgs {
  std::vector<std::string> checks;
  std::vector<int> ms;
  std::vector<std::string> zs;
  std::vector<double> lambdas;
  std::string timestamp;
  std::string fault = "none";
  CLI::Option* timestamp_opt = nullptr;
};

int cmd_verify(const CliConfig& cfg, const VerifyArgs& a, std::ostream& out) {
  ParameterGrid grid;
  grid.dim = cfg.dim;
  grid.interior_dim = cfg.interior_dim;
  grid.tail_tol = cfg.tail_tol;
  if (!a.ms.empty()) grid.ms = a.ms;
  if (!a.zs.empty()) {
    grid.zs.clear();
    for (const auto& z : a.zs) grid.zs.push_back(parse_complex(z));
  }
  if (!a.lambdas.empty()) grid.lambdas = a.lambdas;

  SuiteOptions options;
  options.ops.safe_radius = cfg.safe_radius;
  options.default_tolerance = cfg.default_tolerance;
  options.tolerance_overrides = cfg.tolerances;
  options.convergence_threshold = cfg.convergence_threshold;
  options.jobs = cfg.jobs;
  if (a.timestamp_opt->count()) options.timestamp = a.timestamp;
  if (a.fault == "flip-creation-sign") {
    options.ops.fault = Fault::flip_creation_sign;
  } else if (a.fault != "none") {
    throw InvalidArgument("unknown fault '" + a.fault + "'");
  }
  // Faulty operators must never land in the shared cache.
  OperatorCache private_cache;
  if (options.ops.fault != Fault::none) options.ops.cache = &private_cache;

  const SuiteReport report = run_suite(grid, a.checks, options);
  if (cfg.report) {
    if (cfg.format == "rows") {
      std::ostringstream rows;
      write_report_rows(rows, report);
      write_text(*cfg.report, rows.str());
    } else {
      write_text(*cfg.report, write_report(report));
    }
  }
  const auto& s = report.summary;
  out << "checks " << s.total << ": passed " << s.passed << ", failed " << s.failed << ", skipped "
      << s.skipped << ", genuine failures " << s.genuine_failures
      << ", printed-form discrepancies confirmed " << s.discrepancies_confirmed << "\n";
  for (const auto& r : report.results) {
    if (r.verdict == Verdict::pass) continue;
    const char* tag = r.verdict == Verdict::skipped ? "skipped"
                      : r.discrepancy              ? "discrepancy"
                                                   : "FAIL";
    out << tag << " " << r.check_id << ":" << r.variant << " [" << r.params.describe() << "]";
    if (r.verdict != Verdict::skipped) out << " residual " << r.residual << " > " << r.tolerance;
    if (!r.note.empty()) out << " -- " << r.note;
    out << "\n";
  }
  return report.ok() ? kExitOk : kExitCheckFailure;
}

struct SweepArgs {
  StateArgs state{"superposition"};
  std::string param;
  std::string range;
  std::vector<std::string> observables;
};

int cmd_sweep(const CliConfig& cfg, const SweepArgs& a, bool override_guards, std::ostream& out) {
  const std::vector<double> values = parse_range(a.range);
  const std::vector<std::string> names = a.observables.empty() ? kObservables : a.observables;
  for (const auto& name : names) {
    if (std::find(kObservables.begin(), kObservables.end(), name) == kObservables.end()) {
      throw InvalidArgument("unknown observable '" + name + "'");
    }
  }
  const FockSpace space = space_for(cfg);
  const StateSpec base = spec_from(a.state);
  const StateOptions opts = state_options(cfg, override_guards);
  const double arg = std::abs(base.params.z) > 0.0 ? std::arg(base.params.z) : 0.0;

  std::function<void(StateSpec&, double)> set;
  if (a.param == "lambda") {
    set = [](StateSpec& s, double v) { s.params.lambda = v; };
  } else if (a.param == "zabs") {
    set = [arg](StateSpec& s, double v) { s.params.z = std::polar(v, arg); };
  } else if (a.param == "zre") {
    set = [](StateSpec& s, double v) { s.params.z = cplx(v, s.params.z.imag()); };
  } else if (a.param == "zim") {
    set = [](StateSpec& s, double v) { s.params.z = cplx(s.params.z.real(), v); };
  } else {
    throw InvalidArgument("sweep parameter must be lambda, zabs, zre or zim");
  }

  std::vector<std::vector<double>> rows(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      StateSpec spec = base;
      set(spec, values[i]);
      try {
        std::vector<double> row{values[i]};
        const auto obs = observe(make_state(space, spec, opts), names);
        row.insert(row.end(), obs.begin(), obs.end());
        rows[i] = std::move(row);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::clamp<int>(cfg.jobs, 1, static_cast<int>(values.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!errors[i].empty()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << a.param << "=" << values[i] << ": " << errors[i];
      throw InvalidArgument(msg.str());
    }
  }
  Table table;
  table.header.push_back(a.param);
  table.header.insert(table.header.end(), names.begin(), names.end());
  table.rows = std::move(rows);
  std::ostringstream csv;
  write_csv(csv, table);
  emit(cfg.out, out, csv.str());
  return kExitOk;
}

struct ConvergeArgs {
  int m = 1;
  std::string z = "0";
  std::vector<int> dims;
};

int cmd_converge(const CliConfig& cfg, const ConvergeArgs& a, std::ostream& out) {
  OperatorConfig ops;
  ops.safe_radius = cfg.safe_radius;
  const ConvergenceReport report =
      convergence_diagnostic(a.m, parse_complex(a.z), a.dims, cfg.convergence_threshold, ops);
  if (cfg.format == "rows") {
    std::ostringstream rows;
    write_convergence_rows(rows, report);
    emit(cfg.out, out, rows.str());
  } else {
    emit(cfg.out, out, write_convergence(report));
  }
  return kExitOk;
}

}  // namespace

CliConfig load_config(const std::string& path, CliConfig base) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config file '" + path + "' must hold an object");
  static const std::set<std::string> known = {
      "dim",   "interior_dim", "tail_tol", "safe_radius", "default_tolerance", "tolerances",
      "convergence_threshold", "jobs", "format", "out", "report", "stats"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw InvalidArgument("config file: unknown key '" + key + "'");
    }
    if (j.contains("dim")) base.dim = j["dim"].get<int>();
    if (j.contains("interior_dim")) base.interior_dim = j["interior_dim"].get<int>();
    if (j.contains("tail_tol")) base.tail_tol = j["tail_tol"].get<double>();
    if (j.contains("safe_radius")) base.safe_radius = j["safe_radius"].get<double>();
    if (j.contains("default_tolerance")) base.default_tolerance = j["default_tolerance"].get<double>();
    if (j.contains("tolerances")) {
      for (const auto& [key, value] : j["tolerances"].items()) base.tolerances[key] = value.get<double>();
    }
    if (j.contains("convergence_threshold")) {
      base.convergence_threshold = j["convergence_threshold"].get<double>();
    }
    if (j.contains("jobs")) base.jobs = j["jobs"].get<int>();
    if (j.contains("format")) base.format = j["format"].get<std::string>();
    if (j.contains("out")) base.out = j["out"].get<std::string>();
    if (j.contains("report")) base.report = j["report"].get<std::string>();
    if (j.contains("stats")) base.stats = j["stats"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config file '" + path + "': " + e.what());
  }
  return base;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized parity-displacement operators in a truncated Fock space", "paritydisp"};
  app.require_subcommand(1);
  app.fallthrough();

  Shared s;
  s.config_opt = app.add_option("--config", s.config_path,
                                std::string("JSON config file (default: $") + kConfigEnvVar + ")");
  s.dim_opt = app.add_option("--dim", s.dim, "Fock cutoff N (default 128)");
  s.interior_opt = app.add_option("--interior-dim", s.interior_dim, "Interior dimension K (default N/2)");
  s.tail_opt = app.add_option("--tail-tol", s.tail_tol, "Allowed probability above K (default 1e-10)");
  s.radius_opt = app.add_option("--safe-radius", s.safe_radius, "Largest |z| for m >= 3 (default 0.25)");
  s.tol_opt = app.add_option("--default-tolerance", s.default_tolerance, "Suite tolerance (default 1e-8)");
  s.tols_opt = app.add_option("--tolerance", s.tolerances, "Per-check tolerance, id[:variant]=value");
  s.conv_opt = app.add_option("--convergence-threshold", s.convergence_threshold,
                              "Consecutive-dim infidelity threshold (default 1e-8)");
  s.jobs_opt = app.add_option("--jobs", s.jobs, "Worker threads (default 1)");
  s.format_opt = app.add_option("--format", s.format, "Report format: structured or rows");
  app.add_flag("--override", s.override_guards,
               "Accept states beyond the safe radius, unconverged or with excess tail mass");

  std::string out_path;
  std::string report_path;
  std::string stats_path;

  StateArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Build a state and write its document");
  add_state_args(gen, gen_args, true);
  auto* gen_out = gen->add_option("--out", out_path, "State document path (default stdout)");
  auto* gen_stats = gen->add_option("--stats", stats_path, "Number-statistics CSV path");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the identity verification suite");
  verify->add_option("--check", verify_args.checks, "Restrict to these check ids");
  verify->add_option("--ms", verify_args.ms, "Grid orders m")->delimiter(',');
  verify->add_option("--zs", verify_args.zs, "Grid amplitudes z")->delimiter(',');
  verify->add_option("--lambdas", verify_args.lambdas, "Grid lambdas")->delimiter(',');
  auto* verify_report = verify->add_option("--report", report_path, "Report path");
  verify_args.timestamp_opt =
      verify->add_option("--timestamp", verify_args.timestamp, "Fixed generated_at value");
  verify->add_option("--fault", verify_args.fault)->group("");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Tabulate observables over a parameter range");
  add_state_args(sweep, sweep_args.state, false);
  sweep->add_option("--param", sweep_args.param, "lambda|zabs|zre|zim")->required();
  sweep->add_option("--range", sweep_args.range, "start:stop:step")->required();
  sweep->add_option("--observables", sweep_args.observables,
                    "Columns: p0,re_c0,im_c0,mean_n,off_support,norm_deficit,tail_mass")
      ->delimiter(',');
  auto* sweep_out = sweep->add_option("--out", out_path, "CSV path (default stdout)");

  ConvergeArgs conv_args;
  auto* converge = app.add_subcommand("converge", "Compare D_m(z)|0> across cutoffs");
  converge->add_option("--m", conv_args.m, "Order m")->check(CLI::PositiveNumber);
  converge->add_option("--z", conv_args.z, "Complex amplitude");
  converge->add_option("--dims", conv_args.dims, "Cutoffs, e.g. 64,128,256")
      ->delimiter(',')
      ->required();
  auto* conv_out = converge->add_option("--out", out_path, "Output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CliConfig cfg = resolve(s);
    if (gen_out->count() || sweep_out->count() || conv_out->count()) cfg.out = out_path;
    if (verify_report->count()) cfg.report = report_path;
    if (gen_stats->count()) cfg.stats = stats_path;
    if (gen->parsed()) return cmd_gen(cfg, gen_args, s.override_guards, out, err);
    if (verify->parsed()) return cmd_verify(cfg, verify_args, out);
    if (sweep->parsed()) return cmd_sweep(cfg, sweep_args, s.override_guards, out);
    return cmd_converge(cfg, conv_args, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (at position " << e.position() << ")\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace paritydisp
