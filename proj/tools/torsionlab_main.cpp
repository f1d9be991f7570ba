/**
 * @file torsionlab_main.cpp
 * @brief `torsionlab` batch front-end.
 *
 * Verbs:
 *   compute  -- run the config's compute jobs, write torsion/zeta JSON
 *   sweep    -- run metric/flux/gauge sweep jobs, write CSV + verdict JSON
 *   verify   -- run the registered suites, aggregate pass/fail
 *   oracle   -- print closed-form values (eta, theta1, kronecker, hurwitz)
 *
 * Global flags: --config PATH, --threads N, --out DIR, --tolerance X; the
 * environment variable TORSIONLAB_THREADS is the fallback for --threads.
 *
 * Exit codes: 0 success; 1 configuration or usage error; 2 numeric
 * consistency failure (cross-path disagreement or a failed verdict/suite).
 * All emitted numbers are decimal strings (17 significant digits) rendered
 * on the coordinating thread, so identical configs produce byte-identical
 * artifacts regardless of worker count.
 */
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torsionlab/config.hpp"
#include "torsionlab/special_functions.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace torsionlab;

namespace {

struct GlobalFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::string job_filter;
  int threads = 0;        // 0: env, then config knob
  double tolerance = 0.0; // 0: per-job / per-suite / knob default
};

int effective_threads(const GlobalFlags& flags, const Knobs& knobs) {
  if (flags.threads > 0) return flags.threads;
  if (const char* env = std::getenv("TORSIONLAB_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return knobs.threads;
}

ZetaOptions options_for(const GlobalFlags& flags, const Knobs& knobs) {
  ZetaOptions opt = knobs.zeta_options();
  opt.threads = effective_threads(flags, knobs);
  return opt;
}

double tolerance_for(const GlobalFlags& flags, const json& params,
                     double fallback) {
  if (flags.tolerance > 0.0) return flags.tolerance;
  if (params.contains("tolerance")) return params["tolerance"].get<double>();
  return fallback;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

ZetaMethod method_from(const json& params) {
  if (!params.contains("method")) return ZetaMethod::Auto;
  return parse_zeta_method(params["method"].get<std::string>());
}

double expected_value(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    try {
      return std::stod(value.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where + ": expected a number or decimal string");
}

std::vector<Job> select_jobs(const RunConfig& config, const GlobalFlags& flags,
                             const std::string& command) {
  std::vector<Job> picked;
  for (const auto& job : config.jobs()) {
    if (job.command != command) continue;
    if (!flags.job_filter.empty() && job.name != flags.job_filter) continue;
    picked.push_back(job);
  }
  if (picked.empty()) {
    if (!flags.job_filter.empty())
      throw ConfigError("no " + command + " job named '" + flags.job_filter +
                        "' in the config");
    throw ConfigError("the config declares no '" + command + "' jobs");
  }
  return picked;
}

// ---------------------------------------------------------------- compute

int cmd_compute(const RunConfig& config, const GlobalFlags& flags) {
  const ZetaOptions opt = options_for(flags, config.knobs());
  for (const auto& job : select_jobs(config, flags, "compute")) {
    const std::string ref = job.params["complex"].get<std::string>();
    const ZetaMethod method = method_from(job.params);
    const bool dolbeault = config.is_dolbeault(ref);

    const TorsionValue torsion =
        dolbeault
            ? analytic_torsion(config.dolbeault_spec(ref), method, opt)
            : analytic_torsion(config.complex_spec(ref), method, opt);

    json artifact;
    artifact["job"] = job.name;
    artifact["complex"] = ref;
    artifact["torsion"] = torsion_to_json(torsion);

    if (job.params.contains("heat_grid")) {
      if (dolbeault)
        throw ConfigError("job '" + job.name +
                          "': heat_grid tables are only emitted for the "
                          "real kinds (de-rham / superconnection)");
      const ComplexSpec spec = config.complex_spec(ref);
      const SpectrumTable table = build_spectrum_table(
          spec, default_radius(spec, opt.whi_factor), opt.threads);
      const json& grid = job.params["heat_grid"];
      std::vector<double> ts = parse_samples(grid);
      std::vector<HeatTraceSample> rows;
      for (const double t : ts)
        rows.push_back(heat_trace(spec, table, t, opt.threads));
      const std::string heat_name =
          job.params.value("heat_output", job.name + ".heat.csv");
      write_text(fs::path(flags.out_dir) / heat_name, heat_csv(rows));
      artifact["heat_output"] = heat_name;
    }

    const std::string out_name = job.params.value("output", job.name + ".json");
    write_text(fs::path(flags.out_dir) / out_name, dump_json(artifact));
    std::cout << "compute '" << job.name << "': log_tau = "
              << format_sig(torsion.log_tau) << " (err "
              << format_sig(torsion.err, 3) << ") -> " << out_name << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ sweep

ConstantForm gauge_form_from(const json& params, const ComplexSpec& spec,
                             const std::string& where) {
  if (!params.contains("beta")) return ConstantForm(spec.n(), 1, {});
  const json& terms = params["beta"];
  if (!terms.is_array()) throw ConfigError(where + ": 'beta' must be an array");
  bool matrix_valued = false;
  for (const auto& term : terms)
    matrix_valued = matrix_valued || term.contains("matrix");
  return parse_form(terms, spec.n(), matrix_valued ? spec.r() : 1);
}

int cmd_sweep(const RunConfig& config, const GlobalFlags& flags) {
  const ZetaOptions opt = options_for(flags, config.knobs());
  int exit_code = 0;
  for (const auto& job : select_jobs(config, flags, "sweep")) {
    const std::string where = "job '" + job.name + "'";
    const std::string ref = job.params["complex"].get<std::string>();
    if (!job.params.contains("kind"))
      throw ConfigError(where + ": missing sweep 'kind'");
    const std::string kind = job.params["kind"].get<std::string>();
    const double tolerance =
        tolerance_for(flags, job.params, config.knobs().tolerance);
    const bool relative = job.params.value("relative", false) ||
                          job.params.contains("characters");
    const bool dolbeault = config.is_dolbeault(ref);

    SweepResult result;
    if (kind == "metric") {
      if (!job.params.contains("path"))
        throw ConfigError(where + ": metric sweeps need a 'path'");
      const MetricPath path = config.metric_path(ref, job.params["path"]);
      const std::vector<double> samples =
          parse_samples(job.params.value("samples", json{{"from", -0.5},
                                                         {"to", 0.5},
                                                         {"count", 9}}));
      if (relative) {
        if (!job.params.contains("characters"))
          throw ConfigError(where +
                            ": relative sweeps need 'characters' [rho1, rho2]");
        const json& chars = job.params["characters"];
        if (!chars.is_array() || chars.size() != 2)
          throw ConfigError(where + ": 'characters' must list two twists");
        if (dolbeault) {
          const DolbeaultSpec spec = config.dolbeault_spec(ref);
          const auto pair_of = [&](const json& uv) {
            if (!uv.is_array() || uv.size() != 2)
              throw ConfigError(where + ": dolbeault characters are [u, v]");
            const Character c = parse_character(uv, 2);
            return std::pair<double, double>{c.u()(0), c.u()(1)};
          };
          result = relative_metric_sweep(spec, pair_of(chars[0]),
                                         pair_of(chars[1]), path, samples,
                                         tolerance, method_from(job.params),
                                         opt);
        } else {
          const ComplexSpec spec = config.complex_spec(ref);
          result = relative_metric_sweep(
              spec, parse_character(chars[0], spec.n()),
              parse_character(chars[1], spec.n()), path, samples, tolerance,
              method_from(job.params), opt);
        }
      } else if (dolbeault) {
        result = metric_sweep(config.dolbeault_spec(ref), path, samples,
                              tolerance, method_from(job.params), opt);
      } else {
        result = metric_sweep(config.complex_spec(ref), path, samples,
                              tolerance, method_from(job.params), opt);
      }
    } else if (kind == "gauge") {
      if (dolbeault)
        throw ConfigError(where + ": gauge sweeps apply to the real kinds");
      const ComplexSpec spec = config.complex_spec(ref);
      const ConstantForm beta = gauge_form_from(job.params, spec, where);
      const std::vector<double> samples =
          parse_samples(job.params.value("samples", json{{"from", -0.5},
                                                         {"to", 0.5},
                                                         {"count", 9}}));
      if (relative) {
        const json& chars = job.params["characters"];
        if (!chars.is_array() || chars.size() != 2)
          throw ConfigError(where + ": 'characters' must list two twists");
        result = relative_gauge_sweep(spec, parse_character(chars[0], spec.n()),
                                      parse_character(chars[1], spec.n()),
                                      beta, samples, tolerance);
      } else {
        result = gauge_sweep(spec, beta, samples, tolerance);
      }
    } else if (kind == "flux") {
      if (dolbeault)
        throw ConfigError(where + ": flux sweeps apply to the real kinds");
      const ComplexSpec spec = config.complex_spec(ref);
      std::vector<double> eps = {0.1, 0.05, 0.025};
      if (job.params.contains("eps")) eps = parse_samples(job.params["eps"]);
      const double slope_min = job.params.value("slope_min", 1.2);
      const FluxReport report = flux_continuity_check(
          spec, eps, slope_min, ZetaMethod::HeatTrace, opt);
      result.suite = "flux-sweep";
      result.spec_id = spec.id();
      for (std::size_t i = 0; i < report.eps.size(); ++i)
        result.rows.push_back(
            {report.eps[i], report.log_taus[i], report.errs[i]});
      result.max_deviation = report.deviations.empty()
                                 ? 0.0
                                 : *std::max_element(
                                       report.deviations.begin(),
                                       report.deviations.end());
      result.tolerance = slope_min;
      result.passed = report.passed;
      result.note = "base log_tau " + format_sig(report.base_log_tau) +
                    ", slope " + format_sig(report.slope, 6) + ", monotone " +
                    (report.monotone ? "yes" : "no");
    } else {
      throw ConfigError(where + ": unknown sweep kind '" + kind +
                        "' (expected metric, flux, or gauge)");
    }

    const std::string csv_name = job.params.value("output", job.name + ".csv");
    const std::string verdict_name =
        job.params.value("verdict", job.name + ".verdict.json");
    write_text(fs::path(flags.out_dir) / csv_name, sweep_csv(result));
    write_text(fs::path(flags.out_dir) / verdict_name,
               dump_json(verdict_json(result)));
    std::cout << "sweep '" << job.name << "' [" << result.suite << "]: "
              << (result.passed ? "pass" : "FAIL") << " (max_deviation "
              << format_sig(result.max_deviation, 3) << ", tolerance "
              << format_sig(result.tolerance, 3) << ") -> " << csv_name
              << "\n";
    if (!result.passed) exit_code = 2;
  }
  return exit_code;
}

// ----------------------------------------------------------------- verify

json run_suite(const RunConfig& config, const Suite& suite,
               const GlobalFlags& flags) {
  const ZetaOptions opt = options_for(flags, config.knobs());
  const std::string where = "suite '" + suite.name + "'";
  const std::string ref = suite.params["complex"].get<std::string>();
  const bool dolbeault = config.is_dolbeault(ref);

  json verdict;
  verdict["suite"] = suite.name;
  verdict["spec"] = ref;

  if (suite.kind == "torsion") {
    const double tolerance =
        tolerance_for(flags, suite.params, config.knobs().tolerance);
    if (!suite.params.contains("expect_log_tau"))
      throw ConfigError(where + ": needs 'expect_log_tau'");
    const double expect =
        expected_value(suite.params["expect_log_tau"], where);
    const TorsionValue torsion =
        dolbeault ? analytic_torsion(config.dolbeault_spec(ref),
                                     method_from(suite.params), opt)
                  : analytic_torsion(config.complex_spec(ref),
                                     method_from(suite.params), opt);
    const double deviation = std::abs(torsion.log_tau - expect);
    verdict["samples"] = 1;
    verdict["max_deviation"] = format_sig(deviation);
    verdict["tolerance"] = format_sig(tolerance);
    verdict["pass"] = deviation < tolerance;
    return verdict;
  }

  if (suite.kind == "residue") {
    const double tolerance = tolerance_for(flags, suite.params, 1e-3);
    const TorsionValue torsion =
        dolbeault ? analytic_torsion(config.dolbeault_spec(ref),
                                     ZetaMethod::HeatTrace, opt)
                  : analytic_torsion(config.complex_spec(ref),
                                     ZetaMethod::HeatTrace, opt);
    const double worst = std::max(std::abs(torsion.grade0.residue0),
                                  std::abs(torsion.grade1.residue0));
    verdict["samples"] = 2;
    verdict["max_deviation"] = format_sig(worst);
    verdict["tolerance"] = format_sig(tolerance);
    verdict["pass"] = worst < tolerance;
    return verdict;
  }

  if (suite.kind == "mckean-singer") {
    if (dolbeault)
      throw ConfigError(where + ": supertrace tables run on the real kinds");
    const double tolerance = tolerance_for(flags, suite.params, 1e-8);
    const ComplexSpec spec = config.complex_spec(ref);
    const std::vector<double> ts = parse_samples(suite.params.value(
        "t", json::parse(R"([0.05, 0.1, 0.5, 1.0, 2.0, 5.0])")));
    const SpectrumTable table = build_spectrum_table(
        spec, default_radius(spec, opt.whi_factor), opt.threads);
    const int chi = betti_numbers(spec).chi;
    const double deviation =
        mckean_singer_deviation(spec, table, ts, chi, opt.threads);
    verdict["samples"] = ts.size();
    verdict["max_deviation"] = format_sig(deviation);
    verdict["tolerance"] = format_sig(tolerance);
    verdict["pass"] = deviation < tolerance;
    return verdict;
  }

  // relative-metric
  const double tolerance =
      tolerance_for(flags, suite.params, config.knobs().tolerance);
  if (!suite.params.contains("path") || !suite.params.contains("characters"))
    throw ConfigError(where + ": needs 'path' and 'characters'");
  const MetricPath path = config.metric_path(ref, suite.params["path"]);
  const std::vector<double> samples = parse_samples(suite.params.value(
      "samples", json{{"from", -0.5}, {"to", 0.5}, {"count", 5}}));
  const json& chars = suite.params["characters"];
  if (!chars.is_array() || chars.size() != 2)
    throw ConfigError(where + ": 'characters' must list two twists");
  SweepResult sweep;
  if (dolbeault) {
    const DolbeaultSpec spec = config.dolbeault_spec(ref);
    const auto pair_of = [&](const json& uv) {
      const Character c = parse_character(uv, 2);
      return std::pair<double, double>{c.u()(0), c.u()(1)};
    };
    sweep = relative_metric_sweep(spec, pair_of(chars[0]), pair_of(chars[1]),
                                  path, samples, tolerance,
                                  ZetaMethod::Auto, opt);
  } else {
    const ComplexSpec spec = config.complex_spec(ref);
    sweep = relative_metric_sweep(spec, parse_character(chars[0], spec.n()),
                                  parse_character(chars[1], spec.n()), path,
                                  samples, tolerance, ZetaMethod::Auto, opt);
  }
  verdict = verdict_json(sweep);
  verdict["suite"] = suite.name;
  return verdict;
}

int cmd_verify(const RunConfig& config, const GlobalFlags& flags) {
  if (config.suites().empty()) {
    std::cout << "warning: no suites registered; nothing to verify\n";
    std::cout << "[]\n";
    return 0;
  }
  json summary = json::array();
  bool all_pass = true;
  for (const auto& suite : config.suites()) {
    json verdict;
    try {
      verdict = run_suite(config, suite, flags);
    } catch (const std::exception& e) {
      verdict["suite"] = suite.name;
      verdict["pass"] = false;
      verdict["error"] = e.what();
    }
    const bool pass = verdict.value("pass", false);
    all_pass = all_pass && pass;
    std::cout << "suite '" << suite.name << "': "
              << (pass ? "pass" : "FAIL");
    if (verdict.contains("max_deviation"))
      std::cout << " (max_deviation " << verdict["max_deviation"].get<std::string>()
                << ", tolerance " << verdict["tolerance"].get<std::string>()
                << ")";
    if (verdict.contains("error"))
      std::cout << " -- " << verdict["error"].get<std::string>();
    std::cout << "\n";
    summary.push_back(std::move(verdict));
  }
  std::cout << dump_json(summary);
  if (!flags.out_dir.empty() && flags.out_dir != ".")
    write_text(fs::path(flags.out_dir) / "verify.json", dump_json(summary));
  return all_pass ? 0 : 2;
}

// ----------------------------------------------------------------- oracle

struct OracleArgs {
  std::string name;
  std::string tau = "0+1i";
  std::string z = "0.25";
  double u = 0.0, v = 0.0, a = 0.25;
  double length = 1.0;
};

int cmd_oracle(const OracleArgs& args) {
  if (args.name == "eta") {
    std::cout << format_complex(dedekind_eta(parse_complex(args.tau)), 12)
              << "\n";
    return 0;
  }
  if (args.name == "theta1") {
    std::cout << format_complex(
                     theta1_series(parse_complex(args.z),
                                   parse_complex(args.tau)),
                     12)
              << "\n";
    return 0;
  }
  if (args.name == "kronecker") {
    std::cout << format_sig(
                     kronecker_torsion(args.u, args.v, parse_complex(args.tau)),
                     12)
              << "\n";
    return 0;
  }
  if (args.name == "hurwitz") {
    std::cout << format_sig(hurwitz_logdet(args.a, args.length), 12) << "\n";
    return 0;
  }
  std::cerr << "unknown oracle '" << args.name
            << "'; known formulas: eta, theta1, kronecker, hurwitz\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "torsionlab: zeta-regularized determinants and analytic torsion of "
      "graded complexes on flat tori"};
  app.require_subcommand(1);

  GlobalFlags flags;
  OracleArgs oracle_args;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", flags.config_path,
                                "run configuration (JSON)");
    if (needs_config) cfg->required();
    sub->add_option("--threads", flags.threads,
                    "worker threads (fallback: TORSIONLAB_THREADS, then the "
                    "config knob)");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--tolerance", flags.tolerance,
                    "override verdict tolerances");
  };

  CLI::App* compute = app.add_subcommand("compute", "run compute jobs");
  add_common(compute, true);
  compute->add_option("--job", flags.job_filter, "run only the named job");

  CLI::App* sweep = app.add_subcommand("sweep", "run sweep jobs");
  add_common(sweep, true);
  sweep->add_option("--job", flags.job_filter, "run only the named job");

  CLI::App* verify = app.add_subcommand("verify", "run registered suites");
  add_common(verify, true);

  CLI::App* oracle =
      app.add_subcommand("oracle", "print closed-form reference values");
  oracle->add_option("name", oracle_args.name, "formula name")->required();
  oracle->add_option("--tau", oracle_args.tau, "modulus, e.g. 0+1i");
  oracle->add_option("--z", oracle_args.z, "argument, e.g. 0.25 or 0.1+0.2i");
  oracle->add_option("--u", oracle_args.u, "character u");
  oracle->add_option("--v", oracle_args.v, "character v");
  oracle->add_option("--a", oracle_args.a, "Hurwitz shift");
  oracle->add_option("--length", oracle_args.length, "circle circumference");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) return cmd_oracle(oracle_args);
    const RunConfig config = RunConfig::parse_file(flags.config_path);
    if (compute->parsed()) return cmd_compute(config, flags);
    if (sweep->parsed()) return cmd_sweep(config, flags);
    if (verify->parsed()) return cmd_verify(config, flags);
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
