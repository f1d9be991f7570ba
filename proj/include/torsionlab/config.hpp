/**
 * @file config.hpp
 * @brief Run configuration: named geometries/complexes, jobs, suites, knobs.
 *
 * The batch front-end reads one JSON document:
 *
 * @code{.json}
 * {
 *   "geometries": {
 *     "circle": {"gram": [[1.0]]},
 *     "square": {"tau": [0.0, 1.0], "area_scale": 1.0}
 *   },
 *   "complexes": {
 *     "circle-quarter": {"kind": "de-rham", "geometry": "circle",
 *                        "character": [0.25]},
 *     "t3-vol":  {"kind": "de-rham", "geometry": "t3",
 *                 "character": [0.21, 0.37, 0.11],
 *                 "flux": [{"indices": [1, 2, 3], "coefficient": [1.0, 0.0]}]},
 *     "mover":   {"kind": "superconnection", "geometry": "t2",
 *                 "character": [0.25, 0.0], "r0": 1, "r1": 1,
 *                 "terms": [{"indices": [1, 2], "parity": 1,
 *                            "matrix": [[[0,0],[0,0]], [[3,0],[0,0]]]}]},
 *     "kron":    {"kind": "dolbeault", "geometry": "square",
 *                 "character": [0.5, 0.0]}
 *   },
 *   "knobs": {"threads": 1, "whi_factor": 1.0, "kextra": 0,
 *             "max_modes": 80000000, "tolerance": 1e-4},
 *   "jobs":   [{"name": "c", "command": "compute",
 *               "complex": "circle-quarter", "output": "c.json"}],
 *   "suites": [{"name": "circle-exact", "kind": "torsion",
 *               "complex": "circle-quarter",
 *               "expect_log_tau": "0.34657359027997264", "tolerance": 1e-4}]
 * }
 * @endcode
 *
 * Conventions: complex numbers are [re, im] pairs; `indices` are 1-based
 * coordinate labels (dx^1 = first generator); Gram matrices are row-major
 * arrays of arrays; rationals in emitted ledgers are "p/q" strings.  Jobs
 * and suites keep their parameter objects verbatim, so a parsed config
 * serializes back to an identical document (the round-trip invariant).
 *
 * Emission helpers pin the artifact formats: every float in result JSON is
 * a decimal string with 17 significant digits (lossless, and byte-identical
 * no matter how many worker threads produced the value); CSV columns are
 * fixed per producer (`s,log_tau,err` for sweeps, `t,tr0,tr1,trD0,trD1,
 * str,tail_bound` for heat-trace tables).
 */
#pragma once

#include <nlohmann/json.hpp>

#include "torsionlab/spectral.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab {

/// Invalid configuration or user input: the front-end maps this to exit 1
/// (numeric-consistency failures carry ConsistencyError and map to exit 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Knobs {
  int threads = 1;
  double whi_factor = 1.0;
  int kextra = 0;
  std::size_t max_modes = 80000000;
  double tolerance = 1e-4;  ///< default verdict tolerance

  ZetaOptions zeta_options() const {
    ZetaOptions opt;
    opt.whi_factor = whi_factor;
    opt.kextra = kextra;
    opt.threads = threads;
    return opt;
  }
};

/// One batch job; `params` is the declaration object minus name/command,
/// kept verbatim for lossless round-trips.
struct Job {
  std::string name;
  std::string command;  ///< "compute" | "sweep"
  nlohmann::json params;
};

/// One verification suite (kinds: torsion, mckean-singer, residue,
/// relative-metric).
struct Suite {
  std::string name;
  std::string kind;
  nlohmann::json params;
};

class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  const Knobs& knobs() const { return knobs_; }
  const std::vector<Job>& jobs() const { return jobs_; }
  const std::vector<Suite>& suites() const { return suites_; }

  bool has_geometry(const std::string& name) const;
  bool has_complex(const std::string& name) const;
  /// Whether the named geometry is a complex torus (declared via "tau").
  bool is_complex_geometry(const std::string& name) const;
  /// Whether the named complex is of Dolbeault kind.
  bool is_dolbeault(const std::string& name) const;

  FlatTorus torus(const std::string& name) const;
  ComplexTorus complex_torus(const std::string& name) const;
  ComplexSpec complex_spec(const std::string& name) const;
  DolbeaultSpec dolbeault_spec(const std::string& name) const;

  /// Path declaration {"family": "conformal"|"diagonal-stretch"|"shear",
  /// "params": [...]} anchored at the named complex's torus.
  MetricPath metric_path(const std::string& complex_name,
                         const nlohmann::json& decl) const;

 private:
  nlohmann::json geometries_ = nlohmann::json::object();
  nlohmann::json complexes_ = nlohmann::json::object();
  Knobs knobs_;
  nlohmann::json knobs_raw_ = nlohmann::json::object();
  std::vector<Job> jobs_;
  std::vector<Suite> suites_;
  // Which top-level sections the document declared (round-trips omit the
  // absent ones verbatim).
  bool geometries_declared_ = false, complexes_declared_ = false,
       knobs_declared_ = false, jobs_declared_ = false,
       suites_declared_ = false;
};

/// "a", "bi", "a+bi", "a-bi" with decimal a, b (e.g. "0+1i", "-0.5i").
cplx parse_complex(const std::string& text);

/// %.*g rendering used for all emitted floats (17 digits in artifacts,
/// 12 in oracle printouts).
std::string format_sig(double value, int digits = 17);
std::string format_complex(cplx value, int digits = 12);

/// Characters / sample grids from config values.
Character parse_character(const nlohmann::json& arr, int n);
std::vector<double> parse_samples(const nlohmann::json& value);
/// Constant form from the config term schema (scalar-or-matrix terms).
ConstantForm parse_form(const nlohmann::json& terms, int n, int r);

nlohmann::json zeta_to_json(const ZetaResult& z);
nlohmann::json torsion_to_json(const TorsionValue& t);
nlohmann::json verdict_json(const SweepResult& sweep);
nlohmann::json partition_to_json(const PartitionLedger& ledger);

std::string sweep_csv(const SweepResult& sweep);
std::string heat_csv(const std::vector<HeatTraceSample>& samples);

}  // namespace torsionlab
