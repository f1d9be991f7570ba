/**
 * @file config.cpp
 * @brief JSON run-configuration parsing, spec builders, artifact emission.
 */
#include "torsionlab/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace torsionlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError(message);
}

const json& require_field(const json& obj, const std::string& key,
                          const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing field '" + key + "'");
  return *it;
}

double number_at(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>()).to_double();
    } catch (const std::exception&) {
      fail(where + ": expected a number or a rational \"p/q\", got \"" +
           v.get<std::string>() + "\"");
    }
  }
  fail(where + ": expected a number");
}

cplx pair_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(where + ": expected a complex number as [re, im]");
  return cplx(v[0].get<double>(), v[1].get<double>());
}

Eigen::MatrixXd parse_gram(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty())
    fail(where + ": 'gram' must be a non-empty array of rows");
  const auto n = rows.size();
  Eigen::MatrixXd gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      fail(where + ": 'gram' must be square (row " + std::to_string(i + 1) +
           ")");
    for (std::size_t j = 0; j < n; ++j)
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number_at(rows[i][j], where + ".gram");
  }
  return gram;
}

std::uint32_t parse_mask(const json& indices, int n,
                         const std::string& where) {
  if (!indices.is_array() || indices.empty())
    fail(where + ": 'indices' must be a non-empty array of 1-based labels");
  std::uint32_t mask = 0;
  for (const auto& entry : indices) {
    if (!entry.is_number_integer())
      fail(where + ": indices must be integers");
    const long i = entry.get<long>();
    if (i < 1 || i > n)
      fail(where + ": index " + std::to_string(i) + " out of range 1.." +
           std::to_string(n));
    const std::uint32_t bit = 1u << (i - 1);
    if (mask & bit) fail(where + ": repeated index " + std::to_string(i));
    mask |= bit;
  }
  return mask;
}

std::string job_where(const Job& job) { return "job '" + job.name + "'"; }

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail("empty complex literal");

  const auto parse_part = [&](const std::string& part,
                              bool unit_default) -> double {
    if (unit_default && (part.empty() || part == "+")) return 1.0;
    if (unit_default && part == "-") return -1.0;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(part, &used);
    } catch (const std::exception&) {
      fail("malformed complex literal '" + text + "'");
    }
    if (used != part.size()) fail("malformed complex literal '" + text + "'");
    return value;
  };

  if (s.back() != 'i' && s.back() != 'I') return cplx(parse_part(s, false), 0.0);

  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') &&
        body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return cplx(0.0, parse_part(body, true));
  return cplx(parse_part(body.substr(0, split), false),
              parse_part(body.substr(split), true));
}

std::string format_sig(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

std::string format_complex(cplx value, int digits) {
  const double re = value.real(), im = value.imag();
  if (im == 0.0 || std::abs(im) < 1e-13 * (1.0 + std::abs(re)))
    return format_sig(re, digits);
  std::string out = format_sig(re, digits);
  out += (im < 0.0) ? "-" : "+";
  out += format_sig(std::abs(im), digits);
  out += "i";
  return out;
}

Character parse_character(const json& arr, int n) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    fail("character must be an array of " + std::to_string(n) + " numbers");
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = number_at(arr[i], "character");
  return Character(u);
}

std::vector<double> parse_samples(const json& value) {
  std::vector<double> samples;
  if (value.is_array()) {
    for (const auto& v : value) samples.push_back(number_at(v, "samples"));
    if (samples.empty()) fail("samples: empty array");
    return samples;
  }
  if (value.is_object()) {
    const double from = number_at(require_field(value, "from", "samples"),
                                  "samples.from");
    const double to =
        number_at(require_field(value, "to", "samples"), "samples.to");
    const auto& cj = require_field(value, "count", "samples");
    if (!cj.is_number_integer() || cj.get<long>() < 1)
      fail("samples.count: need a positive integer");
    const long count = cj.get<long>();
    for (long i = 0; i < count; ++i)
      samples.push_back(count == 1
                            ? from
                            : from + (to - from) * static_cast<double>(i) /
                                         static_cast<double>(count - 1));
    return samples;
  }
  fail("samples: expected an array or {from, to, count}");
}

ConstantForm parse_form(const json& terms, int n, int r) {
  if (!terms.is_array()) fail("form terms: expected an array");
  std::vector<FormTerm> parsed;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string where = "form term " + std::to_string(k + 1);
    const json& term = terms[k];
    if (!term.is_object()) fail(where + ": expected an object");
    FormTerm out;
    out.mask = parse_mask(require_field(term, "indices", where), n, where);
    const bool has_coeff = term.contains("coefficient");
    const bool has_matrix = term.contains("matrix");
    if (has_coeff == has_matrix)
      fail(where + ": give exactly one of 'coefficient' or 'matrix'");
    if (has_coeff) {
      out.coeff = Eigen::MatrixXcd::Zero(1, 1);
      out.coeff(0, 0) = pair_complex(term["coefficient"], where);
      if (r != 1)
        out.coeff = (out.coeff(0, 0) *
                     Eigen::MatrixXcd::Identity(r, r)).eval();
    } else {
      const json& rows = term["matrix"];
      if (!rows.is_array() || static_cast<int>(rows.size()) != r)
        fail(where + ": 'matrix' must have " + std::to_string(r) + " rows");
      out.coeff = Eigen::MatrixXcd::Zero(r, r);
      for (int i = 0; i < r; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != r)
          fail(where + ": 'matrix' must be " + std::to_string(r) + "x" +
               std::to_string(r));
        for (int j = 0; j < r; ++j)
          out.coeff(i, j) = pair_complex(rows[i][j], where + ".matrix");
      }
    }
    const json parity = term.value("parity", json(0));
    if (!parity.is_number_integer() ||
        (parity.get<int>() != 0 && parity.get<int>() != 1))
      fail(where + ": 'parity' must be 0 or 1");
    out.parity = parity.get<int>();
    parsed.push_back(std::move(out));
  }
  return ConstantForm(n, r, std::move(parsed));
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config '" + path + "': " + e.what());
  }
  return parse(doc);
}

RunConfig RunConfig::parse(const json& doc) {
  if (!doc.is_object()) fail("config: top level must be a JSON object");
  static const std::set<std::string> known = {"geometries", "complexes",
                                              "knobs", "jobs", "suites"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) fail("config: unknown section '" + key + "'");

  RunConfig config;
  if (doc.contains("geometries")) {
    config.geometries_declared_ = true;
    config.geometries_ = doc["geometries"];
    if (!config.geometries_.is_object())
      fail("config: 'geometries' must be an object of named declarations");
  }
  if (doc.contains("complexes")) {
    config.complexes_declared_ = true;
    config.complexes_ = doc["complexes"];
    if (!config.complexes_.is_object())
      fail("config: 'complexes' must be an object of named declarations");
  }

  if (doc.contains("knobs")) {
    config.knobs_declared_ = true;
    config.knobs_raw_ = doc["knobs"];
    const json& knobs = config.knobs_raw_;
    if (!knobs.is_object()) fail("config: 'knobs' must be an object");
    static const std::set<std::string> knob_keys = {
        "threads", "whi_factor", "kextra", "max_modes", "tolerance"};
    for (const auto& [key, value] : knobs.items())
      if (!knob_keys.count(key)) fail("config: unknown knob '" + key + "'");
    if (knobs.contains("threads")) {
      config.knobs_.threads = knobs["threads"].get<int>();
      if (config.knobs_.threads < 1) fail("knobs.threads: need >= 1");
    }
    if (knobs.contains("whi_factor")) {
      config.knobs_.whi_factor = knobs["whi_factor"].get<double>();
      if (!(config.knobs_.whi_factor > 0.0))
        fail("knobs.whi_factor: need > 0");
    }
    if (knobs.contains("kextra")) {
      config.knobs_.kextra = knobs["kextra"].get<int>();
      if (config.knobs_.kextra < 0) fail("knobs.kextra: need >= 0");
    }
    if (knobs.contains("max_modes")) {
      const long m = knobs["max_modes"].get<long>();
      if (m < 1) fail("knobs.max_modes: need >= 1");
      config.knobs_.max_modes = static_cast<std::size_t>(m);
    }
    if (knobs.contains("tolerance")) {
      config.knobs_.tolerance = knobs["tolerance"].get<double>();
      if (!(config.knobs_.tolerance > 0.0)) fail("knobs.tolerance: need > 0");
    }
  }

  if (doc.contains("jobs")) {
    config.jobs_declared_ = true;
    const json& jobs = doc["jobs"];
    if (!jobs.is_array()) fail("config: 'jobs' must be an array");
    for (const auto& decl : jobs) {
      if (!decl.is_object()) fail("config: each job must be an object");
      Job job;
      job.name = require_field(decl, "name", "job").get<std::string>();
      job.command =
          require_field(decl, "command", job_where(job)).get<std::string>();
      if (job.command != "compute" && job.command != "sweep")
        fail(job_where(job) + ": unknown command '" + job.command +
             "' (expected compute or sweep)");
      job.params = decl;
      job.params.erase("name");
      job.params.erase("command");
      config.jobs_.push_back(std::move(job));
    }
  }

  if (doc.contains("suites")) {
    config.suites_declared_ = true;
    const json& suites = doc["suites"];
    if (!suites.is_array()) fail("config: 'suites' must be an array");
    static const std::set<std::string> suite_kinds = {
        "torsion", "mckean-singer", "residue", "relative-metric"};
    for (const auto& decl : suites) {
      if (!decl.is_object()) fail("config: each suite must be an object");
      Suite suite;
      suite.name = require_field(decl, "name", "suite").get<std::string>();
      suite.kind = require_field(decl, "kind", "suite '" + suite.name + "'")
                       .get<std::string>();
      if (!suite_kinds.count(suite.kind))
        fail("suite '" + suite.name + "': unknown kind '" + suite.kind + "'");
      suite.params = decl;
      suite.params.erase("name");
      suite.params.erase("kind");
      config.suites_.push_back(std::move(suite));
    }
  }

  // Eager validation: every declaration must build, every reference resolve.
  for (const auto& [name, decl] : config.geometries_.items()) {
    if (!decl.is_object())
      fail("geometry '" + name + "': expected an object");
    if (config.is_complex_geometry(name))
      config.complex_torus(name);
    else
      config.torus(name);
  }
  for (const auto& [name, decl] : config.complexes_.items()) {
    if (!decl.is_object()) fail("complex '" + name + "': expected an object");
    if (config.is_dolbeault(name))
      config.dolbeault_spec(name);
    else
      config.complex_spec(name);
  }
  const auto check_complex_ref = [&](const json& params,
                                     const std::string& where) {
    const std::string ref =
        require_field(params, "complex", where).get<std::string>();
    if (!config.has_complex(ref))
      fail(where + ": unknown complex '" + ref + "'");
  };
  for (const auto& job : config.jobs_)
    check_complex_ref(job.params, job_where(job));
  for (const auto& suite : config.suites_) {
    check_complex_ref(suite.params, "suite '" + suite.name + "'");
    if (suite.params.contains("tolerance") &&
        !(suite.params["tolerance"].get<double>() > 0.0))
      fail("suite '" + suite.name + "': tolerance must be positive");
  }
  for (const auto& job : config.jobs_)
    if (job.params.contains("tolerance") &&
        !(job.params["tolerance"].get<double>() > 0.0))
      fail(job_where(job) + ": tolerance must be positive");

  return config;
}

nlohmann::json RunConfig::to_json() const {
  json doc = json::object();
  if (geometries_declared_) doc["geometries"] = geometries_;
  if (complexes_declared_) doc["complexes"] = complexes_;
  if (knobs_declared_) doc["knobs"] = knobs_raw_;
  if (jobs_declared_) {
    json jobs = json::array();
    for (const auto& job : jobs_) {
      json decl = job.params;
      decl["name"] = job.name;
      decl["command"] = job.command;
      jobs.push_back(std::move(decl));
    }
    doc["jobs"] = std::move(jobs);
  }
  if (suites_declared_) {
    json suites = json::array();
    for (const auto& suite : suites_) {
      json decl = suite.params;
      decl["name"] = suite.name;
      decl["kind"] = suite.kind;
      suites.push_back(std::move(decl));
    }
    doc["suites"] = std::move(suites);
  }
  return doc;
}

bool RunConfig::has_geometry(const std::string& name) const {
  return geometries_.contains(name);
}

bool RunConfig::has_complex(const std::string& name) const {
  return complexes_.contains(name);
}

bool RunConfig::is_complex_geometry(const std::string& name) const {
  if (!has_geometry(name)) fail("unknown geometry '" + name + "'");
  return geometries_[name].contains("tau");
}

bool RunConfig::is_dolbeault(const std::string& name) const {
  if (!has_complex(name)) fail("unknown complex '" + name + "'");
  const json& decl = complexes_[name];
  return require_field(decl, "kind", "complex '" + name + "'")
             .get<std::string>() == "dolbeault";
}

FlatTorus RunConfig::torus(const std::string& name) const {
  if (!has_geometry(name)) fail("unknown geometry '" + name + "'");
  const json& decl = geometries_[name];
  if (decl.contains("tau"))
    fail("geometry '" + name +
         "': is a complex torus; only dolbeault complexes may use it");
  const Eigen::MatrixXd gram =
      parse_gram(require_field(decl, "gram", "geometry '" + name + "'"),
                 "geometry '" + name + "'");
  for (const auto& [key, value] : decl.items())
    if (key != "gram") fail("geometry '" + name + "': unknown field '" + key + "'");
  try {
    return FlatTorus(gram, name);
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

ComplexTorus RunConfig::complex_torus(const std::string& name) const {
  if (!has_geometry(name)) fail("unknown geometry '" + name + "'");
  const json& decl = geometries_[name];
  static const std::set<std::string> keys = {"tau", "area_scale"};
  for (const auto& [key, value] : decl.items())
    if (!keys.count(key))
      fail("geometry '" + name + "': unknown field '" + key + "'");
  const cplx tau = pair_complex(require_field(decl, "tau", "geometry '" + name + "'"),
                                "geometry '" + name + "'.tau");
  const double area = decl.contains("area_scale")
                          ? number_at(decl["area_scale"],
                                      "geometry '" + name + "'.area_scale")
                          : 1.0;
  try {
    return ComplexTorus(tau, area);
  } catch (const std::exception& e) {
    fail("geometry '" + name + "': " + e.what());
  }
}

ComplexSpec RunConfig::complex_spec(const std::string& name) const {
  if (!has_complex(name)) fail("unknown complex '" + name + "'");
  const json& decl = complexes_[name];
  const std::string where = "complex '" + name + "'";
  const std::string kind =
      require_field(decl, "kind", where).get<std::string>();
  const std::string geometry =
      require_field(decl, "geometry", where).get<std::string>();
  if (!has_geometry(geometry)) fail(where + ": unknown geometry '" + geometry + "'");
  if (is_complex_geometry(geometry))
    fail(where + ": kind '" + kind + "' needs a real geometry (Gram matrix), "
         "but '" + geometry + "' is a complex torus");
  const FlatTorus base = torus(geometry);
  const int n = base.n();
  const Character chi = decl.contains("character")
                            ? parse_character(decl["character"], n)
                            : Character(Eigen::VectorXd::Zero(n));
  try {
    if (kind == "de-rham") {
      static const std::set<std::string> keys = {"kind", "geometry",
                                                 "character", "flux"};
      for (const auto& [key, value] : decl.items())
        if (!keys.count(key)) fail(where + ": unknown field '" + key + "'");
      if (!decl.contains("flux"))
        return ComplexSpec::de_rham(base, chi, name);
      return ComplexSpec::de_rham(base, chi, parse_form(decl["flux"], n, 1),
                                  name);
    }
    if (kind == "superconnection") {
      static const std::set<std::string> keys = {"kind", "geometry",
                                                 "character", "r0", "r1",
                                                 "terms"};
      for (const auto& [key, value] : decl.items())
        if (!keys.count(key)) fail(where + ": unknown field '" + key + "'");
      const int r0 = require_field(decl, "r0", where).get<int>();
      const int r1 = require_field(decl, "r1", where).get<int>();
      if (r0 < 0 || r1 < 0 || r0 + r1 < 1)
        fail(where + ": need r0, r1 >= 0 with r0 + r1 >= 1");
      SuperconnectionData data{
          r0, r1, parse_form(require_field(decl, "terms", where), n, r0 + r1)};
      return ComplexSpec::superconnection(base, chi, std::move(data), name);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(where + ": " + e.what());
  }
  fail(where + ": unknown kind '" + kind +
       "' (expected de-rham, superconnection, or dolbeault)");
}

DolbeaultSpec RunConfig::dolbeault_spec(const std::string& name) const {
  if (!has_complex(name)) fail("unknown complex '" + name + "'");
  const json& decl = complexes_[name];
  const std::string where = "complex '" + name + "'";
  if (require_field(decl, "kind", where).get<std::string>() != "dolbeault")
    fail(where + ": not a dolbeault complex");
  static const std::set<std::string> keys = {"kind", "geometry", "character",
                                             "flux"};
  for (const auto& [key, value] : decl.items())
    if (!keys.count(key)) fail(where + ": unknown field '" + key + "'");
  const std::string geometry =
      require_field(decl, "geometry", where).get<std::string>();
  if (!has_geometry(geometry))
    fail(where + ": unknown geometry '" + geometry + "'");
  if (!is_complex_geometry(geometry))
    fail(where + ": dolbeault needs a complex-torus geometry (declared via "
         "'tau'), but '" + geometry + "' has a Gram matrix");
  DolbeaultSpec spec;
  spec.torus = complex_torus(geometry);
  spec.id = name;
  if (decl.contains("character")) {
    const json& uv = decl["character"];
    if (!uv.is_array() || uv.size() != 2)
      fail(where + ": dolbeault character must be [u, v]");
    spec.torus.u = number_at(uv[0], where + ".character");
    spec.torus.v = number_at(uv[1], where + ".character");
  }
  if (decl.contains("flux"))
    spec.flux = pair_complex(decl["flux"], where + ".flux");
  return spec;
}

MetricPath RunConfig::metric_path(const std::string& complex_name,
                                  const json& decl) const {
  if (!decl.is_object())
    fail("path: expected {family, params?}");
  static const std::set<std::string> keys = {"family", "params"};
  for (const auto& [key, value] : decl.items())
    if (!keys.count(key)) fail("path: unknown field '" + key + "'");
  const std::string family =
      require_field(decl, "family", "path").get<std::string>();
  Eigen::VectorXd params;
  if (decl.contains("params")) {
    const json& arr = decl["params"];
    if (!arr.is_array()) fail("path.params: expected an array");
    params.resize(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < params.size(); ++i)
      params(i) = number_at(arr[static_cast<std::size_t>(i)], "path.params");
  }
  const FlatTorus base =
      is_dolbeault(complex_name)
          ? dolbeault_spec(complex_name).torus.real_torus()
          : complex_spec(complex_name).torus();
  try {
    return MetricPath(base, MetricPath::parse_kind(family), params);
  } catch (const std::exception& e) {
    fail(std::string("path: ") + e.what());
  }
}

nlohmann::json zeta_to_json(const ZetaResult& z) {
  json out;
  out["grade"] = z.grade;
  out["method"] = z.method;
  out["zeta0"] = format_sig(z.zeta0);
  out["zeta_prime0"] = format_sig(z.zeta_prime0);
  out["log_det_prime"] = format_sig(z.log_det_prime);
  out["residue0"] = format_sig(z.residue0);
  out["err"] = format_sig(z.err);
  out["eigenvalue_count"] = z.eigenvalue_count;
  out["deficit"] = z.deficit;
  out["w_hi"] = format_sig(z.w_hi);
  out["fit_residual"] = format_sig(z.fit_residual);
  json exps = json::array(), coeffs = json::array();
  for (const double e : z.fit_exponents) exps.push_back(format_sig(e));
  for (const double c : z.fit_coeffs) coeffs.push_back(format_sig(c));
  out["fit_exponents"] = std::move(exps);
  out["fit_coeffs"] = std::move(coeffs);
  return out;
}

nlohmann::json torsion_to_json(const TorsionValue& t) {
  json out;
  out["log_tau"] = format_sig(t.log_tau);
  out["err"] = format_sig(t.err);
  out["acyclic"] = t.acyclic;
  out["b0"] = t.b0;
  out["b1"] = t.b1;
  out["basis_note"] = t.basis_note;
  out["grade0"] = zeta_to_json(t.grade0);
  out["grade1"] = zeta_to_json(t.grade1);
  return out;
}

nlohmann::json verdict_json(const SweepResult& sweep) {
  json out;
  out["suite"] = sweep.suite;
  out["spec"] = sweep.spec_id;
  out["samples"] = sweep.rows.size();
  out["max_deviation"] = format_sig(sweep.max_deviation);
  out["tolerance"] = format_sig(sweep.tolerance);
  out["pass"] = sweep.passed;
  out["individual_spread"] = format_sig(sweep.individual_spread);
  out["note"] = sweep.note;
  return out;
}

nlohmann::json partition_to_json(const PartitionLedger& ledger) {
  const auto map_json = [](const std::map<int, Rational>& m) {
    json out = json::object();
    for (const auto& [deg, exp] : m) out[std::to_string(deg)] = exp.str();
    return out;
  };
  json out;
  out["l"] = ledger.l;
  out["convention"] = ledger.convention;
  out["log_z"] = format_sig(ledger.log_z);
  out["lhs"] = map_json(ledger.lhs);
  out["rhs"] = map_json(ledger.rhs);
  out["discrepancy"] = map_json(ledger.discrepancy);
  out["balanced"] = ledger.balanced;
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "s,log_tau,err\n";
  for (const auto& row : sweep.rows)
    os << format_sig(row.s) << ',' << format_sig(row.log_tau) << ','
       << format_sig(row.err) << '\n';
  return os.str();
}

std::string heat_csv(const std::vector<HeatTraceSample>& samples) {
  std::ostringstream os;
  os << "t,tr0,tr1,trD0,trD1,str,tail_bound\n";
  for (const auto& s : samples)
    os << format_sig(s.t) << ',' << format_sig(s.tr0) << ','
       << format_sig(s.tr1) << ',' << format_sig(s.tr_d0) << ','
       << format_sig(s.tr_d1) << ',' << format_sig(s.str) << ','
       << format_sig(s.tail_bound) << '\n';
  return os.str();
}

}  // namespace torsionlab
