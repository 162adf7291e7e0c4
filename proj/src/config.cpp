#include "boson_kinetics/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "boson_kinetics/errors.hpp"
#include "json.hpp"

namespace boson_kinetics {

using nlohmann::json;

LatticeParams RunConfig::lattice() const {
  LatticeParams p;
  p.L = L;
  p.J = 1.0;
  p.omega0 = 0.0;
  p.boundary = boundary;
  return p;
}

ReservoirParams RunConfig::reservoir() const {
  return ReservoirParams{chi_over_J, omega0_drive_over_J, delta_over_J, kappa_over_J};
}

EvolveOptions RunConfig::evolve_options() const {
  EvolveOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  return o;
}

SteadyStateOptions RunConfig::steady_options() const {
  SteadyStateOptions o;
  o.evolve = evolve_options();
  o.residual_tol = residual_tol;
  o.tau_max = tau_max;
  o.polish = polish;
  return o;
}

const std::vector<std::string>& sweep_axis_names() {
  static const std::vector<std::string> names{"delta_over_J", "kappa_over_J",       "chi_over_J", "omega0_drive_over_J",
                                              "N",            "density",            "L"};
  return names;
}

const std::vector<std::string>& sweep_metric_names() {
  static const std::vector<std::string> names{"kl", "kl_be", "R", "delta_n", "fitted_beta"};
  return names;
}

void set_parameter(RunConfig& c, const std::string& name, double value) {
  if (name == "delta_over_J") c.delta_over_J = value;
  else if (name == "kappa_over_J") c.kappa_over_J = value;
  else if (name == "chi_over_J") c.chi_over_J = value;
  else if (name == "omega0_drive_over_J") c.omega0_drive_over_J = value;
  else if (name == "N") c.N = value;
  else if (name == "density") c.N = value * static_cast<double>(c.L);
  else if (name == "L") {
    if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError("sweep axis L: values must be positive integers");
    c.L = static_cast<std::size_t>(value);
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
}

double get_parameter(const RunConfig& c, const std::string& name) {
  if (name == "delta_over_J") return c.delta_over_J;
  if (name == "kappa_over_J") return c.kappa_over_J;
  if (name == "chi_over_J") return c.chi_over_J;
  if (name == "omega0_drive_over_J") return c.omega0_drive_over_J;
  if (name == "N") return c.N;
  if (name == "density") return c.N / static_cast<double>(c.L);
  if (name == "L") return static_cast<double>(c.L);
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

namespace {

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_or_root() + ": expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& item : node_.items())
      if (!known.count(item.key())) throw ConfigError("unknown field '" + child(item.key()) + "'");
  }

  bool has(const char* key) const { return node_.contains(key); }
  Reader object(const char* key) const { return Reader(node_.at(key), child(key)); }

  void number(const char* key, double& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(child(key) + ": expected a number");
    out = v.get<double>();
  }

  void integer(const char* key, std::size_t& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key) + ": expected an integer");
    const auto value = v.get<long long>();
    if (value < 0) throw ConfigError(child(key) + ": must be >= 1");
    out = static_cast<std::size_t>(value);
  }

  void integer(const char* key, int& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key) + ": expected an integer");
    out = v.get<int>();
  }

  void boolean(const char* key, bool& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(child(key) + ": expected a boolean");
    out = v.get<bool>();
  }

  void string(const char* key, std::string& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(child(key) + ": expected a string");
    out = v.get<std::string>();
  }

  void numbers(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(child(key) + ": expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(child(key) + "[" + std::to_string(i) + "]: expected a number");
      out.push_back(v[i].get<double>());
    }
  }

  void strings(const char* key, std::vector<std::string>& out) const {
    if (!has(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(child(key) + ": expected an array of strings");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw ConfigError(child(key) + "[" + std::to_string(i) + "]: expected a string");
      out.push_back(v[i].get<std::string>());
    }
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }
  const json& node_;
  std::string path_;
};

SweepAxis read_axis(const Reader& r) {
  r.allow({"name", "values"});
  SweepAxis axis;
  r.string("name", axis.name);
  r.numbers("values", axis.values);
  return axis;
}

json axis_json(const SweepAxis& a) { return json{{"name", a.name}, {"values", a.values}}; }

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const RunConfig& c) {
  if (c.L < 1) throw ConfigError("lattice.L: must be >= 1 (L >= 1)");
  if (!finite(c.N) || !(c.N > 0.0)) throw ConfigError("particles.N: must be finite and > 0");
  if (!finite(c.chi_over_J) || c.chi_over_J < 0.0) throw ConfigError("reservoir.chi_over_J: must be finite and >= 0");
  if (!finite(c.omega0_drive_over_J) || c.omega0_drive_over_J < 0.0)
    throw ConfigError("reservoir.omega0_drive_over_J: must be finite and >= 0");
  if (!finite(c.delta_over_J)) throw ConfigError("reservoir.delta_over_J: must be finite");
  if (!finite(c.kappa_over_J) || !(c.kappa_over_J > 0.0))
    throw ConfigError("reservoir.kappa_over_J: must be finite and > 0");
  if (!finite(c.tau_max) || !(c.tau_max > 0.0)) throw ConfigError("evolution.tau_max: must be > 0");
  if (!finite(c.rel_tol) || !(c.rel_tol > 0.0)) throw ConfigError("evolution.rel_tol: must be > 0");
  if (!finite(c.abs_tol) || !(c.abs_tol > 0.0)) throw ConfigError("evolution.abs_tol: must be > 0");
  if (!finite(c.residual_tol) || !(c.residual_tol > 0.0)) throw ConfigError("evolution.residual_tol: must be > 0");
  for (std::size_t i = 0; i < c.snapshot_taus.size(); ++i) {
    if (!finite(c.snapshot_taus[i]) || c.snapshot_taus[i] < 0.0)
      throw ConfigError("evolution.snapshot_taus[" + std::to_string(i) + "]: must be finite and >= 0");
    if (i > 0 && !(c.snapshot_taus[i] > c.snapshot_taus[i - 1]))
      throw ConfigError("evolution.snapshot_taus: must be strictly increasing");
  }
  if (c.threads < 1) throw ConfigError("threads: must be >= 1");
  if (c.sweep) {
    const auto& names = sweep_axis_names();
    auto check_axis = [&](const SweepAxis& a, const std::string& path) {
      if (std::find(names.begin(), names.end(), a.name) == names.end())
        throw ConfigError(path + ".name: unknown parameter '" + a.name + "'");
      if (a.values.empty()) throw ConfigError(path + ".values: axis must be non-empty");
      for (double v : a.values)
        if (!finite(v)) throw ConfigError(path + ".values: must be finite");
    };
    check_axis(c.sweep->axis1, "sweep.axis1");
    if (c.sweep->axis2) {
      check_axis(*c.sweep->axis2, "sweep.axis2");
      if (c.sweep->axis2->name == c.sweep->axis1.name) throw ConfigError("sweep.axis2.name: duplicates axis1");
    }
    const auto& metrics = sweep_metric_names();
    if (c.sweep->metrics.empty()) throw ConfigError("sweep.metrics: must be non-empty");
    for (const auto& m : c.sweep->metrics)
      if (std::find(metrics.begin(), metrics.end(), m) == metrics.end())
        throw ConfigError("sweep.metrics: unknown metric '" + m + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  const Reader root(doc, "");
  root.allow({"lattice", "particles", "reservoir", "gamma_mode", "evolution", "outputs", "threads", "sweep"});

  if (root.has("lattice")) {
    const auto r = root.object("lattice");
    r.allow({"L", "boundary"});
    r.integer("L", c.L);
    std::string boundary = "open";
    r.string("boundary", boundary);
    if (boundary == "open") c.boundary = Boundary::Open;
    else if (boundary == "periodic") c.boundary = Boundary::Periodic;
    else throw ConfigError("lattice.boundary: expected \"open\" or \"periodic\"");
  }
  if (root.has("particles")) {
    const auto r = root.object("particles");
    r.allow({"N"});
    r.number("N", c.N);
  }
  if (root.has("reservoir")) {
    const auto r = root.object("reservoir");
    r.allow({"chi_over_J", "omega0_drive_over_J", "delta_over_J", "kappa_over_J"});
    r.number("chi_over_J", c.chi_over_J);
    r.number("omega0_drive_over_J", c.omega0_drive_over_J);
    r.number("delta_over_J", c.delta_over_J);
    r.number("kappa_over_J", c.kappa_over_J);
  }
  if (root.has("gamma_mode")) {
    std::string mode;
    root.string("gamma_mode", mode);
    if (mode == "site_resolved") c.gamma_mode = GammaMode::SiteResolved;
    else if (mode == "uniform") c.gamma_mode = GammaMode::Uniform;
    else throw ConfigError("gamma_mode: expected \"site_resolved\" or \"uniform\"");
  }
  if (root.has("evolution")) {
    const auto r = root.object("evolution");
    r.allow({"tau_max", "rel_tol", "abs_tol", "residual_tol", "snapshot_taus", "polish"});
    r.number("tau_max", c.tau_max);
    r.number("rel_tol", c.rel_tol);
    r.number("abs_tol", c.abs_tol);
    r.number("residual_tol", c.residual_tol);
    r.numbers("snapshot_taus", c.snapshot_taus);
    r.boolean("polish", c.polish);
  }
  if (root.has("outputs")) {
    const auto r = root.object("outputs");
    r.allow({"directory", "write_report"});
    r.string("directory", c.output_directory);
    r.boolean("write_report", c.write_report);
  }
  root.integer("threads", c.threads);
  if (root.has("sweep")) {
    const auto r = root.object("sweep");
    r.allow({"axis1", "axis2", "metrics"});
    SweepSpec spec;
    if (!r.has("axis1")) throw ConfigError("sweep.axis1: required");
    spec.axis1 = read_axis(r.object("axis1"));
    if (r.has("axis2")) spec.axis2 = read_axis(r.object("axis2"));
    r.strings("metrics", spec.metrics);
    c.sweep = std::move(spec);
  }
  validate(c);
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json doc;
  doc["lattice"] = {{"L", c.L}, {"boundary", c.boundary == Boundary::Open ? "open" : "periodic"}};
  doc["particles"] = {{"N", c.N}};
  doc["reservoir"] = {{"chi_over_J", c.chi_over_J},
                      {"omega0_drive_over_J", c.omega0_drive_over_J},
                      {"delta_over_J", c.delta_over_J},
                      {"kappa_over_J", c.kappa_over_J}};
  doc["gamma_mode"] = c.gamma_mode == GammaMode::SiteResolved ? "site_resolved" : "uniform";
  doc["evolution"] = {{"tau_max", c.tau_max},           {"rel_tol", c.rel_tol},
                      {"abs_tol", c.abs_tol},           {"residual_tol", c.residual_tol},
                      {"snapshot_taus", c.snapshot_taus}, {"polish", c.polish}};
  doc["outputs"] = {{"directory", c.output_directory}, {"write_report", c.write_report}};
  doc["threads"] = c.threads;
  if (c.sweep) {
    json s;
    s["axis1"] = axis_json(c.sweep->axis1);
    if (c.sweep->axis2) s["axis2"] = axis_json(*c.sweep->axis2);
    s["metrics"] = c.sweep->metrics;
    doc["sweep"] = std::move(s);
  }
  return doc.dump(2) + "\n";
}

}  // namespace boson_kinetics
