// Copyright 2026 The zenolgt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zenolgt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace zenolgt {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ValidationError(field(key) + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ValidationError(field(key) + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
            throw ValidationError(field(key) + ": expected a non-negative integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ValidationError(field(key) + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ValidationError(field(key) + ": expected a string");
      }
      out = v.get<T>();
    } catch (const json::exception&) {
      throw ValidationError(field(key) + ": wrong type");
    }
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ValidationError(field(it.key()) + ": unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ModelSpec model_from_json(const json& j) {
  ObjectReader r(j, "model");
  ModelSpec m;
  std::string group = to_string(m.group);
  r.get("group", group);
  try {
    m.group = group_from_string(group);
  } catch (const std::exception&) {
    throw ValidationError("model.group: unknown group '" + group + "'");
  }
  r.get("n_matter", m.n_matter);
  r.get("J", m.J);
  r.get("f", m.f);
  r.get("mu", m.mu);
  r.get("lambda1", m.lambda1);
  r.get("lambda2", m.lambda2);
  if (r.has("lambda")) {
    if (r.has("lambda1") || r.has("lambda2"))
      throw ValidationError("model.lambda: give either lambda or lambda1/lambda2");
    double lam = 0.0;
    r.get("lambda", lam);
    m.lambda1 = m.lambda2 = lam;
  }
  r.finish();
  return m;
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Dps:
      return "dps";
    case Protocol::DpsCorrected:
      return "dps_corrected";
    case Protocol::Continuous:
      return "continuous";
    case Protocol::Liouvillian:
      return "liouvillian";
    case Protocol::MasterEq:
      return "master_eq";
  }
  return "unknown";
}

Protocol protocol_from_string(const std::string& name) {
  for (Protocol p : {Protocol::Dps, Protocol::DpsCorrected, Protocol::Continuous, Protocol::Liouvillian,
                     Protocol::MasterEq})
    if (to_string(p) == name) return p;
  throw ValidationError("protocol: unknown protocol '" + name + "'");
}

std::string to_string(JumpSampler s) {
  switch (s) {
    case JumpSampler::Auto:
      return "auto";
    case JumpSampler::Poisson:
      return "poisson";
    case JumpSampler::WaitingTime:
      return "waiting_time";
  }
  return "unknown";
}

JumpSampler sampler_from_string(const std::string& name) {
  for (JumpSampler s : {JumpSampler::Auto, JumpSampler::Poisson, JumpSampler::WaitingTime})
    if (to_string(s) == name) return s;
  throw ValidationError("continuous.sampler: unknown sampler '" + name + "'");
}

JumpConfig RunConfig::jump_config() const {
  JumpConfig j;
  j.spec = model;
  j.gamma = continuous.gamma;
  j.dt_int = continuous.dt_int;
  j.t_final = continuous.t_final;
  j.n_output = continuous.n_output;
  j.sampler = continuous.sampler;
  return j;
}

void RunConfig::validate() const {
  if (schema_version != kSchemaVersion)
    throw ValidationError("schema_version: unsupported version " + std::to_string(schema_version));
  model.validate();
  if (workers < 1) throw ValidationError("workers: must be at least 1");
  if (output_dir.empty()) throw ValidationError("output_dir: must not be empty");
  if (histogram_bins < 1) throw ValidationError("histogram_bins: must be positive");
  const bool trajectories = protocol == Protocol::Dps || protocol == Protocol::DpsCorrected ||
                            protocol == Protocol::Continuous;
  if (trajectories && n_trajectories < 1) throw ValidationError("n_trajectories: must be at least 1");
  if (filter_thresholds.empty()) throw ValidationError("filter_thresholds: at least one threshold required");
  for (double t : filter_thresholds)
    if (!(t > 0.0)) throw ValidationError("filter_thresholds: entries must be positive");
  switch (protocol) {
    case Protocol::Dps:
    case Protocol::DpsCorrected:
      schedule.validate();
      noise.validate();
      if (protocol == Protocol::DpsCorrected && model.group != Group::Z2)
        throw ValidationError("model.group: dps_corrected requires Z2");
      if (noise.p_err > 0.0 && model.group != Group::Z2)
        throw ValidationError("noise.p_err: the bit-flip channel is only supported for Z2");
      break;
    case Protocol::Continuous:
      jump_config().validate();
      break;
    case Protocol::Liouvillian:
      if (liouvillian.gamma_grid.empty()) throw ValidationError("liouvillian.gamma_grid: must not be empty");
      for (double g : liouvillian.gamma_grid)
        if (!(g >= 0.0)) throw ValidationError("liouvillian.gamma_grid: entries must be non-negative");
      [[fallthrough]];
    case Protocol::MasterEq:
      if (!(liouvillian.fidelity > 0.0 && liouvillian.fidelity <= 1.0))
        throw ValidationError("liouvillian.fidelity: must lie in (0, 1]");
      if (protocol == Protocol::MasterEq) {
        if (!(continuous.gamma >= 0.0)) throw ValidationError("continuous.gamma: must be non-negative");
        if (!(continuous.t_final > 0.0)) throw ValidationError("continuous.t_final: must be positive");
        if (continuous.n_output < 1) throw ValidationError("continuous.n_output: must be at least 1");
      }
      break;
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["protocol"] = to_string(c.protocol);
  j["model"] = {{"group", to_string(c.model.group)}, {"n_matter", c.model.n_matter}, {"J", c.model.J},
                {"f", c.model.f},       {"mu", c.model.mu},             {"lambda1", c.model.lambda1},
                {"lambda2", c.model.lambda2}};
  j["schedule"] = {{"dt", c.schedule.dt},
                   {"n_steps", c.schedule.n_steps},
                   {"measure_every", c.schedule.measure_every},
                   {"measure_enabled", c.schedule.measure_enabled},
                   {"correction_enabled", c.schedule.correction_enabled},
                   {"measure_probability", c.schedule.measure_probability},
                   {"stop_on_violation", c.schedule.stop_on_violation}};
  j["noise"] = {{"p_err", c.noise.p_err}, {"sigma", c.noise.sigma}};
  j["continuous"] = {{"gamma", c.continuous.gamma},
                     {"dt_int", c.continuous.dt_int},
                     {"t_final", c.continuous.t_final},
                     {"n_output", c.continuous.n_output},
                     {"sampler", to_string(c.continuous.sampler)}};
  j["liouvillian"] = {{"gamma_grid", c.liouvillian.gamma_grid},
                      {"fidelity", c.liouvillian.fidelity},
                      {"hilbert_cap", c.liouvillian.hilbert_cap}};
  j["filter_thresholds"] = c.filter_thresholds;
  j["histogram_bins"] = c.histogram_bins;
  j["n_trajectories"] = c.n_trajectories;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  j["write_trajectories"] = c.write_trajectories;
  return j;
}

RunConfig config_from_json(const json& j) {
  ObjectReader r(j, "");
  RunConfig c;
  if (!r.has("schema_version")) throw ValidationError("schema_version: required field missing");
  r.get("schema_version", c.schema_version);
  if (c.schema_version != kSchemaVersion)
    throw ValidationError("schema_version: unsupported version " + std::to_string(c.schema_version));
  if (!r.has("protocol")) throw ValidationError("protocol: required field missing");
  std::string protocol;
  r.get("protocol", protocol);
  c.protocol = protocol_from_string(protocol);
  const json* model = r.child("model");
  if (!model) throw ValidationError("model: required field missing");
  c.model = model_from_json(*model);

  if (const json* s = r.child("schedule")) {
    ObjectReader sr(*s, "schedule");
    sr.get("dt", c.schedule.dt);
    sr.get("n_steps", c.schedule.n_steps);
    if (sr.has("t_final")) {
      if (sr.has("n_steps")) throw ValidationError("schedule.t_final: give either n_steps or t_final");
      double t = 0.0;
      sr.get("t_final", t);
      c.schedule.n_steps = static_cast<int>(std::llround(t / c.schedule.dt));
    }
    sr.get("measure_every", c.schedule.measure_every);
    sr.get("measure_enabled", c.schedule.measure_enabled);
    sr.get("correction_enabled", c.schedule.correction_enabled);
    sr.get("measure_probability", c.schedule.measure_probability);
    sr.get("stop_on_violation", c.schedule.stop_on_violation);
    sr.finish();
  }
  if (const json* s = r.child("noise")) {
    ObjectReader nr(*s, "noise");
    nr.get("p_err", c.noise.p_err);
    nr.get("sigma", c.noise.sigma);
    if (nr.has("fidelity")) {
      if (nr.has("sigma")) throw ValidationError("noise.fidelity: give either sigma or fidelity");
      double f = 1.0;
      nr.get("fidelity", f);
      c.noise.sigma = NoiseSpec::sigma_for_fidelity(f);
    }
    nr.finish();
  }
  if (const json* s = r.child("continuous")) {
    ObjectReader cr(*s, "continuous");
    cr.get("gamma", c.continuous.gamma);
    cr.get("dt_int", c.continuous.dt_int);
    cr.get("t_final", c.continuous.t_final);
    cr.get("n_output", c.continuous.n_output);
    std::string sampler = to_string(c.continuous.sampler);
    cr.get("sampler", sampler);
    c.continuous.sampler = sampler_from_string(sampler);
    cr.finish();
  }
  if (const json* s = r.child("liouvillian")) {
    ObjectReader lr(*s, "liouvillian");
    if (const json* g = lr.child("gamma_grid")) {
      if (g->is_array()) {
        for (const auto& v : *g) {
          if (!v.is_number()) throw ValidationError("liouvillian.gamma_grid: entries must be numbers");
          c.liouvillian.gamma_grid.push_back(v.get<double>());
        }
      } else if (g->is_object()) {
        ObjectReader gr(*g, "liouvillian.gamma_grid");
        double lo = 0.0;
        double hi = 0.0;
        int points = 0;
        gr.get("min", lo);
        gr.get("max", hi);
        gr.get("points", points);
        gr.finish();
        c.liouvillian.gamma_grid = log_grid(lo, hi, points);
      } else {
        throw ValidationError("liouvillian.gamma_grid: expected a list or {min, max, points}");
      }
    }
    lr.get("fidelity", c.liouvillian.fidelity);
    lr.get("hilbert_cap", c.liouvillian.hilbert_cap);
    lr.finish();
  }
  if (const json* t = r.child("filter_thresholds")) {
    if (!t->is_array()) throw ValidationError("filter_thresholds: expected a list");
    c.filter_thresholds.clear();
    for (const auto& v : *t) {
      if (!v.is_number()) throw ValidationError("filter_thresholds: entries must be numbers");
      c.filter_thresholds.push_back(v.get<double>());
    }
  }
  r.get("histogram_bins", c.histogram_bins);
  r.get("n_trajectories", c.n_trajectories);
  r.get("master_seed", c.master_seed);
  r.get("output_dir", c.output_dir);
  r.get("workers", c.workers);
  r.get("write_trajectories", c.write_trajectories);
  r.finish();
  if (c.protocol == Protocol::DpsCorrected) c.schedule.correction_enabled = true;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace zenolgt
