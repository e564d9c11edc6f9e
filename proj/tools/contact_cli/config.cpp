#include "contact_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace contact::cli {

using nlohmann::json;

const std::map<std::string, std::map<std::string, double>>& model_registry() {
  static const std::map<std::string, std::map<std::string, double>> registry{
      {"kepler", {{"mu", 1.0}, {"alpha", 0.01}, {"omega", M_PI}, {"eps_radius", 1e-10}}},
      {"quadratic_oscillator", {{"gamma", 1.0}, {"C", 18.0}}},
      {"linear_oscillator", {{"omega0", 1.0}, {"damping", 0.2}}},
  };
  return registry;
}

RunConfig default_config(const std::string& model) {
  const auto& reg = model_registry();
  const auto it = reg.find(model);
  if (it == reg.end()) throw ConfigError("model: unknown model '" + model + "'");
  RunConfig cfg;
  cfg.model = model;
  cfg.params = it->second;
  if (model == "kepler") {
    // Circular orbit for mu = 1.
    cfg.q = {1.0, 0.0};
    cfg.p = {0.0, 1.0};
  } else if (model == "quadratic_oscillator") {
    cfg.q = {0.0};
    cfg.p = {-1.0};
    cfg.s = -7.0;
  } else {
    cfg.q = {1.0};
    cfg.p = {0.0};
  }
  return cfg;
}

std::unique_ptr<SeparableContactModel> make_model(const RunConfig& cfg) {
  const auto& k = cfg.params;
  try {
    if (cfg.model == "kepler") {
      return std::make_unique<PerturbedKepler>(PerturbedKepler::Params{
          k.at("mu"), k.at("alpha"), k.at("omega"), k.at("eps_radius")});
    }
    if (cfg.model == "quadratic_oscillator") {
      return std::make_unique<QuadraticActionOscillator>(
          QuadraticActionOscillator::Params{k.at("gamma"), k.at("C")});
    }
    if (cfg.model == "linear_oscillator") {
      return std::make_unique<LinearDampedOscillator>(
          LinearDampedOscillator::Params{k.at("omega0"), k.at("damping")});
    }
  } catch (const std::out_of_range&) {
    throw ConfigError("model.params: missing parameter for " + cfg.model);
  } catch (const ContactError& e) {
    throw ConfigError(std::string("model.params: ") + e.what());
  }
  throw ConfigError("model: unknown model '" + cfg.model + "'");
}

StepMethod make_method(const RunConfig& cfg) {
  auto m = parse_method(cfg.method);
  if (!m) throw ConfigError("method: unknown method '" + cfg.method + "'");
  m->b_map_compat = cfg.b_map_compat;
  m->cvi_explicit_action = cfg.cvi_explicit_action;
  return *m;
}

ContactState initial_state(const RunConfig& cfg) {
  return ContactState(Eigen::Map<const Vector>(cfg.q.data(), cfg.q.size()),
                      Eigen::Map<const Vector>(cfg.p.data(), cfg.p.size()), cfg.s,
                      cfg.t0);
}

void validate(const RunConfig& cfg) {
  const auto& reg = model_registry();
  const auto it = reg.find(cfg.model);
  if (it == reg.end()) throw ConfigError("model: unknown model '" + cfg.model + "'");
  for (const auto& [key, value] : cfg.params) {
    if (!it->second.count(key)) {
      throw ConfigError("model.params." + key + ": not a parameter of " + cfg.model);
    }
    if (!std::isfinite(value)) throw ConfigError("model.params." + key + ": not finite");
  }
  make_method(cfg);
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau)) throw ConfigError("tau: must be > 0");
  if (!(cfg.t_end > cfg.t0) || !std::isfinite(cfg.t_end)) {
    throw ConfigError("t_end: must be greater than initial.t");
  }
  if (cfg.sample_every < 1) throw ConfigError("output.sample_every: must be >= 1");
  if (cfg.format != "csv" && cfg.format != "jsonl") {
    throw ConfigError("output.format: expected csv or jsonl, got '" + cfg.format + "'");
  }
  const auto model = make_model(cfg);
  const auto n = static_cast<std::size_t>(model->dim());
  if (cfg.q.size() != n) {
    throw ConfigError("initial.q: expected " + std::to_string(n) + " components");
  }
  if (cfg.p.size() != n) {
    throw ConfigError("initial.p: expected " + std::to_string(n) + " components");
  }
  if (!initial_state(cfg).is_finite()) throw ConfigError("initial: values must be finite");
}

std::string to_json(const RunConfig& cfg) {
  json initial{{"q", cfg.q}, {"p", cfg.p}, {"s", cfg.s}, {"t", cfg.t0}};
  if (cfg.seed) initial["seed"] = *cfg.seed;
  const json doc{
      {"model", {{"id", cfg.model}, {"params", cfg.params}}},
      {"method",
       {{"id", cfg.method},
        {"b_map_compat", cfg.b_map_compat},
        {"cvi_explicit_action", cfg.cvi_explicit_action}}},
      {"tau", cfg.tau},
      {"t_end", cfg.t_end},
      {"initial", initial},
      {"output",
       {{"path", cfg.output}, {"format", cfg.format}, {"sample_every", cfg.sample_every}}},
  };
  return doc.dump(2) + "\n";
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    throw ConfigError((where.empty() ? "config" : where) + ": expected an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError((where.empty() ? "" : where + ".") + key + ": unknown key");
    }
  }
}

template <typename T>
T field(const json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  reject_unknown(doc, "", {"model", "method", "tau", "t_end", "initial", "output"});

  std::string model_id = "quadratic_oscillator";
  json params = json::object();
  if (doc.contains("model")) {
    const json& m = doc["model"];
    if (m.is_string()) {
      model_id = m.get<std::string>();
    } else {
      reject_unknown(m, "model", {"id", "params"});
      model_id = field<std::string>(m, "id", "model.id", model_id);
      if (m.contains("params")) params = m["params"];
    }
  }
  RunConfig cfg = default_config(model_id);
  if (!params.is_object()) throw ConfigError("model.params: expected an object");
  for (const auto& [key, value] : params.items()) {
    if (!cfg.params.count(key)) {
      throw ConfigError("model.params." + key + ": not a parameter of " + model_id);
    }
    cfg.params[key] = field<double>(params, key, "model.params." + key, 0.0);
  }

  if (doc.contains("method")) {
    const json& m = doc["method"];
    if (m.is_string()) {
      cfg.method = m.get<std::string>();
    } else {
      reject_unknown(m, "method", {"id", "b_map_compat", "cvi_explicit_action"});
      cfg.method = field<std::string>(m, "id", "method.id", cfg.method);
      cfg.b_map_compat = field<bool>(m, "b_map_compat", "method.b_map_compat", false);
      cfg.cvi_explicit_action =
          field<bool>(m, "cvi_explicit_action", "method.cvi_explicit_action", false);
    }
  }
  cfg.tau = field<double>(doc, "tau", "tau", cfg.tau);
  cfg.t_end = field<double>(doc, "t_end", "t_end", cfg.t_end);
  if (doc.contains("initial")) {
    const json& init = doc["initial"];
    reject_unknown(init, "initial", {"q", "p", "s", "t", "seed"});
    cfg.q = field<std::vector<double>>(init, "q", "initial.q", cfg.q);
    cfg.p = field<std::vector<double>>(init, "p", "initial.p", cfg.p);
    cfg.s = field<double>(init, "s", "initial.s", cfg.s);
    cfg.t0 = field<double>(init, "t", "initial.t", cfg.t0);
    if (init.contains("seed")) {
      cfg.seed = field<std::uint64_t>(init, "seed", "initial.seed", 0);
    }
  }
  if (doc.contains("output")) {
    const json& out = doc["output"];
    reject_unknown(out, "output", {"path", "format", "sample_every"});
    cfg.output = field<std::string>(out, "path", "output.path", cfg.output);
    cfg.format = field<std::string>(out, "format", "output.format", cfg.format);
    cfg.sample_every =
        field<std::uint64_t>(out, "sample_every", "output.sample_every", cfg.sample_every);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

}  // namespace contact::cli
