#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contact/contact.hpp"

namespace contact::cli {

// Bad user input; the message names the offending field. Maps to exit 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "quadratic_oscillator";
  // Full parameter set of the model (defaults filled in).
  std::map<std::string, double> params;
  std::string method = "chi2";
  bool b_map_compat = false;
  bool cvi_explicit_action = false;
  double tau = 0.1;
  double t_end = 10.0;
  std::vector<double> q;
  std::vector<double> p;
  double s = 0.0;
  double t0 = 0.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t sample_every = 1;
  std::string output;  // empty: standard output
  std::string format = "csv";

  bool operator==(const RunConfig&) const = default;
};

// Registered model ids with their parameter keys and defaults.
const std::map<std::string, std::map<std::string, double>>& model_registry();

// Defaults for a model id, including a model-appropriate initial state.
RunConfig default_config(const std::string& model);

std::unique_ptr<SeparableContactModel> make_model(const RunConfig& cfg);
StepMethod make_method(const RunConfig& cfg);
ContactState initial_state(const RunConfig& cfg);

// Checks invariants and ids; throws ConfigError.
void validate(const RunConfig& cfg);

// JSON config file format. Unknown keys are errors.
std::string to_json(const RunConfig& cfg);
RunConfig parse_json(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace contact::cli
