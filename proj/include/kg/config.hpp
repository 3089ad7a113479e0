#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kg {

/// Flat, human-editable experiment configuration. Every field has a
/// default; the effective per-experiment defaults are applied by
/// `config_defaults(experiment)` before user keys override them.
struct ExperimentConfig {
  std::string experiment = "counterexample";
  int dim = 1;
  int points = 64;
  double box_length = 30.0;
  double mass = 1.0;
  std::uint64_t seed = 20020901;
  int samples = 10000;
  std::vector<double> times;

  // measure
  std::string measure = "gaussian";  // gaussian | mapped | counterexample
  double d0 = 1.0;
  double d1 = 1.5;
  double r0 = 2.0;
  double map_gain = 2.0;  // tanh gain in units of 1/sigma of the base field

  // test function
  double psi_radius = 4.0;
  double psi_amp0 = 0.3;
  double psi_amp1 = 0.15;
  double psi_sharpness = 2.0;
  double psi_form_target = 0.0;  // if > 0, rescale so Q_inf(Psi,Psi) = target

  // room-corridor
  double room_width = 4.0;
  double corridor_width = 2.0;

  // gibbs limit
  std::vector<double> r_list{1.0, 0.5, 0.25, 0.125};

  // sobolev / gibbs
  double sobolev_s = -1.0;
  double sobolev_alpha = -1.0;
  double temperature = 1.0;

  // magnetic
  double potential_radius = 6.0;
  double potential_amplitude = 0.3;
  double cook_t_max = 60.0;
  double dt_factor = 0.2;

  std::string output_dir = "out";
  int workers = 0;
};

extern const std::vector<std::string> kExperimentNames;

/// Per-experiment defaults (grid sizes, times, test functions).
ExperimentConfig config_defaults(const std::string& experiment);

/// Parses `key = value` lines ('#' comments); keys override the experiment
/// defaults. Unknown keys or malformed values throw.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct Diagnostic {
  std::string field;
  std::string message;
};

/// Empty iff the configuration is runnable; each entry names the violated
/// field and constraint (window checks included).
std::vector<Diagnostic> validate(const ExperimentConfig& cfg);

/// Key-value echo of a config (round-trips through parse_config_text).
std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg);

}  // namespace kg
