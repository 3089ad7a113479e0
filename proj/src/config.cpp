#include "kg/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kg {

const std::vector<std::string> kExperimentNames = {
    "covariance-convergence", "clt",           "gibbs-limit",
    "room-corridor",          "decay",         "counterexample",
    "magnetic-decay",         "cook",          "theorem-a",
    "sobolev-norm"};

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt(xs[i]);
  }
  return s;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig config_defaults(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "covariance-convergence") {
    c.dim = 1;
    c.points = 512;
    c.box_length = 400.0;
    c.times = {25.0, 50.0, 100.0};
  } else if (experiment == "clt") {
    c.dim = 1;
    c.points = 1024;
    c.box_length = 400.0;
    c.times = {24.0, 48.0, 96.0, 192.0};
    c.samples = 10000;
    c.psi_radius = 4.0;
    c.psi_form_target = 1.5;
  } else if (experiment == "gibbs-limit") {
    c.dim = 1;
    c.points = 512;
    c.box_length = 40.0;
    c.d1 = 1.0;
    c.r0 = 1.0;
  } else if (experiment == "room-corridor") {
    c.dim = 2;
    c.points = 384;
    c.box_length = 180.0;
    c.times = {20.0, 40.0, 80.0};
    c.samples = 400;
    c.psi_radius = 5.0;
    c.psi_amp0 = 1.0;
    c.psi_amp1 = 0.5;
    c.d1 = 1.0;
  } else if (experiment == "decay") {
    c.dim = 1;
    c.points = 2048;
    c.box_length = 440.0;
    c.psi_radius = 2.0;
    c.psi_amp0 = 1.0;
    c.psi_amp1 = 0.5;
    for (double t = 20.0; t <= 200.0; t *= 1.22) c.times.push_back(t);
  } else if (experiment == "counterexample") {
    c.dim = 1;
    c.points = 64;
    c.box_length = 30.0;
    c.psi_radius = 3.0;
    c.psi_amp0 = 0.8;
    c.psi_amp1 = 0.4;
    c.psi_sharpness = 1.0;
  } else if (experiment == "magnetic-decay") {
    c.dim = 2;
    c.points = 192;
    c.box_length = 120.0;
    c.potential_radius = 3.5;
    c.psi_radius = 4.0;
    c.psi_amp0 = 1.0;
    c.psi_amp1 = 0.4;
    c.times = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
  } else if (experiment == "cook") {
    c.dim = 2;
    c.points = 256;
    c.box_length = 160.0;
    c.potential_radius = 6.0;
    c.psi_radius = 8.0;
    c.psi_amp0 = 0.35;
    c.psi_amp1 = 0.2;
    c.psi_sharpness = 3.0;
    c.times = {10.0, 20.0, 40.0};  // residual snapshot times
    c.cook_t_max = 60.0;
  } else if (experiment == "theorem-a") {
    c.dim = 2;
    c.points = 256;
    c.box_length = 160.0;
    c.potential_radius = 6.0;
    c.psi_radius = 8.0;
    c.psi_sharpness = 3.0;
    c.psi_form_target = 1.5;
    c.r0 = 4.0;
    c.d1 = 1.0;
    c.times = {60.0};
    c.samples = 2000;
    c.cook_t_max = 60.0;
  } else if (experiment == "sobolev-norm") {
    c.dim = 1;
    c.points = 512;
    c.box_length = 20.0;
  } else if (!experiment.empty()) {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  // first pass: find the experiment name so its defaults seed the rest
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  ExperimentConfig cfg = config_defaults(
      kv.count("experiment") ? kv["experiment"] : "counterexample");

  for (const auto& [key, val] : kv) {
    try {
      if (key == "experiment") continue;
      else if (key == "dim") cfg.dim = std::stoi(val);
      else if (key == "points") cfg.points = std::stoi(val);
      else if (key == "box_length") cfg.box_length = std::stod(val);
      else if (key == "mass") cfg.mass = std::stod(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "samples") cfg.samples = std::stoi(val);
      else if (key == "times") cfg.times = parse_list(val);
      else if (key == "measure") cfg.measure = val;
      else if (key == "d0") cfg.d0 = std::stod(val);
      else if (key == "d1") cfg.d1 = std::stod(val);
      else if (key == "r0") cfg.r0 = std::stod(val);
      else if (key == "map_gain") cfg.map_gain = std::stod(val);
      else if (key == "psi_radius") cfg.psi_radius = std::stod(val);
      else if (key == "psi_amp0") cfg.psi_amp0 = std::stod(val);
      else if (key == "psi_amp1") cfg.psi_amp1 = std::stod(val);
      else if (key == "psi_sharpness") cfg.psi_sharpness = std::stod(val);
      else if (key == "psi_form_target") cfg.psi_form_target = std::stod(val);
      else if (key == "room_width") cfg.room_width = std::stod(val);
      else if (key == "corridor_width") cfg.corridor_width = std::stod(val);
      else if (key == "r_list") cfg.r_list = parse_list(val);
      else if (key == "sobolev_s") cfg.sobolev_s = std::stod(val);
      else if (key == "sobolev_alpha") cfg.sobolev_alpha = std::stod(val);
      else if (key == "temperature") cfg.temperature = std::stod(val);
      else if (key == "potential_radius") cfg.potential_radius = std::stod(val);
      else if (key == "potential_amplitude")
        cfg.potential_amplitude = std::stod(val);
      else if (key == "cook_t_max") cfg.cook_t_max = std::stod(val);
      else if (key == "dt_factor") cfg.dt_factor = std::stod(val);
      else if (key == "output_dir") cfg.output_dir = val;
      else if (key == "workers") cfg.workers = std::stoi(val);
      else
        throw std::invalid_argument("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': bad value '" +
                                  val + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  auto bad = [&](const std::string& field, const std::string& msg) {
    out.push_back({field, msg});
  };

  bool known = false;
  for (const auto& n : kExperimentNames) known |= (n == cfg.experiment);
  if (!known) bad("experiment", "unknown experiment name");
  if (cfg.dim < 1 || cfg.dim > 3) bad("dim", "dim must be 1, 2 or 3");
  if (cfg.points < 8 || cfg.points % 2 != 0)
    bad("points", "points must be even and >= 8");
  if (!(cfg.box_length > 0.0)) bad("box_length", "box_length must be > 0");
  if (!(cfg.mass > 0.0)) bad("mass", "mass must be > 0");

  if (cfg.measure != "gaussian" && cfg.measure != "mapped" &&
      cfg.measure != "counterexample")
    bad("measure", "measure must be gaussian, mapped or counterexample");
  if (cfg.d0 < 0.0 || cfg.d1 < 0.0) bad("d0", "spectral weights must be >= 0");
  if (!(cfg.r0 > 0.0)) bad("r0", "correlation radius must be > 0");
  else if (cfg.measure != "counterexample" &&
           2.0 * cfg.r0 / std::sqrt(static_cast<double>(cfg.dim)) >
               cfg.box_length / 2)
    bad("r0", "covariance support exceeds the torus window");

  if (cfg.samples < 2) bad("samples", "need at least 2 samples");
  if ((cfg.experiment == "clt") && cfg.samples < 1000)
    bad("samples", "clt needs at least 1000 samples");
  if ((cfg.experiment == "room-corridor" || cfg.experiment == "theorem-a") &&
      cfg.samples < 100)
    bad("samples", "experiment needs at least 100 samples");

  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (cfg.times[i] < 0.0) bad("times", "times must be nonnegative");
    if (i > 0 && cfg.times[i] <= cfg.times[i - 1]) {
      bad("times", "times must be strictly increasing");
      break;
    }
  }

  if (!(cfg.psi_radius > 0.0) || cfg.psi_radius >= cfg.box_length / 2)
    bad("psi_radius", "need 0 < psi_radius < L/2");
  if (!(cfg.psi_sharpness > 0.0)) bad("psi_sharpness", "sharpness must be > 0");
  if (!(cfg.dt_factor > 0.0) || cfg.dt_factor > 0.5)
    bad("dt_factor", "dt_factor must lie in (0, 0.5]");
  if (cfg.workers < 0) bad("workers", "workers must be >= 0");
  if (cfg.output_dir.empty()) bad("output_dir", "output_dir must be set");
  if (!(cfg.temperature > 0.0)) bad("temperature", "temperature must be > 0");

  const double t_max = cfg.times.empty() ? 0.0 : cfg.times.back();
  const double half = cfg.box_length / 2;
  const bool magnetic = cfg.experiment == "magnetic-decay" ||
                        cfg.experiment == "cook" ||
                        cfg.experiment == "theorem-a";
  if (magnetic) {
    if (!(cfg.potential_radius > 0.0) ||
        cfg.potential_radius >= cfg.box_length / 4)
      bad("potential_radius", "need 0 < potential_radius < L/4");
    if (cfg.potential_amplitude < 0.0)
      bad("potential_amplitude", "amplitude must be >= 0");
    const double reach =
        std::max(t_max, cfg.experiment == "theorem-a" || cfg.experiment == "cook"
                            ? cfg.cook_t_max
                            : 0.0);
    if (reach + cfg.psi_radius + cfg.potential_radius >= half)
      bad("times", "window violated: t + psi_radius + potential_radius >= L/2");
  } else if (cfg.experiment == "clt" || cfg.experiment == "decay" ||
             cfg.experiment == "room-corridor") {
    if (t_max + cfg.psi_radius >= half)
      bad("times", "window violated: t + psi_radius >= L/2");
  } else if (cfg.experiment == "covariance-convergence") {
    if (2.0 * t_max + 50.0 + 2.0 * cfg.r0 > cfg.box_length)
      bad("times",
          "window violated: covariance kernel spread 2t + lags exceeds L");
  }

  if (cfg.experiment == "room-corridor") {
    if (cfg.room_width < 1.0) bad("room_width", "room width must be >= 1");
    if (!(cfg.corridor_width > 0.0))
      bad("corridor_width", "corridor width must be > 0");
    if (cfg.room_width + cfg.corridor_width >= cfg.box_length)
      bad("room_width", "layout period exceeds the box");
  }

  if (cfg.experiment == "decay" && cfg.dim == 3)
    bad("dim", "decay slope targets exist for dim 1 and 2 only");

  if (cfg.experiment == "gibbs-limit") {
    if (cfg.r_list.empty()) bad("r_list", "r_list must not be empty");
    for (std::size_t i = 0; i < cfg.r_list.size(); ++i) {
      if (!(cfg.r_list[i] > 0.0) || cfg.r_list[i] > 1.0)
        bad("r_list", "r values must lie in (0, 1]");
      if (i > 0 && cfg.r_list[i] >= cfg.r_list[i - 1]) {
        bad("r_list", "r_list must be strictly decreasing");
        break;
      }
    }
  }
  return out;
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> m;
  m["experiment"] = cfg.experiment;
  m["dim"] = std::to_string(cfg.dim);
  m["points"] = std::to_string(cfg.points);
  m["box_length"] = fmt(cfg.box_length);
  m["mass"] = fmt(cfg.mass);
  m["seed"] = std::to_string(cfg.seed);
  m["samples"] = std::to_string(cfg.samples);
  m["times"] = join(cfg.times);
  m["measure"] = cfg.measure;
  m["d0"] = fmt(cfg.d0);
  m["d1"] = fmt(cfg.d1);
  m["r0"] = fmt(cfg.r0);
  m["map_gain"] = fmt(cfg.map_gain);
  m["psi_radius"] = fmt(cfg.psi_radius);
  m["psi_amp0"] = fmt(cfg.psi_amp0);
  m["psi_amp1"] = fmt(cfg.psi_amp1);
  m["psi_sharpness"] = fmt(cfg.psi_sharpness);
  m["psi_form_target"] = fmt(cfg.psi_form_target);
  m["room_width"] = fmt(cfg.room_width);
  m["corridor_width"] = fmt(cfg.corridor_width);
  m["r_list"] = join(cfg.r_list);
  m["sobolev_s"] = fmt(cfg.sobolev_s);
  m["sobolev_alpha"] = fmt(cfg.sobolev_alpha);
  m["temperature"] = fmt(cfg.temperature);
  m["potential_radius"] = fmt(cfg.potential_radius);
  m["potential_amplitude"] = fmt(cfg.potential_amplitude);
  m["cook_t_max"] = fmt(cfg.cook_t_max);
  m["dt_factor"] = fmt(cfg.dt_factor);
  m["output_dir"] = cfg.output_dir;
  m["workers"] = std::to_string(cfg.workers);
  return m;
}

}  // namespace kg
