// Experiment runner: parses a flat key=value config, dispatches the named
// experiment, writes CSV artifacts plus manifest.json, and reports
// assertion outcomes. Exit codes: 0 pass, 1 assertion failure, 2 invalid
// config.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "kg/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kglab - Klein-Gordon random-field laboratory"};

  std::string config_path;
  std::string output_override;
  std::int64_t seed_override = -1;
  int workers = -1;
  bool validate_only = false;
  int verbosity = 0;

  app.add_option("-c,--config", config_path, "experiment config file")
      ->required();
  app.add_option("-o,--output", output_override, "output directory override");
  app.add_option("-s,--seed", seed_override, "seed override");
  app.add_option("-w,--workers", workers, "worker-count hint");
  app.add_flag("--validate", validate_only, "validate the config and exit");
  app.add_flag("-v,--verbose", verbosity, "print per-assertion detail");

  CLI11_PARSE(app, argc, argv);

  kg::ExperimentConfig cfg;
  try {
    cfg = kg::load_config(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (!output_override.empty()) cfg.output_dir = output_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (workers >= 0) cfg.workers = workers;

  const auto diags = kg::validate(cfg);
  if (validate_only) {
    for (const auto& d : diags)
      std::printf("%s: %s\n", d.field.c_str(), d.message.c_str());
    std::printf("%s\n", diags.empty() ? "config ok" : "config invalid");
    return diags.empty() ? 0 : 2;
  }
  if (!diags.empty()) {
    for (const auto& d : diags)
      std::fprintf(stderr, "invalid config: %s: %s\n", d.field.c_str(),
                   d.message.c_str());
    return 2;
  }

  try {
    const auto manifest = kg::run_experiment(cfg);
    if (verbosity > 0) {
      for (const auto& a : manifest.assertions)
        std::printf("  [%s] %s (value %.6g, threshold %.6g)\n",
                    a.passed ? "pass" : "FAIL", a.name.c_str(), a.value,
                    a.threshold);
      for (const auto& art : manifest.artifacts)
        std::printf("  wrote %s (%s)\n", art.path.c_str(),
                    art.digest.c_str());
    }
    std::printf("%s: %s (%.1fs, %lld steps) -> %s/manifest.json\n",
                manifest.experiment.c_str(),
                manifest.passed ? "PASS" : "FAIL", manifest.wall_seconds,
                static_cast<long long>(manifest.steps),
                cfg.output_dir.c_str());
    return manifest.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
