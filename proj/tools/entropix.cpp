// entropix: run entropy-aware decoders against the synthetic oracle.
//
//   entropix generate <config> [--out DIR]
//   entropix sweep <config> <param> <v1,v2,...> [--out DIR]
//   entropix entropy-map <config> [--out DIR]
//
// Exit codes: 0 success, 2 malformed config or command line, 3 invalid
// parameters, 1 I/O failure. ENTROPIX_SEED overrides the config seed.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "entropix/harness/artifacts.hpp"
#include "entropix/harness/config.hpp"
#include "entropix/harness/run.hpp"

namespace {

using namespace entropix::harness;

constexpr int kExitParse = 2;
constexpr int kExitParams = 3;

RunConfig load(const std::string& path, const std::string& out_override) {
  RunConfig config = load_config(path);
  if (auto seed = seed_from_environment()) config.seed = *seed;
  if (!out_override.empty()) config.output_dir = out_override;
  return config;
}

void print_summary(const RunConfig& config, const RunOutput& output) {
  const RunReport& r = output.report;
  std::cout << "mode=" << to_string(r.mode) << " seed=" << r.seed
            << " tokens=" << r.tokens_emitted << " invocations=" << r.model_invocations
            << " entropy_mean=" << format_double(r.entropy_mean)
            << " wall_ms=" << format_double(r.wall_time_ms) << " -> "
            << config.output_dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-aware decoding harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string parameter;
  std::string values;

  auto* generate = app.add_subcommand("generate", "Run one decode and write all artifacts");
  generate->add_option("config", config_path, "Config file")->required();
  generate->add_option("--out", out_dir, "Output directory (overrides output_dir)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run once per parameter value, print CSV");
  sweep_cmd->add_option("config", config_path, "Config file")->required();
  sweep_cmd->add_option("parameter", parameter,
                        "One of T0, alpha, theta, K, cfg_scale, e, lambda, beta")
      ->required();
  sweep_cmd->add_option("values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out_dir, "Also write sweep_<param>.csv here");

  auto* emap = app.add_subcommand("entropy-map", "Write entropy.pgm and entropy.csv");
  emap->add_option("config", config_path, "Config file")->required();
  emap->add_option("--out", out_dir, "Output directory (overrides output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    RunConfig config = load(config_path, out_dir);
    if (*generate) {
      const RunOutput output = execute(config);
      write_run_artifacts(config.output_dir, config, output);
      print_summary(config, output);
    } else if (*emap) {
      const RunOutput output = execute(config);
      write_entropy_artifacts(config.output_dir, config, output);
      print_summary(config, output);
    } else {
      const auto rows = sweep(config, parameter, parse_value_list(values));
      write_sweep_csv(std::cout, parameter, rows);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(config.output_dir);
        std::ofstream file(config.output_dir / ("sweep_" + parameter + ".csv"),
                           std::ios::binary | std::ios::trunc);
        write_sweep_csv(file, parameter, rows);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ParamError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitParams;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
