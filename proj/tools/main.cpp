#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "spinmono/parallel.hpp"

int main(int argc, char** argv) {
  namespace cli = spinmono::cli;

  CLI::App app{"spinmono: simulate and verify attractive one-dimensional spin systems"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  unsigned workers = 0;

  app.add_option("command", command, "models | check | simulate | profile | verify | verify-remark2 | self-check")
      ->required()
      ->check(CLI::IsMember(cli::commands()));
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--replicas", replicas, "Override config replicas");
  app.add_option("--seed", seed, "Override config seed");
  app.add_option("--mode", mode, "Override config mode (coupled | exact | independent)");
  app.add_option("--workers", workers,
                 std::string("Worker threads (0: $") + spinmono::kWorkersEnv + " or hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kInvalidInput;
  }

  try {
    cli::ExperimentConfig config;
    if (!config_path.empty()) {
      config = cli::load_config(config_path);
    } else if (command != "models") {
      throw cli::ConfigError("--config", "required for '" + command + "'");
    }
    if (replicas) {
      if (*replicas < 1) throw cli::ConfigError("--replicas", "must be >= 1");
      config.replicas = *replicas;
    }
    if (seed) config.seed = *seed;
    if (mode) {
      try {
        config.mode = spinmono::parse_mode(*mode);
      } catch (const std::invalid_argument&) {
        throw cli::ConfigError("--mode", "expected coupled, exact or independent");
      }
    }
    cli::RunContext ctx{out_dir, workers, &std::cout};
    return cli::run(command, config, ctx);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: invalid " << e.what() << '\n';
    return cli::kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInvalidInput;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 4;
  }
}
