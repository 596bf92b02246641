// Command-line entry point. Commands are implemented in the runner header;
// this file only parses arguments and maps failures to exit codes:
// 0 success, 2 configuration error, 3 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metabalance/config.hpp"
#include "metabalance/errors.hpp"
#include "metabalance/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::optional<std::int64_t> seed;
  std::optional<std::int64_t> parallel;
  std::optional<std::int64_t> max_iterations;
};

metabalance::config::ExperimentConfig load_config(const std::string& path,
                                                  const CommonFlags& flags) {
  using metabalance::ConfigError;
  metabalance::config::ExperimentConfig cfg =
      metabalance::config::parse_config(metabalance::runner::read_file(path));
  if (flags.seed) {
    if (*flags.seed < 0) throw ConfigError("--seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*flags.seed);
  }
  if (flags.parallel) {
    if (*flags.parallel < 1) throw ConfigError("--parallel must be >= 1");
    cfg.balance.parallel_width = static_cast<int>(*flags.parallel);
  }
  if (flags.max_iterations) {
    if (*flags.max_iterations < 1) {
      throw ConfigError("--max-iterations must be >= 1");
    }
    cfg.balance.max_iterations = *flags.max_iterations;
  }
  return cfg;
}

int run_balance(const std::string& config_path, const CommonFlags& flags,
                const std::optional<std::string>& resume) {
  const metabalance::config::ExperimentConfig cfg =
      load_config(config_path, flags);
  const metabalance::runner::BalanceArtifacts artifacts =
      metabalance::runner::run_balance_command(
          cfg, resume, [](const std::string& msg) {
            std::cerr << msg << "\n";
          });
  std::cout << "best loss: "
            << metabalance::runner::format_double(artifacts.result.best_loss)
            << (artifacts.result.converged ? " (converged)" : "") << "\n"
            << "progression: " << artifacts.paths.progression.string() << "\n"
            << "best theta:  " << artifacts.paths.best_theta.string() << "\n"
            << "report:      " << artifacts.paths.report.string() << "\n"
            << "checkpoint:  " << artifacts.paths.checkpoint.string() << "\n";
  return kExitOk;
}

int run_evaluate(const std::string& config_path, const CommonFlags& flags,
                 const std::string& theta_path,
                 const std::optional<std::string>& csv_path) {
  const metabalance::config::ExperimentConfig cfg =
      load_config(config_path, flags);
  const metabalance::ParameterVector theta = metabalance::runner::parse_theta(
      metabalance::config::parameter_space(cfg),
      metabalance::runner::read_file(theta_path));
  const metabalance::runner::EvaluationReport report =
      metabalance::runner::run_evaluate_command(cfg, theta);
  std::cout << report.text;
  if (csv_path) {
    metabalance::runner::write_file_atomic(*csv_path, report.csv);
    std::cerr << "wrote " << *csv_path << "\n";
  }
  return kExitOk;
}

int run_report(const std::string& csv_path,
               const std::optional<std::string>& out_path) {
  const metabalance::runner::ProgressionSummary summary =
      metabalance::runner::aggregate_progression(
          metabalance::runner::read_file(csv_path));
  std::cerr << "trials: " << summary.trials << "\n"
            << "failed evaluations: " << summary.failures << "\n"
            << "best loss: "
            << metabalance::runner::format_double(summary.best_loss)
            << " at iteration " << summary.best_iteration << "\n";
  if (out_path) {
    metabalance::runner::write_file_atomic(*out_path, summary.csv);
    std::cerr << "wrote " << *out_path << "\n";
  } else {
    std::cout << summary.csv;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Meta-game balancing: search game parameters until the empirical "
      "response graph matches a declared target."};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  std::string theta_path;
  std::string progression_path;
  std::optional<std::string> resume;
  std::optional<std::string> csv_out;
  std::optional<std::string> report_out;

  CLI::App* balance_cmd =
      app.add_subcommand("balance", "Run the balancing loop for a config");
  balance_cmd->add_option("config", config_path, "experiment config file")
      ->required();
  balance_cmd->add_option("--seed", flags.seed, "override optimizer.seed");
  balance_cmd->add_option("--resume", resume, "checkpoint file to resume from");
  balance_cmd->add_option("--parallel", flags.parallel,
                          "override balance.parallel_width");
  balance_cmd->add_option("--max-iterations", flags.max_iterations,
                          "override balance.max_iterations");

  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "Evaluate one parameter vector and print its report");
  evaluate_cmd->add_option("config", config_path, "experiment config file")
      ->required();
  evaluate_cmd->add_option("--theta", theta_path, "parameter,value CSV file")
      ->required();
  evaluate_cmd->add_option("--csv", csv_out, "also write the report CSV here");
  evaluate_cmd->add_option("--seed", flags.seed, "override optimizer.seed");

  CLI::App* report_cmd = app.add_subcommand(
      "report", "Aggregate a progression CSV into plot-ready form");
  report_cmd->add_option("progression", progression_path,
                         "progression.csv from a balance run")
      ->required();
  report_cmd->add_option("--out", report_out,
                         "write the aggregated CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*balance_cmd) return run_balance(config_path, flags, resume);
    if (*evaluate_cmd) {
      return run_evaluate(config_path, flags, theta_path, csv_out);
    }
    return run_report(progression_path, report_out);
  } catch (const metabalance::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const metabalance::BoundsError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const metabalance::StructureError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
