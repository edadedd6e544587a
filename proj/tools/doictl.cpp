// doictl: run experiment configs and turn reports into plot tables.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "doikit/error.hpp"
#include "doikit/experiment.hpp"

namespace cli = doikit::cli;

namespace {

int exit_for(const doikit::Error& e) {
  switch (e.code()) {
    case doikit::Errc::ConfigInvalid:
    case doikit::Errc::ParseError:
      return cli::kExitConfig;
    case doikit::Errc::IoError:
      return cli::kExitIo;
    default:
      return cli::kExitAssertion;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doictl - double operator integral experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "Execute an experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory (overrides config)");

  std::string report_path, csv_path;
  auto* plot = app.add_subcommand("plotdata", "Extract plot series from a report");
  plot->add_option("report", report_path, "report.json from a run")->required();
  plot->add_option("csv", csv_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  try {
    if (*run) {
      const cli::ExperimentConfig config = cli::load_config(config_path);
      cli::RunOptions options;
      options.seed = seed;
      options.jobs = jobs;
      if (out_dir) options.output = *out_dir;
      const cli::RunManifest manifest = cli::run(config, options);
      for (const auto& s : manifest.suites) {
        std::cout << s.suite << ": " << (s.passed ? "pass" : "FAIL") << " (" << s.trials << " trials, "
                  << s.checks - s.failed_checks << "/" << s.checks << " checks";
        if (s.max_defect) std::cout << ", max defect " << cli::format_double(*s.max_defect);
        std::cout << ")\n";
      }
      return manifest.exit_code();
    }
    cli::emit_plotdata(report_path, csv_path);
    return 0;
  } catch (const doikit::Error& e) {
    std::cerr << "doictl: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "doictl: " << e.what() << "\n";
    return cli::kExitAssertion;
  }
}
