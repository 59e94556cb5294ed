#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/config.hpp"
#include "casimir/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Casimir energy and force between lamellar dielectric gratings"};
  std::string config_path;
  std::string output;
  int threads = -1;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--output", output, "CSV output path (overrides the config)");
  app.add_option("--threads", threads, "worker threads, 0 for the OpenMP default")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--override", overrides, "dotted.key=value, repeatable");
  app.add_flag("--quiet", quiet, "suppress per-point progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    casimir::RunConfig config = casimir::load_config(config_path, overrides);
    if (!output.empty()) config.output = output;
    if (threads >= 0) config.threads = threads;
    const casimir::RunSummary summary = casimir::run(config, std::cout, quiet);
    if (!quiet) {
      std::cout << "wrote " << summary.rows << " rows to " << config.output.string();
      if (summary.flagged) std::cout << " (" << summary.flagged << " flagged)";
      std::cout << '\n';
    }
    return 0;
  } catch (const casimir::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return casimir::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
