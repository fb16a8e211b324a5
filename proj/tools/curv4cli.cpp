#include <CLI11.hpp>

#include <iostream>

#include "curv4/common.hpp"
#include "curv4/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"curv4: curvature-radius, covering, and characteristic-form scenarios"};
  std::string config;
  curv4::ScenarioOptions opts;
  app.add_option("--config", config, "scenario config (JSON)")->required();
  app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", opts.threads, "worker threads")->capture_default_str();
  app.add_flag("--verbose", opts.verbose, "detailed progress on stderr");
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string summary = curv4::run_scenario(config, opts);
    std::cout << summary << "\n";
    return 0;
  } catch (const curv4::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const curv4::NumericDomainError& e) {
    std::cerr << "numerical-domain error: " << e.what() << "\n";
    return 3;
  }
}
