#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "d2dcoop/cli.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw d2dcoop::ConfigError("bad sweep value '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic and Monte Carlo toolkit for cache-enabled D2D networks "
               "with opportunistic cooperative transmission"};
  app.require_subcommand(1);

  std::string config_path, out_path, sweep_key, values_csv;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config file")->required();
    sub->add_option("--out", out_path, "write CSV here instead of stdout");
  };
  add_common(app.add_subcommand("analyze", "closed-form report, no simulation"));
  add_common(app.add_subcommand("simulate", "Monte Carlo run with baselines"));
  add_common(app.add_subcommand("optimize", "per-cluster-size table and optimum"));
  add_common(app.add_subcommand("validate", "analytic-vs-simulation check matrix"));
  CLI::App* sweep = app.add_subcommand("sweep", "repeat simulate over one key");
  add_common(sweep);
  sweep->add_option("--sweep-key", sweep_key, "config key to vary")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const d2dcoop::SystemConfig cfg = d2dcoop::parse_config(config_path);

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw d2dcoop::ConfigError(out_path + ": cannot open for writing");
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    if (app.got_subcommand("analyze")) return d2dcoop::cmd_analyze(cfg, out);
    if (app.got_subcommand("simulate")) return d2dcoop::cmd_simulate(cfg, out);
    if (app.got_subcommand("optimize")) return d2dcoop::cmd_optimize(cfg, out);
    if (app.got_subcommand("validate")) return d2dcoop::cmd_validate(cfg, out);
    return d2dcoop::cmd_sweep(cfg, sweep_key, parse_values(values_csv), out);
  } catch (const d2dcoop::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return d2dcoop::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return d2dcoop::kExitConfigError;
  }
}
