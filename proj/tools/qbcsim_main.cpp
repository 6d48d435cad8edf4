// SPDX-License-Identifier: MIT

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

qbc::harness::ExperimentConfig load_config(const std::string& path,
                                           const Overrides& ov) {
  auto cfg = qbc::harness::ExperimentConfig::from_json_string(read_file(path));
  if (ov.seed) cfg.base_seed = *ov.seed;
  if (ov.trials) cfg.trials = *ov.trials;
  if (ov.out) cfg.output_path = *ov.out;
  if (ov.format) {
    if (*ov.format == "json") {
      cfg.format = qbc::harness::OutputFormat::Json;
    } else if (*ov.format == "csv") {
      cfg.format = qbc::harness::OutputFormat::Csv;
    } else {
      throw std::invalid_argument("--format: expected json|csv");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qbcsim - quantum bit commitment protocol and attack simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", ov.seed, "override base_seed");
    cmd->add_option("--trials", ov.trials, "override trial count");
    cmd->add_option("--out", ov.out, "override output path");
    cmd->add_option("--format", ov.format, "override output format (json|csv)");
  };

  CLI::App* run = app.add_subcommand("run", "run a seeded Monte-Carlo campaign");
  add_common(run);
  CLI::App* probe = app.add_subcommand(
      "probe", "exact concealment probe (trace distance of Bob's view)");
  add_common(probe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    const auto cfg = load_config(config_path, ov);
    if (run->parsed()) {
      const qbc::harness::Report report = qbc::harness::run_experiment(cfg);
      if (cfg.output_path.empty()) {
        std::cout << (cfg.format == qbc::harness::OutputFormat::Csv
                          ? report.to_csv_string()
                          : report.to_json_string());
      } else {
        std::cerr << "report written to " << cfg.output_path << "\n";
      }
    } else {
      const double td = qbc::harness::concealment_probe(cfg);
      nlohmann::json j;
      j["schema"] = 1;
      j["probe"] = {{"trace_distance", td}};
      std::cout << j.dump() << "\n";
    }
  } catch (const qbc::harness::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
