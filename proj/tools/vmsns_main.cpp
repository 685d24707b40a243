#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vmsns/driver.hpp"

namespace {

using vmsns::RunConfig;

// Build the configuration from --config and the remaining `--key value`
// override tokens (flags win over file values).
RunConfig build_config(const std::string& config_path,
                       const std::vector<std::string>& extras) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = vmsns::parse_config_file(config_path);
  for (size_t i = 0; i < extras.size(); ++i) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0)
      throw vmsns::ConfigError("command line: expected '--key value', got '" +
                               key + "'");
    key = key.substr(2);
    std::string value;
    const size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size())
        throw vmsns::ConfigError("command line: missing value for '--" + key +
                                 "'");
      value = extras[++i];
    }
    vmsns::apply_config_override(cfg, key, value, "command line");
  }
  return cfg;
}

int dispatch(const std::string& command, const std::string& config_path,
             const std::vector<std::string>& extras) {
  try {
    RunConfig cfg = build_config(config_path, extras);
    if (command == "tgv-converge") {
      cfg.case_kind = vmsns::CaseKind::Tgv;
      vmsns::cmd_tgv_converge(cfg);
    } else if (command == "rollup") {
      cfg.case_kind = vmsns::CaseKind::Rollup;
      vmsns::cmd_run(cfg);
    } else if (command == "project") {
      vmsns::cmd_project(cfg);
    } else {
      vmsns::cmd_run(cfg);
    }
    return 0;
  } catch (const vmsns::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const vmsns::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const vmsns::SnapshotError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "vmsns: structure-preserving two-scale incompressible Navier-Stokes "
      "solver"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    std::string config_path;
  };
  std::vector<std::pair<std::string, const char*>> commands = {
      {"tgv-converge", "Taylor-Green h- or k-convergence study"},
      {"rollup", "inviscid shear-layer roll-up run"},
      {"project", "project a reference snapshot onto a coarse space"},
      {"run", "single run of the configured case"},
  };
  std::vector<Sub> subs;
  subs.reserve(commands.size());
  for (auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    subs.push_back({cmd, {}});
    cmd->add_option("--config", subs.back().config_path,
                    "flat key = value configuration file");
    cmd->allow_extras();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (size_t i = 0; i < subs.size(); ++i)
    if (subs[i].cmd->parsed())
      return dispatch(commands[i].first, subs[i].config_path,
                      subs[i].cmd->remaining());
  return 2;
}
