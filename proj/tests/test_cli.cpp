#include <algorithm>
#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vmsns/driver.hpp"

using namespace vmsns;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("vmsns_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& text) {
  fs::path p = dir / name;
  std::ofstream os(p);
  os << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config file parsing handles comments, spacing and inf") {
  const fs::path dir = temp_dir("parse");
  const fs::path cfg_path = write_file(dir, "run.cfg",
                                       "# comment line\n"
                                       "\n"
                                       "case = rollup\n"
                                       "mode=vms\n"
                                       "  N = 8 \n"
                                       "p = 2\n"
                                       "k = 2\n"
                                       "Re = inf\n"
                                       "dt = 0.01\n"
                                       "t_final = 2\n"
                                       "dump_times = 0.5, 1.0 ,2\n"
                                       "sweep_N = 2,4,8\n");
  RunConfig cfg = parse_config_file(cfg_path.string());
  CHECK(cfg.case_kind == CaseKind::Rollup);
  CHECK(cfg.mode == RunMode::Vms);
  CHECK(cfg.N == 8);
  CHECK(cfg.p == 2);
  CHECK(cfg.k == 2);
  CHECK(std::isinf(cfg.Re));
  CHECK(cfg.dt == doctest::Approx(0.01));
  REQUIRE(cfg.dump_times.size() == 3);
  CHECK(cfg.dump_times[1] == doctest::Approx(1.0));
  REQUIRE(cfg.sweep_N.size() == 3);
  CHECK(cfg.sweep_N[2] == 8);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors name the key and the offending line") {
  const fs::path dir = temp_dir("errors");

  const fs::path unknown =
      write_file(dir, "unknown.cfg", "N = 4\nwibble = 3\n");
  try {
    parse_config_file(unknown.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("wibble") != std::string::npos);
    CHECK(msg.find(":2") != std::string::npos);
  }

  const fs::path badval = write_file(dir, "badval.cfg", "Re = fast\n");
  try {
    parse_config_file(badval.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("Re") != std::string::npos);
  }

  const fs::path noeq = write_file(dir, "noeq.cfg", "just words\n");
  CHECK_THROWS_AS(parse_config_file(noeq.string()), ConfigError);

  CHECK_THROWS_AS(parse_config_file((dir / "missing.cfg").string()),
                  ConfigError);
}

TEST_CASE("validate rejects out-of-range values naming the constraint") {
  RunConfig cfg;
  cfg.k = -1;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("k") != std::string::npos);
  }
  cfg = RunConfig{};
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.Re = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.dump_times = {2.0};
  cfg.t_final = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("command-line overrides replace file values") {
  const fs::path dir = temp_dir("override");
  const fs::path cfg_path =
      write_file(dir, "run.cfg", "N = 4\np = 3\nRe = 100\n");
  RunConfig cfg = parse_config_file(cfg_path.string());
  apply_config_override(cfg, "N", "6", "command line");
  apply_config_override(cfg, "Re", "inf", "command line");
  CHECK(cfg.N == 6);
  CHECK(std::isinf(cfg.Re));
  CHECK(cfg.p == 3);  // untouched keys survive
  CHECK_THROWS_AS(
      apply_config_override(cfg, "colour", "blue", "command line"),
      ConfigError);
}

TEST_CASE("cmd_run produces deterministic diagnostics and artifacts") {
  const fs::path dir = temp_dir("run");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Tgv;
  cfg.mode = RunMode::Galerkin;
  cfg.N = 2;
  cfg.p = 2;
  cfg.Re = 100.0;
  cfg.dt = 0.05;
  cfg.t_final = 0.2;
  cfg.dump_times = {0.1};
  cfg.out_dir = (dir / "a").string();
  cmd_run(cfg);

  const fs::path a = dir / "a";
  REQUIRE(fs::exists(a / "diag.csv"));
  CHECK(fs::exists(a / "final.vmsnap"));
  CHECK(fs::exists(a / fields_filename(0.1)));

  const std::string diag = slurp(a / "diag.csv");
  CHECK(diag.rfind("step,t,K_total,K_coarse,K_fine,E_total,W_total,P_pal,"
                   "div_res_coarse,div_res_fine,picard_iters,"
                   "energy_balance_res\n",
                   0) == 0);
  // 4 steps + initial record + header
  CHECK(std::count(diag.begin(), diag.end(), '\n') == 6);

  cfg.out_dir = (dir / "b").string();
  cmd_run(cfg);
  CHECK(slurp(dir / "b" / "diag.csv") == diag);  // byte-identical rerun
  CHECK(slurp(dir / "b" / "final.vmsnap") == slurp(a / "final.vmsnap"));
}

TEST_CASE("cmd_project round-trips a snapshot and rejects bad input") {
  const fs::path dir = temp_dir("project");
  RunConfig cfg;
  cfg.case_kind = CaseKind::Rollup;
  cfg.mode = RunMode::Galerkin;
  cfg.N = 4;
  cfg.p = 2;
  cfg.Re = std::numeric_limits<double>::infinity();
  cfg.dt = 0.01;
  cfg.t_final = 0.02;
  cfg.out_dir = (dir / "run").string();
  cmd_run(cfg);

  RunConfig pcfg;
  pcfg.case_kind = CaseKind::Rollup;
  pcfg.mode = RunMode::ProjectOnly;
  pcfg.N = 2;
  pcfg.p = 2;
  pcfg.Re = 100.0;  // finite weights for the cross-mesh projector
  pcfg.dt = 0.01;
  pcfg.reference = (dir / "run" / "final.vmsnap").string();
  pcfg.out_dir = (dir / "proj").string();
  cmd_project(pcfg);
  CHECK(fs::exists(dir / "proj" / "projected.vmsnap"));

  // missing reference path
  RunConfig bad = pcfg;
  bad.reference.clear();
  CHECK_THROWS_AS(cmd_project(bad), ConfigError);

  // unreadable snapshot
  bad = pcfg;
  bad.reference = (dir / "nope.vmsnap").string();
  CHECK_THROWS_AS(cmd_project(bad), SnapshotError);

  // truncated snapshot
  const std::string whole = slurp(dir / "run" / "final.vmsnap");
  write_file(dir, "trunc.vmsnap", whole.substr(0, whole.size() / 2));
  bad.reference = (dir / "trunc.vmsnap").string();
  CHECK_THROWS_AS(cmd_project(bad), SnapshotError);
}

TEST_CASE("format17 round-trips doubles exactly") {
  for (double v : {0.1, -3.14159e-7, 1.0 / 3.0, 12345.678901234567}) {
    const std::string s = format17(v);
    CHECK(std::stod(s) == v);
  }
}
