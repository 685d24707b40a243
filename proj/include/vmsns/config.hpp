#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vmsns/mesh.hpp"

namespace vmsns {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class RunMode { Galerkin, Vms, ProjectOnly };
enum class CaseKind { Tgv, Rollup };

/// Flat run configuration. Parsed from `key = value` text files and/or
/// command-line overrides; unknown keys are hard errors. All solver
/// paths are seed-free: identical configurations give byte-identical
/// outputs.
struct RunConfig {
  CaseKind case_kind = CaseKind::Tgv;
  RunMode mode = RunMode::Galerkin;
  int N = 4;
  int p = 2;
  int k = 0;  // fine-space enrichment (vms mode)
  Mapping mapping = Mapping::Orthogonal;
  double curv_amplitude = 0.1;
  double Re = std::numeric_limits<double>::infinity();  // `inf` = inviscid
  double dt = 0.01;
  double t_final = 1.0;
  std::string out_dir = ".";
  double picard_tol = 1e-12;
  int picard_max = 50;
  std::vector<double> dump_times;  // fields_t<time>.csv dumps
  int dump_density = 8;            // plotting samples per element edge
  std::string reference;           // snapshot path (project command)
  std::vector<int> sweep_N;        // tgv-converge h-study
  std::vector<int> sweep_k;        // tgv-converge k-study

  void validate() const;
};

/// Parse a flat `key = value` config file. Blank lines and lines
/// starting with '#' are ignored. Errors name the offending key and
/// line number.
RunConfig parse_config_file(const std::string& path);

/// Apply one `key=value` override (command-line flags). `where` is used
/// in error messages.
void apply_config_override(RunConfig& cfg, const std::string& key,
                           const std::string& value, const std::string& where);

}  // namespace vmsns
