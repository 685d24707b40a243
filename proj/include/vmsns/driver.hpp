#pragma once

#include <string>
#include <vector>

#include "vmsns/cases.hpp"
#include "vmsns/config.hpp"
#include "vmsns/diagnostics.hpp"
#include "vmsns/vms.hpp"

namespace vmsns {

/// Case-appropriate mesh specification for a configuration.
MeshSpec config_mesh_spec(const RunConfig& cfg);

/// Projector-ready analytic reference of the configured case (TGV at
/// time t; the roll-up initial condition ignores t).
AnalyticReference case_reference(const RunConfig& cfg, double t);

/// Initial state: the Stokes projection of the analytic initial fields.
FlowState case_initial_state(const Mesh& mesh, const OperatorSet& ops,
                             const RunConfig& cfg);

StepControls step_controls(const RunConfig& cfg);

/// Observer fired with the current (total) fields after the initial
/// state and after every step; used for field dumps.
using DumpHook = std::function<void(double t, const Mesh& mesh,
                                    const Vec& omega, const Vec& u,
                                    const Vec& P)>;

/// Completed single-space Galerkin run with its per-step diagnostics
/// (row 0 is the initial state).
struct GalerkinRun {
  Mesh mesh;
  OperatorSet ops;
  std::vector<DiagnosticsRecord> diag;
  FlowState final;
};
GalerkinRun run_galerkin(const RunConfig& cfg, const DumpHook& hook = {});

/// Completed two-scale run. Diagnostics carry the coarse/fine energy
/// split and both divergence residuals.
struct VmsRun {
  ScalePair pair;
  std::vector<DiagnosticsRecord> diag;
  SplitState final;
};
VmsRun run_vms(const RunConfig& cfg, const DumpHook& hook = {});

/// One row of a Taylor-Green convergence study.
struct TgvSweepRow {
  int N = 0, p = 0, k = 0;
  std::string mode;
  ErrorNorms err;        // against the exact solution at t_final
  ErrorNorms err_proj;   // vms: coarse scale against the optimal projection
  ErrorNorms err_prime;  // vms: fine scale against the exact unresolved
  int max_picard = 0;
  double max_energy_res = 0.0;
};

/// Run one configuration of the study in the configured mode. For
/// mode galerkin / vms the solution is advanced to t_final; for
/// project-only the exact solution at t_final is projected directly.
/// Error norms for the vms mode are those of the coarse (resolved)
/// component, the quantity the benchmark compares across methods.
TgvSweepRow tgv_run_row(const RunConfig& cfg);

/// CSV output. All values are printed with 17 significant digits.
std::string format17(double v);
void write_diag_csv(const std::string& path,
                    const std::vector<DiagnosticsRecord>& rows);
void write_fields_csv(const std::string& path, const Mesh& mesh,
                      const Vec& omega, const Vec& u, const Vec& P,
                      int density);
std::string fields_filename(double t);

/// Command drivers (exit-code mapping lives in the CLI entry point).
void cmd_run(const RunConfig& cfg);
void cmd_tgv_converge(const RunConfig& cfg);
void cmd_project(const RunConfig& cfg);

}  // namespace vmsns
