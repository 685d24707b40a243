#pragma once

#include "vmsns/stokes.hpp"
#include "vmsns/timestepper.hpp"

namespace vmsns {

/// One CSV row of the time-series diagnostics.
struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double K_total = 0.0, K_coarse = 0.0, K_fine = 0.0;
  double E_total = 0.0;
  double W_total = 0.0;
  double P_pal = 0.0;
  double div_res_coarse = 0.0, div_res_fine = 0.0;
  int picard_iters = 0;
  double energy_balance_res = 0.0;
};

struct ConservedQuantities {
  double K = 0.0;   // kinetic energy, u^T M1 u / 2
  double E = 0.0;   // enstrophy, w^T M0 w / 2
  double W = 0.0;   // total vorticity, pairing of w with the constant 1
  double Ppal = 0.0;  // palinstrophy, (E_curl w)^T M1 (E_curl w) / 2
};

/// Solver-tier quadratic invariants; these are the quantities the scheme
/// conserves exactly.
ConservedQuantities conserved_quantities(const Mesh& mesh,
                                         const OperatorSet& ops,
                                         const Vec& omega, const Vec& u);

/// Analytic reference fields with the derivatives the error norms need.
struct ExactSolution {
  VectorField rot_omega;  // curl of the exact vorticity
  VectorField u;
  ScalarField div_u;      // may be empty (treated as 0)
  ScalarField p_static;   // may be empty (pressure error skipped as 0)
};

struct ErrorNorms {
  double e_omega = 0.0;  // ||rot w_h - rot w||_L2
  double e_u = 0.0;      // (||u_h - u||^2 + ||div u_h - div u||^2)^(1/2)
  double e_p = 0.0;      // ||p_h - p||_L2, static pressure p = P - |u|^2/2
};

/// Errors against analytic fields under the high-order quadrature tier.
ErrorNorms error_norms(const Mesh& mesh, const Vec& omega, const Vec& u,
                       const Vec& P, const ExactSolution& exact,
                       int quadrature_degree = 25);

/// Errors between two discrete triples on the same mesh, same norms.
ErrorNorms discrete_error_norms(const Mesh& mesh, const Vec& omega_a,
                                const Vec& u_a, const Vec& P_a,
                                const Vec& omega_b, const Vec& u_b,
                                const Vec& P_b, int quadrature_degree = 25);

/// Crank-Nicolson energy balance: |(K_{n+1} - K_n) + (dt/Re) 2 E_mid|
/// relative to K_n; the inviscid form drops the enstrophy term.
/// Assemble with the ops of the space the fields live on (fine-space ops
/// and total fields for VMS states).
double energy_balance_audit(const OperatorSet& ops, const Vec& omega_n,
                            const Vec& u_n, const Vec& omega_np1,
                            const Vec& u_np1, const StepControls& controls);

}  // namespace vmsns
