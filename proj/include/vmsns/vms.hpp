#pragma once

#include <memory>

#include "vmsns/timestepper.hpp"

namespace vmsns {

/// Exact injection matrices taking coarse coefficient vectors to the
/// coefficients of the same field in a nested fine space (p-refined,
/// h-refined, or both) over the same mapping. They commute with the
/// incidence matrices: E_curl_f * e0 = e1 * E_curl_c and
/// E_div_f * e1 = e2 * E_div_c.
struct Embeddings {
  SpMat e0;  // dim0_f x dim0_c
  SpMat e1;  // dim1_f x dim1_c
  SpMat e2;  // dim2_f x dim2_c
};

Embeddings build_embedding_matrices(const Mesh& coarse, const Mesh& fine);

/// Nested coarse/fine pair for the two-scale scheme. The fine space is
/// degree p+k on the same elements; its equal-order operators define the
/// single bilinear pairing of the scheme, and the coarse operators are
/// the Galerkin restriction of the fine ones, so that the orthogonality
/// and conservation identities hold exactly.
struct ScalePair {
  int k = 0;
  Mesh coarse;
  Mesh fine;
  OperatorSet ops_fine;    // assembled at quadrature degree p+k
  OperatorSet ops_coarse;  // restriction: H^T (fine operator) H
  Embeddings embed;
};

ScalePair build_scale_pair(const MeshSpec& spec, int k);

/// Two-scale state: resolved fields in coarse coefficients, fine-scale
/// (primed) fields in fine coefficients.
struct SplitState {
  FlowState coarse;
  FlowState fine;
  double t() const { return coarse.t; }
};

SplitState split_zero_state(const ScalePair& pair, double t = 0.0);
SplitState split_from_coarse(const ScalePair& pair, const FlowState& ic);

/// Split fine-space initial data into the pair-orthogonal coarse and
/// fine-scale parts under the given projector weights: the coarse part
/// is the restricted-operator projection of the data, the fine part the
/// remainder. Requires a_mass > 0 (the stepper's weights always are).
SplitState split_from_fine(const ScalePair& pair, const ProjectorParams& params,
                           const FlowState& ic);

/// Total-field coefficient vectors on the fine space.
Vec total_omega(const ScalePair& pair, const SplitState& s);
Vec total_u(const ScalePair& pair, const SplitState& s);
Vec total_P(const ScalePair& pair, const SplitState& s);

/// Max-norm residual of the orthogonality conditions of the fine-scale
/// triple against every coarse test function.
double orthogonality_residual(const ScalePair& pair,
                              const ProjectorParams& params, const Vec& omega_p,
                              const Vec& u_p, const Vec& P_p);

/// The approximate fine-scale Greens' operator: the fine-space saddle
/// system augmented with Lagrange multiplier rows enforcing the
/// orthogonality constraints against every coarse test function. The
/// augmented system always carries one redundant continuity direction
/// (the coarse mean representer); the dominant continuity row is
/// dropped and the fine pressure is reported in the gauge M2-orthogonal
/// to the compensating null pressure.
class FineScaleSolver {
 public:
  FineScaleSolver(const ScalePair& pair, const ProjectorParams& params);

  const SaddleSystem& system() const { return sys_; }

  /// Right-hand sides follow the fine saddle-row convention (the
  /// vorticity row is w-scaled); the fine-scale pressure mean and all
  /// constraint values are pinned to zero.
  ProjectedTriple solve(const Vec& r0, const Vec& r1, const Vec& r2) const;

 private:
  const ScalePair* pair_;
  SaddleSystem sys_;  // fine saddle core (with its mean-pressure row)
  int n_con_ = 0;
  SpMat K_;   // full KKT matrix
  Vec Pz_;    // pressure gauge mode of the dropped constraint direction
  Vec m2Pz_;  // M2 * Pz
  double pz_n2_ = 0.0;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
};

ProjectedTriple fine_scale_solve(const ScalePair& pair,
                                 const ProjectorParams& params, const Vec& r0,
                                 const Vec& r1, const Vec& r2);

struct VmsStepResult {
  SplitState state;
  int picard_iters = 0;
  std::vector<double> residuals;  // total-field update norms per iteration
  // Orthogonality residual of the converged fine-scale triple, evaluated
  // with the fine-scale pressure as produced by the constrained solve
  // (the pressure post-split is a post-processing step that moves coarse
  // L2 content between the two pressure components and therefore does
  // not keep the pressure column of the second orthogonality row).
  double ortho_residual = 0.0;
};

/// Staggered two-scale Crank-Nicolson/Picard stepper: per sweep the
/// convection of the total midpoint fields is evaluated on the fine
/// space, the coarse resolved system is solved against its restriction,
/// then the constrained fine-scale system is solved; the Bernoulli
/// pressure is re-split through the coarse L2 projector once per
/// converged step. k = 0 reduces to the Galerkin stepper exactly.
class VmsStepper {
 public:
  VmsStepper(const ScalePair& pair, const StepControls& controls);

  const ScalePair& pair() const { return *pair_; }
  const StepControls& controls() const { return ctl_; }

  VmsStepResult step(const SplitState& state_n) const;

 private:
  const ScalePair* pair_;
  StepControls ctl_;
  std::unique_ptr<GalerkinStepper> delegate_;  // k == 0 only
  std::unique_ptr<SaddleSolver> coarse_solver_;
  std::unique_ptr<FineScaleSolver> fine_solver_;
  std::unique_ptr<ConvectionEval> conv_;
  Eigen::SimplicialLDLT<SpMat> m2_coarse_;  // for the pressure post-split
};

/// Fine-scale fields of a converged state, for comparison against exact
/// unresolved scales.
ProjectedTriple extract_unresolved(const SplitState& state);

/// Two-scale kinetic-energy balance: the residual of the discrete law
/// relating the change of K_coarse + K_fine to the midpoint enstrophies
/// and the cross-scale exchange terms, assembled term-by-term in the
/// fine pairing and normalized like energy_balance_audit. Zero to
/// rounding for every converged step; in the inviscid limit the law
/// reduces to conservation of K_coarse + K_fine up to the exchange
/// terms.
double vms_energy_balance_residual(const ScalePair& pair,
                                   const SplitState& state_n,
                                   const SplitState& state_np1,
                                   const StepControls& controls);

}  // namespace vmsns
