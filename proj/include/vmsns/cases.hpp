#pragma once

#include <string>

#include "vmsns/diagnostics.hpp"
#include "vmsns/stokes.hpp"
#include "vmsns/timestepper.hpp"

namespace vmsns {

/// Taylor-Green vortex on the periodic box ]-1,1[^2: an exact
/// Navier-Stokes solution whose velocity and vorticity decay like
/// exp(-2 pi^2 t / Re) and whose static pressure decays like the square
/// of that factor.
struct TGVCase {
  double Re = 100.0;

  void validate() const {
    if (!(Re > 0.0)) throw std::invalid_argument("TGVCase: Re must be > 0");
  }
};

/// Pointwise exact values and first derivatives.
struct TGVPoint {
  double u_x = 0.0, u_y = 0.0;
  double omega = 0.0;
  double p = 0.0;  // static pressure
  double dux_dx = 0.0, dux_dy = 0.0;
  double duy_dx = 0.0, duy_dy = 0.0;
  double domega_dx = 0.0, domega_dy = 0.0;
};

TGVPoint tgv_exact(const TGVCase& c, double x, double y, double t);

/// Projector-ready reference fields at time t. The pressure evaluator
/// supplies the Bernoulli form p + |u|^2 / 2, matching the solver's
/// pressure unknown.
AnalyticReference tgv_reference(const TGVCase& c, double t);

/// Error-norm reference at time t, with the Bernoulli pressure
/// P = p + |u|^2 / 2 matching the solver's pressure unknown.
ExactSolution tgv_exact_solution(const TGVCase& c, double t);

/// Mesh specification of the TGV benchmark domain.
MeshSpec tgv_mesh_spec(int N, int p, Mapping mapping = Mapping::Curvilinear);

/// Inviscid shear-layer roll-up on the periodic box ]0, 2 pi[^2:
/// a piecewise tanh shear layer perturbed by a sinusoidal vertical
/// velocity.
struct RollupCase {
  double delta = 3.14159265358979323846 / 15.0;
  double eps = 0.05;
};

/// Initial velocity (u_x, u_y) at a point of [0, 2 pi]^2.
Eigen::Vector2d rollup_ic(const RollupCase& c, double x, double y);

/// Initial vorticity (the analytic curl of rollup_ic).
double rollup_omega(const RollupCase& c, double x, double y);

/// Projector-ready initial fields (no pressure reference).
AnalyticReference rollup_reference(const RollupCase& c);

/// Mesh specification of the roll-up benchmark domain.
MeshSpec rollup_mesh_spec(int N, int p);

class SnapshotError : public std::runtime_error {
 public:
  explicit SnapshotError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A stored flow state: the mesh it lives on, the time, and the three
/// coefficient arrays. Text format, header line "vmsns-snapshot v1",
/// 17 significant digits, one coefficient per line.
struct Snapshot {
  MeshSpec spec;
  FlowState state;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

/// Result of projecting a reference solution onto a coarse space:
/// the optimal coarse triple (coarse-mesh coefficients) and the exact
/// unresolved remainder reference - embedding(coarse) (reference-mesh
/// coefficients).
struct ReferenceProjection {
  ProjectedTriple coarse;
  ProjectedTriple unresolved;
};

/// Optimal projection of a discrete reference living on a nested fine
/// mesh (same domain and mapping, N a multiple of the coarse N, degree
/// >= the coarse degree). Right-hand sides are assembled by composite
/// quadrature over the reference elements, exact for the piecewise
/// polynomial integrands; the pressure is L2-projected separately.
/// When the meshes coincide the exact discrete route is used, making
/// the projection idempotent at solver tolerance.
ReferenceProjection project_reference(const Mesh& fine, const FlowState& ref,
                                      const Mesh& coarse,
                                      const OperatorSet& ops_coarse,
                                      ProjectorParams params);

}  // namespace vmsns
