#include "vmsns/timestepper.hpp"

namespace vmsns {

FlowState zero_state(const Mesh& mesh, double t) {
  FlowState s;
  s.omega = Vec::Zero(mesh.dim0());
  s.u = Vec::Zero(mesh.dim1());
  s.P = Vec::Zero(mesh.dim2());
  s.t = t;
  return s;
}

GalerkinStepper::GalerkinStepper(const Mesh& mesh, const OperatorSet& ops,
                                 const StepControls& controls)
    : mesh_(&mesh),
      ops_(&ops),
      ctl_(controls),
      solver_(mesh, ops, (controls.validate(), controls.params())),
      conv_(mesh, ops.quadrature_degree) {}

StepResult GalerkinStepper::step(const FlowState& state_n) const {
  const ProjectorParams pp = ctl_.params();
  const double inv_dt = 1.0 / ctl_.dt;

  // Constant part of the momentum right-hand side:
  // -(1/dt) M1 u_n + (1/(2Re)) Wcurl^T w_n.
  Vec r1_const = -inv_dt * (ops_->M1 * state_n.u);
  if (pp.a_curl > 0.0)
    r1_const += pp.a_curl * (ops_->Wcurl.transpose() * state_n.omega);
  const Vec r0 = Vec::Zero(mesh_->dim0());
  const Vec r2 = Vec::Zero(mesh_->dim2());

  StepResult out;
  Vec w = state_n.omega;
  Vec u = state_n.u;
  Vec P = state_n.P;

  for (int it = 1; it <= ctl_.picard_max; ++it) {
    const Vec u_mid = 0.5 * (state_n.u + u);
    const Vec w_mid = 0.5 * (state_n.omega + w);
    const Vec r1 = r1_const + conv_.convect(u_mid, w_mid);
    ProjectedTriple sol = solver_.solve(r0, r1, r2);

    const Vec dw = sol.omega - w;
    const Vec du = sol.u - u;
    const double update =
        std::sqrt(dw.dot(ops_->M0 * dw) + du.dot(ops_->M1 * du));
    w = sol.omega;
    u = sol.u;
    P = sol.P;
    out.residuals.push_back(update);
    out.picard_iters = it;
    if (update < ctl_.picard_tol) {
      out.state.omega = std::move(w);
      out.state.u = std::move(u);
      out.state.P = std::move(P);
      out.state.t = state_n.t + ctl_.dt;
      return out;
    }
  }
  throw SolverError("Picard iteration did not converge in " +
                    std::to_string(ctl_.picard_max) +
                    " iterations (last update " +
                    std::to_string(out.residuals.back()) + ")");
}

}  // namespace vmsns
