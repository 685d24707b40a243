#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "vmsns/stokes.hpp"

namespace vmsns {

struct FlowState {
  Vec omega;  // dim0
  Vec u;      // dim1
  Vec P;      // dim2, Bernoulli pressure at the midpoint of the step
              // that produced this state
  double t = 0.0;
};

FlowState zero_state(const Mesh& mesh, double t = 0.0);

struct StepControls {
  double dt = 0.0;
  double Re = std::numeric_limits<double>::infinity();
  double picard_tol = 1e-12;
  int picard_max = 100;

  bool inviscid() const { return !std::isfinite(Re); }
  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("StepControls: dt must be > 0");
    if (!(picard_tol > 0.0))
      throw std::invalid_argument("StepControls: picard_tol must be > 0");
    if (picard_max < 1)
      throw std::invalid_argument("StepControls: picard_max must be >= 1");
    if (Re <= 0.0) throw std::invalid_argument("StepControls: Re must be > 0");
  }
  ProjectorParams params() const {
    return ProjectorParams{inviscid() ? 0.0 : 1.0 / (2.0 * Re), 1.0 / dt};
  }
};

struct StepResult {
  FlowState state;
  int picard_iters = 0;
  std::vector<double> residuals;  // Picard update norms, one per iteration
};

/// Crank-Nicolson / Picard stepper for the Galerkin scheme. The constant
/// left-hand block is factored once and reused by every step.
class GalerkinStepper {
 public:
  GalerkinStepper(const Mesh& mesh, const OperatorSet& ops,
                  const StepControls& controls);

  const Mesh& mesh() const { return *mesh_; }
  const OperatorSet& ops() const { return *ops_; }
  const StepControls& controls() const { return ctl_; }

  StepResult step(const FlowState& state_n) const;

 private:
  const Mesh* mesh_;
  const OperatorSet* ops_;
  StepControls ctl_;
  SaddleSolver solver_;
  ConvectionEval conv_;
};

using RunObserver =
    std::function<void(const FlowState& state, int step_index,
                       const StepResult& result)>;

/// Advances ic to t_final = ic.t + m*dt (m integral, enforced) with the
/// given stepper; the observer fires after each completed step.
template <typename Stepper>
FlowState run(const Stepper& stepper, FlowState ic, double t_final,
              const RunObserver& observer = {}) {
  const double dt = stepper.controls().dt;
  const double span = t_final - ic.t;
  if (span < -1e-12) throw std::invalid_argument("run: t_final before start");
  const double m_real = span / dt;
  const long m = std::lround(m_real);
  if (std::abs(m_real - static_cast<double>(m)) > 1e-8)
    throw std::invalid_argument(
        "run: t_final - t0 must be an integer multiple of dt");
  FlowState state = std::move(ic);
  for (long s = 0; s < m; ++s) {
    StepResult r;
    try {
      r = stepper.step(state);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(s + 1) + ": " + e.what());
    }
    if (observer) observer(r.state, static_cast<int>(s + 1), r);
    state = std::move(r.state);
  }
  return state;
}

}  // namespace vmsns
