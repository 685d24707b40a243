#include "vmsns/stokes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

namespace vmsns {

namespace {

void scatter_block(std::vector<Eigen::Triplet<double>>& trip, const SpMat& m,
                   double scale, int row0, int col0) {
  if (scale == 0.0) return;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      trip.emplace_back(row0 + static_cast<int>(it.row()),
                        col0 + static_cast<int>(it.col()), scale * it.value());
}

void scatter_block_t(std::vector<Eigen::Triplet<double>>& trip, const SpMat& m,
                     double scale, int row0, int col0) {
  if (scale == 0.0) return;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      trip.emplace_back(row0 + static_cast<int>(it.col()),
                        col0 + static_cast<int>(it.row()), scale * it.value());
}

}  // namespace

SaddleSystem build_saddle_system(const Mesh& mesh, const OperatorSet& ops,
                                 ProjectorParams params) {
  params.validate();
  SaddleSystem sys;
  sys.d0 = mesh.dim0();
  sys.d1 = mesh.dim1();
  sys.d2 = mesh.dim2();
  sys.params = params;
  sys.w = params.a_curl > 0.0 ? params.a_curl : 1.0;
  sys.n_extra = params.a_mass == 0.0 ? 3 : 1;

  const int o1 = sys.d0, o2 = sys.d0 + sys.d1, oc = o2 + sys.d2;
  std::vector<Eigen::Triplet<double>> trip;

  scatter_block(trip, ops.M0, sys.w, 0, 0);
  scatter_block(trip, ops.Wcurl, -sys.w, 0, o1);
  scatter_block_t(trip, ops.Wcurl, -params.a_curl, o1, 0);
  scatter_block(trip, ops.M1, -params.a_mass, o1, o1);
  scatter_block(trip, ops.Wdiv, 1.0, o1, o2);
  scatter_block_t(trip, ops.Wdiv, 1.0, o2, o1);

  // Zero-mean pressure: 2-form coefficients are cell integrals, so the
  // all-ones functional is exactly the mean.
  for (int j = 0; j < sys.d2; ++j) {
    trip.emplace_back(oc, o2 + j, 1.0);
    trip.emplace_back(o2 + j, oc, 1.0);
  }

  if (sys.n_extra == 3) {
    // Pin the harmonic velocity component that a pure Stokes operator on
    // the torus leaves undetermined. The all-ones functional per flux
    // family is the sum of cut fluxes (n times the harmonic period for a
    // divergence-free field), and is annihilated exactly by E_curl^T, so
    // it cannot disturb Galerkin orthogonality.
    sys.gx = Vec::Zero(sys.d1);
    sys.gy = Vec::Zero(sys.d1);
    const int half = sys.d1 / 2;
    sys.gx.segment(0, half).setOnes();
    sys.gy.segment(half, half).setOnes();
    for (int i = 0; i < sys.d1; ++i) {
      if (sys.gx[i] != 0.0) {
        trip.emplace_back(oc + 1, o1 + i, sys.gx[i]);
        trip.emplace_back(o1 + i, oc + 1, sys.gx[i]);
      }
      if (sys.gy[i] != 0.0) {
        trip.emplace_back(oc + 2, o1 + i, sys.gy[i]);
        trip.emplace_back(o1 + i, oc + 2, sys.gy[i]);
      }
    }
  }

  sys.A.resize(sys.size(), sys.size());
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

SaddleSolver::SaddleSolver(const Mesh& mesh, const OperatorSet& ops,
                           ProjectorParams params)
    : sys_(build_saddle_system(mesh, ops, params)),
      lu_(std::make_unique<Eigen::SparseLU<SpMat>>()) {
  lu_->compute(sys_.A);
  if (lu_->info() != Eigen::Success)
    throw SolverError("saddle-system factorization failed");
}

ProjectedTriple SaddleSolver::solve(const Vec& r0, const Vec& r1,
                                    const Vec& r2, double mean_p,
                                    double mean_ux, double mean_uy) const {
  if (r0.size() != sys_.d0 || r1.size() != sys_.d1 || r2.size() != sys_.d2)
    throw std::invalid_argument("SaddleSolver::solve: rhs dimension mismatch");
  Vec b = Vec::Zero(sys_.size());
  b.segment(0, sys_.d0) = r0;
  b.segment(sys_.d0, sys_.d1) = r1;
  b.segment(sys_.d0 + sys_.d1, sys_.d2) = r2;
  const int oc = sys_.d0 + sys_.d1 + sys_.d2;
  b[oc] = mean_p;
  if (sys_.n_extra == 3) {
    b[oc + 1] = mean_ux;
    b[oc + 2] = mean_uy;
  }

  Vec x = lu_->solve(b);
  // One step of iterative refinement keeps the nonlinear (Picard) floor
  // well below the 1e-12 convergence tolerance.
  x += lu_->solve(Vec(b - sys_.A * x));
  // Standard backward-error criterion for a direct solve.
  const double res = (sys_.A * x - b).norm();
  const double scale = std::max(b.norm() + sys_.A.norm() * x.norm(), 1e-300);
  if (!(res <= 1e-12 * scale))
    throw SolverError("saddle solve residual " + std::to_string(res / scale) +
                      " exceeds 1e-12");

  ProjectedTriple out;
  out.omega = x.segment(0, sys_.d0);
  out.u = x.segment(sys_.d0, sys_.d1);
  out.P = x.segment(sys_.d0 + sys_.d1, sys_.d2);
  return out;
}

ProjectedTriple apply_projector(const SaddleSolver& solver, const Mesh& mesh,
                                const OperatorSet& ops,
                                const AnalyticReference& ref,
                                int quadrature_degree) {
  const SaddleSystem& sys = solver.system();
  const ProjectorParams& pp = sys.params;

  const Vec l0 = load_0(mesh, quadrature_degree, ref.omega);
  const Vec lu = load_1(mesh, quadrature_degree, ref.u);
  Vec r0 = sys.w * (l0 - Vec(mesh.E_curl().transpose() * lu));
  Vec r1 = -pp.a_mass * lu;
  if (pp.a_curl > 0.0)
    r1 -= pp.a_curl * load_1(mesh, quadrature_degree, ref.rot_omega);
  Vec r2 = Vec::Zero(mesh.dim2());

  double mean_ux = 0.0, mean_uy = 0.0;
  if (sys.n_extra == 3) {
    // Harmonic-period targets: the sum of x-flux coefficients of a
    // divergence-free field equals n * (net flux across a vertical cut)
    // = n * integral(u_x) / Lx, and likewise in y.
    const MeshSpec& ms = mesh.spec();
    const double ix = integrate(mesh, quadrature_degree,
                                [&](int, int, double, double, double x,
                                    double y) { return ref.u(x, y)(0); });
    const double iy = integrate(mesh, quadrature_degree,
                                [&](int, int, double, double, double x,
                                    double y) { return ref.u(x, y)(1); });
    mean_ux = mesh.n() * ix / (ms.x_hi - ms.x_lo);
    mean_uy = mesh.n() * iy / (ms.y_hi - ms.y_lo);
  }

  ProjectedTriple out = solver.solve(r0, r1, r2, 0.0, mean_ux, mean_uy);
  if (ref.pressure)
    out.P = l2_project_scalar(mesh, ops, ref.pressure, quadrature_degree);
  return out;
}

ProjectedTriple apply_projector(const Mesh& mesh, const OperatorSet& ops,
                                ProjectorParams params,
                                const AnalyticReference& ref,
                                int quadrature_degree) {
  SaddleSolver solver(mesh, ops, params);
  return apply_projector(solver, mesh, ops, ref, quadrature_degree);
}

ProjectedTriple apply_projector_discrete(const SaddleSolver& solver,
                                         const Mesh& mesh,
                                         const OperatorSet& ops,
                                         const Vec& omega_ref,
                                         const Vec& u_ref, const Vec* P_ref) {
  const SaddleSystem& sys = solver.system();
  const ProjectorParams& pp = sys.params;

  Vec r0 = sys.w * (ops.M0 * omega_ref - ops.Wcurl * u_ref);
  Vec r1 = -pp.a_curl * (ops.Wcurl.transpose() * omega_ref) -
           pp.a_mass * (ops.M1 * u_ref);
  if (P_ref) r1 += ops.Wdiv * (*P_ref);
  Vec r2 = ops.Wdiv.transpose() * u_ref;

  double mean_p = P_ref ? P_ref->sum() : 0.0;
  double mean_ux = 0.0, mean_uy = 0.0;
  if (sys.n_extra == 3) {
    mean_ux = sys.gx.dot(u_ref);
    mean_uy = sys.gy.dot(u_ref);
  }
  return solver.solve(r0, r1, r2, mean_p, mean_ux, mean_uy);
}

ProjectedTriple solve_stokes(const Mesh& mesh, const OperatorSet& ops,
                             const VectorField& f, int rhs_quadrature) {
  // Constant velocity fields are harmonic on the torus: a momentum
  // source with nonzero mean is inconsistent.
  const double fx = integrate(
      mesh, rhs_quadrature,
      [&](int, int, double, double, double x, double y) { return f(x, y)(0); });
  const double fy = integrate(
      mesh, rhs_quadrature,
      [&](int, int, double, double, double x, double y) { return f(x, y)(1); });
  if (std::hypot(fx, fy) > 1e-10)
    throw SolverError(
        "solve_stokes: momentum source has nonzero mean (inconsistent with "
        "the periodic constant-pressure mode)");

  SaddleSolver solver(mesh, ops, ProjectorParams{1.0, 0.0});
  Vec r0 = Vec::Zero(mesh.dim0());
  Vec r1 = -load_1(mesh, rhs_quadrature, f);
  Vec r2 = Vec::Zero(mesh.dim2());
  return solver.solve(r0, r1, r2);
}

InfSupEstimate inf_sup_estimate(const Mesh& mesh, const OperatorSet& ops) {
  Eigen::MatrixXd M1(ops.M1), M2(ops.M2);
  Eigen::MatrixXd Ec(mesh.E_curl()), Ed(mesh.E_div());
  Eigen::MatrixXd X = Eigen::MatrixXd(ops.M0) + Ec.transpose() * M1 * Ec;
  Eigen::MatrixXd Y = M1 + Ed.transpose() * M2 * Ed;

  InfSupEstimate est;

  // sup over eps of (rot eps, v)^2 / |eps|^2_Hcurl, restricted to the
  // divergence-free subspace; the torus harmonic fields are the zero
  // modes to skip.
  {
    Eigen::MatrixXd B = M1 * Ec;  // (v_i, rot eps_j) pairing
    Eigen::MatrixXd Z = Eigen::FullPivLU<Eigen::MatrixXd>(Ed).kernel();
    Eigen::MatrixXd S = B * X.llt().solve(B.transpose());
    Eigen::MatrixXd A1 = Z.transpose() * S * Z;
    Eigen::MatrixXd B1 = Z.transpose() * Y * Z;
    A1 = 0.5 * (A1 + A1.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A1, B1);
    if (ges.info() != Eigen::Success)
      throw SolverError("inf_sup_estimate: eigensolver failure (curl)");
    const Eigen::VectorXd& ev = ges.eigenvalues();
    const double thr = 1e-10 * std::max(1.0, std::abs(ev[ev.size() - 1]));
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] > thr) {
        est.beta_omega = std::sqrt(ev[i]);
        break;
      }
    }
  }

  // sup over v of (div v, q)^2 / |v|^2_Hdiv versus |q|^2; the single
  // zero mode is the constant pressure.
  {
    Eigen::MatrixXd Wd(ops.Wdiv);  // dim1 x dim2
    Eigen::MatrixXd A2 = Wd.transpose() * Y.llt().solve(Wd);
    A2 = 0.5 * (A2 + A2.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A2, M2);
    if (ges.info() != Eigen::Success)
      throw SolverError("inf_sup_estimate: eigensolver failure (div)");
    const Eigen::VectorXd& ev = ges.eigenvalues();
    const double thr = 1e-10 * std::max(1.0, std::abs(ev[ev.size() - 1]));
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] <= thr) {
        ++est.pressure_nullspace_dim;
      } else if (est.beta_u == 0.0) {
        est.beta_u = std::sqrt(ev[i]);
      }
    }
  }
  return est;
}

OptimalityReport check_norm_optimality(const Mesh& mesh,
                                       const OperatorSet& ops,
                                       const Vec& omega_bar,
                                       const VectorField& rot_omega_ref,
                                       int trials, unsigned seed,
                                       int quadrature_degree) {
  const SpMat K = SpMat(mesh.E_curl().transpose() * ops.M1) * mesh.E_curl();
  const Vec L = mesh.E_curl().transpose() *
                load_1(mesh, quadrature_degree, rot_omega_ref);
  const double c = integrate(
      mesh, quadrature_degree,
      [&](int, int, double, double, double x, double y) {
        return rot_omega_ref(x, y).squaredNorm();
      });

  // Mixed functional whose stationarity is exactly the projector's
  // Galerkin orthogonality: solver-tier quadratic term, high-order
  // cross term against the reference curl.
  auto err = [&](const Vec& w) {
    const double e2 = w.dot(K * w) - 2.0 * w.dot(L) + c;
    return std::sqrt(std::max(e2, 0.0));
  };

  OptimalityReport rep;
  rep.worst_orthogonality = Vec(K * omega_bar - L).lpNorm<Eigen::Infinity>();
  rep.base_error = err(omega_bar);

  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const double scale = 1e-3 * std::max(1.0, omega_bar.norm());
  rep.worst_margin = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec d(omega_bar.size());
    for (int i = 0; i < d.size(); ++i) d[i] = dist(rng);
    d *= scale / d.norm();
    const double margin = err(omega_bar + d) - rep.base_error;
    if (t == 0 || margin < rep.worst_margin) rep.worst_margin = margin;
  }
  return rep;
}

}  // namespace vmsns
