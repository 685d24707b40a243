#include "vmsns/diagnostics.hpp"

#include <cmath>

namespace vmsns {

ConservedQuantities conserved_quantities(const Mesh& mesh,
                                         const OperatorSet& ops,
                                         const Vec& omega, const Vec& u) {
  if (omega.size() != mesh.dim0() || u.size() != mesh.dim1())
    throw std::invalid_argument("conserved_quantities: dimension mismatch");
  ConservedQuantities q;
  q.K = 0.5 * u.dot(ops.M1 * u);
  q.E = 0.5 * omega.dot(ops.M0 * omega);
  q.W = Vec(ops.M0 * omega).sum();
  const Vec rw = mesh.E_curl() * omega;
  q.Ppal = 0.5 * rw.dot(ops.M1 * rw);
  return q;
}

ErrorNorms error_norms(const Mesh& mesh, const Vec& omega, const Vec& u,
                       const Vec& P, const ExactSolution& exact,
                       int quadrature_degree) {
  if (!exact.rot_omega || !exact.u)
    throw std::invalid_argument("error_norms: missing reference evaluators");
  const Vec div_u = mesh.E_div() * u;
  double ew2 = 0.0, eu2 = 0.0, ep2 = 0.0;
  ew2 = integrate(mesh, quadrature_degree,
                  [&](int ei, int ej, double xi, double eta, double x,
                      double y) {
                    return (eval_rot0(mesh, omega, ei, ej, xi, eta) -
                            exact.rot_omega(x, y))
                        .squaredNorm();
                  });
  eu2 = integrate(mesh, quadrature_degree,
                  [&](int ei, int ej, double xi, double eta, double x,
                      double y) {
                    const double dd =
                        eval_scalar2(mesh, div_u, ei, ej, xi, eta) -
                        (exact.div_u ? exact.div_u(x, y) : 0.0);
                    return (eval_vector1(mesh, u, ei, ej, xi, eta) -
                            exact.u(x, y))
                               .squaredNorm() +
                           dd * dd;
                  });
  if (exact.p_static) {
    // Static pressure is defined up to a constant on a periodic domain:
    // compare the mean-free parts, ||d - mean(d)||^2 = int d^2 - (int d)^2/|O|.
    auto diff = [&](int ei, int ej, double xi, double eta, double x,
                    double y) {
      const double ph =
          eval_scalar2(mesh, P, ei, ej, xi, eta) -
          0.5 * eval_vector1(mesh, u, ei, ej, xi, eta).squaredNorm();
      return ph - exact.p_static(x, y);
    };
    const double area = integrate(
        mesh, quadrature_degree,
        [](int, int, double, double, double, double) { return 1.0; });
    const double d1 = integrate(mesh, quadrature_degree, diff);
    const double d2 = integrate(mesh, quadrature_degree,
                                [&](int ei, int ej, double xi, double eta,
                                    double x, double y) {
                                  const double d = diff(ei, ej, xi, eta, x, y);
                                  return d * d;
                                });
    ep2 = d2 - d1 * d1 / area;
  }
  ErrorNorms e;
  e.e_omega = std::sqrt(std::max(ew2, 0.0));
  e.e_u = std::sqrt(std::max(eu2, 0.0));
  e.e_p = std::sqrt(std::max(ep2, 0.0));
  return e;
}

ErrorNorms discrete_error_norms(const Mesh& mesh, const Vec& omega_a,
                                const Vec& u_a, const Vec& P_a,
                                const Vec& omega_b, const Vec& u_b,
                                const Vec& P_b, int quadrature_degree) {
  const Vec div_a = mesh.E_div() * u_a;
  const Vec div_b = mesh.E_div() * u_b;
  const double ew2 = integrate(
      mesh, quadrature_degree,
      [&](int ei, int ej, double xi, double eta, double, double) {
        return (eval_rot0(mesh, omega_a, ei, ej, xi, eta) -
                eval_rot0(mesh, omega_b, ei, ej, xi, eta))
            .squaredNorm();
      });
  const double eu2 = integrate(
      mesh, quadrature_degree,
      [&](int ei, int ej, double xi, double eta, double, double) {
        const double dd = eval_scalar2(mesh, div_a, ei, ej, xi, eta) -
                          eval_scalar2(mesh, div_b, ei, ej, xi, eta);
        return (eval_vector1(mesh, u_a, ei, ej, xi, eta) -
                eval_vector1(mesh, u_b, ei, ej, xi, eta))
                   .squaredNorm() +
               dd * dd;
      });
  auto pdiff = [&](int ei, int ej, double xi, double eta) {
    const double pa =
        eval_scalar2(mesh, P_a, ei, ej, xi, eta) -
        0.5 * eval_vector1(mesh, u_a, ei, ej, xi, eta).squaredNorm();
    const double pb =
        eval_scalar2(mesh, P_b, ei, ej, xi, eta) -
        0.5 * eval_vector1(mesh, u_b, ei, ej, xi, eta).squaredNorm();
    return pa - pb;
  };
  const double area = integrate(
      mesh, quadrature_degree,
      [](int, int, double, double, double, double) { return 1.0; });
  const double pd1 = integrate(
      mesh, quadrature_degree,
      [&](int ei, int ej, double xi, double eta, double, double) {
        return pdiff(ei, ej, xi, eta);
      });
  const double ep2 = integrate(
                         mesh, quadrature_degree,
                         [&](int ei, int ej, double xi, double eta, double,
                             double) {
                           const double d = pdiff(ei, ej, xi, eta);
                           return d * d;
                         }) -
                     pd1 * pd1 / area;
  ErrorNorms e;
  e.e_omega = std::sqrt(std::max(ew2, 0.0));
  e.e_u = std::sqrt(std::max(eu2, 0.0));
  e.e_p = std::sqrt(std::max(ep2, 0.0));
  return e;
}

double energy_balance_audit(const OperatorSet& ops, const Vec& omega_n,
                            const Vec& u_n, const Vec& omega_np1,
                            const Vec& u_np1, const StepControls& controls) {
  const double K_n = 0.5 * u_n.dot(ops.M1 * u_n);
  const double K_np1 = 0.5 * u_np1.dot(ops.M1 * u_np1);
  double lhs = K_np1 - K_n;
  if (!controls.inviscid()) {
    const Vec w_mid = 0.5 * (omega_n + omega_np1);
    const double E_mid = 0.5 * w_mid.dot(ops.M0 * w_mid);
    lhs += (controls.dt / controls.Re) * 2.0 * E_mid;
  }
  return std::abs(lhs) / std::max(K_n, 1e-30);
}

}  // namespace vmsns
