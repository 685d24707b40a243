#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "vmsns/basis.hpp"
#include "vmsns/mesh.hpp"

namespace vmsns {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

using ScalarField = std::function<double(double x, double y)>;
using VectorField = std::function<Eigen::Vector2d(double x, double y)>;

/// Local-to-global DOF maps of one element.
struct ElementDofs {
  std::vector<int> n0;  // nodal, (p+1)^2, a + (p+1)*b
  std::vector<int> fx;  // x-flux, (p+1)*p, a + (p+1)*(c-1)
  std::vector<int> fy;  // y-flux, p*(p+1), (c-1) + p*b
  std::vector<int> c2;  // cells, p^2, (cx-1) + p*(cy-1)
};

ElementDofs element_dofs(const Mesh& mesh, int ei, int ej);

/// Mass matrices of the three spaces plus the weak curl/div pairings.
struct OperatorSet {
  int quadrature_degree = 0;
  SpMat M0;     // dim0 x dim0
  SpMat M1;     // dim1 x dim1
  SpMat M2;     // dim2 x dim2
  SpMat Wcurl;  // dim0 x dim1, = E_curl^T M1;  (rot eps_i, v_j)
  SpMat Wdiv;   // dim1 x dim2, = E_div^T M2;   (div v_i, eta_j)
};

/// Element-loop assembly with the GLL rule of the given degree
/// (default equal-order: degree == p). Throws for degree < p.
OperatorSet assemble_operators(const Mesh& mesh, int quadrature_degree);
inline OperatorSet assemble_operators(const Mesh& mesh) {
  return assemble_operators(mesh, mesh.spec().p);
}

/// Precomputed tables for the Lamb-form convection vector.
class ConvectionEval {
 public:
  ConvectionEval(const Mesh& mesh, int quadrature_degree);

  const Mesh& mesh() const { return *mesh_; }

  /// b_i = int v_i . (omega x u) under the element quadrature, where
  /// omega x u = omega * (-u_y, u_x).
  Vec convect(const Vec& u, const Vec& omega) const;

 private:
  struct QuadPoint {
    Eigen::Matrix2d jac;
    double w;  // quadrature weight product (no metric; Piola cancels detJ)
  };
  const Mesh* mesh_;
  int qdeg_;
  BasisTable table_;
  std::vector<std::vector<QuadPoint>> geom_;  // [element][qpoint]
};

/// Load vectors against analytic data, with a selectable quadrature tier.
Vec load_0(const Mesh& mesh, int quadrature_degree, const ScalarField& f);
Vec load_1(const Mesh& mesh, int quadrature_degree, const VectorField& f);
Vec load_2(const Mesh& mesh, int quadrature_degree, const ScalarField& f);

/// L2-optimal coefficients in the volume space: solves M2 x = load_2(f)
/// with the high-order error quadrature for the right-hand side.
Vec l2_project_scalar(const Mesh& mesh, const OperatorSet& ops,
                      const ScalarField& f, int rhs_quadrature_degree = 25);

/// Pointwise evaluation of discrete fields at a reference point of an
/// element. Vector/volume quantities include the Piola metric factors.
double eval_scalar0(const Mesh& mesh, const Vec& omega, int ei, int ej,
                    double xi, double eta);
Eigen::Vector2d eval_rot0(const Mesh& mesh, const Vec& omega, int ei, int ej,
                          double xi, double eta);
Eigen::Vector2d eval_vector1(const Mesh& mesh, const Vec& u, int ei, int ej,
                             double xi, double eta);
double eval_scalar2(const Mesh& mesh, const Vec& q, int ei, int ej, double xi,
                    double eta);

/// Generic quadrature of an element-local integrand over the mesh.
/// The integrand sees the element, reference point, and physical point;
/// the detJ volume factor is applied by the loop.
double integrate(const Mesh& mesh, int quadrature_degree,
                 const std::function<double(int ei, int ej, double xi,
                                            double eta, double x, double y)>&
                     integrand);

}  // namespace vmsns
