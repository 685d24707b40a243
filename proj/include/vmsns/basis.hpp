#pragma once

#include <stdexcept>
#include <vector>

namespace vmsns {

/// Gauss-Lobatto-Legendre quadrature rule on [-1,1].
///
/// q+1 nodes (endpoints included), exact for polynomials of degree
/// <= 2q-1.
struct QuadratureRule {
  int degree = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  int num_points() const { return static_cast<int>(nodes.size()); }
};

/// Returns the GLL rule of degree q (q+1 points). Cached; deterministic.
/// Throws std::invalid_argument for q < 1.
const QuadratureRule& gll_rule(int q);

/// Lagrange basis through the GLL(p) nodes.
///
/// Values are evaluated in barycentric form; node coincidence is handled
/// exactly so that h_i(xi_j) = delta_ij holds in floating point.
class NodalBasis {
 public:
  explicit NodalBasis(int p);

  int degree() const { return p_; }
  const std::vector<double>& nodes() const { return nodes_; }

  /// Values and first derivatives of all p+1 basis functions at xi.
  /// Throws std::domain_error if xi lies outside [-1,1].
  void eval(double xi, std::vector<double>& values,
            std::vector<double>& derivatives) const;

 private:
  int p_;
  std::vector<double> nodes_;
  std::vector<double> bary_;  // barycentric weights
};

/// Edge (histopolation) basis: e_i = -sum_{k<i} dh_k/dxi, i = 1..p.
/// Integrals over the GLL cells satisfy int_{cell j} e_i = delta_ij.
class EdgeBasis {
 public:
  explicit EdgeBasis(int p);

  int degree() const { return p_; }

  /// Values of e_1..e_p at xi (p entries).
  void eval(double xi, std::vector<double>& values) const;

  /// Exact primitive: integral of e_i over [a,b], via nodal values.
  double integrate(int i, double a, double b) const;

 private:
  int p_;
  NodalBasis nodal_;
};

/// Shared immutable basis instances, keyed by degree.
const NodalBasis& nodal_basis(int p);
const EdgeBasis& edge_basis(int p);

/// Tabulated 1D basis values at the points of a quadrature rule.
struct BasisTable {
  // [point][function]
  std::vector<std::vector<double>> nodal;        // p+1 columns
  std::vector<std::vector<double>> nodal_deriv;  // p+1 columns
  std::vector<std::vector<double>> edge;         // p columns
};

BasisTable tabulate_basis(int p, const QuadratureRule& rule);

}  // namespace vmsns
