#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace vmsns {

enum class Mapping { Orthogonal, Curvilinear };

/// Doubly-periodic N x N element mesh specification.
struct MeshSpec {
  int N = 1;
  int p = 1;
  Mapping mapping = Mapping::Orthogonal;
  double curv_amplitude = 0.1;  // only used for Mapping::Curvilinear
  double x_lo = -1.0, x_hi = 1.0;
  double y_lo = -1.0, y_hi = 1.0;
  bool periodic = true;

  void validate() const;
};

struct MapPoint {
  double x, y;
  Eigen::Matrix2d jacobian;
  double det;
};

class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Curvilinear periodic mesh with the three mimetic DOF sets and the
/// integer incidence matrices for the discrete curl and divergence.
///
/// Global DOF numbering is lexicographic on the N*p x N*p periodic tensor
/// grid (x fastest):
///   0-forms:  nodal values at grid points, dim0 = n^2, n = N*p
///   1-forms:  x-flux family first (node gx, cell cy), then y-flux family
///             (cell cx, node gy), dim1 = 2 n^2
///   2-forms:  cell integrals, dim2 = n^2
class Mesh {
 public:
  explicit Mesh(const MeshSpec& spec);

  const MeshSpec& spec() const { return spec_; }
  int n() const { return n_; }
  int num_elements() const { return spec_.N * spec_.N; }

  int dim0() const { return n_ * n_; }
  int dim1() const { return 2 * n_ * n_; }
  int dim2() const { return n_ * n_; }

  int node_index(int gx, int gy) const { return wrap(gy) * n_ + wrap(gx); }
  int flux_x_index(int gx, int cy) const { return wrap(cy) * n_ + wrap(gx); }
  int flux_y_index(int cx, int gy) const {
    return n_ * n_ + wrap(gy) * n_ + wrap(cx);
  }
  int cell_index(int cx, int cy) const { return wrap(cy) * n_ + wrap(cx); }

  /// Map a reference point of element (ei, ej) to physical space,
  /// together with the analytic Jacobian of the composite map.
  MapPoint map_point(int ei, int ej, double xi, double eta) const;
  MapPoint map_point(int element, double xi, double eta) const;

  const Eigen::SparseMatrix<double>& E_curl() const { return E_curl_; }
  const Eigen::SparseMatrix<double>& E_div() const { return E_div_; }

 private:
  int wrap(int g) const { return ((g % n_) + n_) % n_; }
  void build_incidence();
  void check_jacobians() const;

  MeshSpec spec_;
  int n_;
  double hx_, hy_;  // element sizes
  Eigen::SparseMatrix<double> E_curl_;  // dim1 x dim0, entries in {-1,0,1}
  Eigen::SparseMatrix<double> E_div_;   // dim2 x dim1, entries in {-1,0,1}
};

Mesh build_mesh(const MeshSpec& spec);

}  // namespace vmsns
