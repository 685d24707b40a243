#include "vmsns/mesh.hpp"

#include <cmath>
#include <vector>

#include "vmsns/basis.hpp"

namespace vmsns {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void MeshSpec::validate() const {
  if (N < 1) throw std::invalid_argument("MeshSpec: N must be >= 1");
  if (p < 1) throw std::invalid_argument("MeshSpec: p must be >= 1");
  if (mapping == Mapping::Curvilinear &&
      (curv_amplitude < 0.0 || curv_amplitude >= 0.25))
    throw std::invalid_argument(
        "MeshSpec: curvilinear amplitude must lie in [0, 0.25)");
  if (x_hi <= x_lo || y_hi <= y_lo)
    throw std::invalid_argument("MeshSpec: empty domain box");
  if (!periodic)
    throw std::invalid_argument(
        "MeshSpec: only periodic meshes are supported");
}

Mesh::Mesh(const MeshSpec& spec) : spec_(spec) {
  spec_.validate();
  n_ = spec_.N * spec_.p;
  hx_ = (spec_.x_hi - spec_.x_lo) / spec_.N;
  hy_ = (spec_.y_hi - spec_.y_lo) / spec_.N;
  build_incidence();
  check_jacobians();
}

MapPoint Mesh::map_point(int element, double xi, double eta) const {
  if (element < 0 || element >= num_elements())
    throw std::invalid_argument("Mesh::map_point: invalid element index");
  return map_point(element % spec_.N, element / spec_.N, xi, eta);
}

MapPoint Mesh::map_point(int ei, int ej, double xi, double eta) const {
  if (ei < 0 || ei >= spec_.N || ej < 0 || ej >= spec_.N)
    throw std::invalid_argument("Mesh::map_point: invalid element index");
  const double xh = spec_.x_lo + hx_ * (ei + 0.5 * (1.0 + xi));
  const double yh = spec_.y_lo + hy_ * (ej + 0.5 * (1.0 + eta));

  MapPoint out;
  if (spec_.mapping == Mapping::Orthogonal) {
    out.x = xh;
    out.y = yh;
    out.jacobian << 0.5 * hx_, 0.0, 0.0, 0.5 * hy_;
  } else {
    const double c = spec_.curv_amplitude;
    const double sx = std::sin(2.0 * kPi * xh), cx = std::cos(2.0 * kPi * xh);
    const double sy = std::sin(2.0 * kPi * yh), cy = std::cos(2.0 * kPi * yh);
    const double g = c * sx * sy;
    const double gx = 2.0 * kPi * c * cx * sy;  // dg/dxh
    const double gy = 2.0 * kPi * c * sx * cy;  // dg/dyh
    out.x = xh + g;
    out.y = yh - g;
    Eigen::Matrix2d dhat;
    dhat << 1.0 + gx, gy, -gx, 1.0 - gy;
    Eigen::Matrix2d scale;
    scale << 0.5 * hx_, 0.0, 0.0, 0.5 * hy_;
    out.jacobian = dhat * scale;
  }
  out.det = out.jacobian.determinant();
  return out;
}

void Mesh::build_incidence() {
  const int d0 = dim0(), d1 = dim1(), d2 = dim2();
  std::vector<Eigen::Triplet<double>> tc, td;
  tc.reserve(4 * d0);
  td.reserve(4 * d2);

  // Discrete curl of a nodal field:
  //   x-flux (gx, cy):  omega(gx, cy+1) - omega(gx, cy)
  //   y-flux (cx, gy): -(omega(cx+1, gy) - omega(cx, gy))
  for (int cy = 0; cy < n_; ++cy) {
    for (int gx = 0; gx < n_; ++gx) {
      const int row = flux_x_index(gx, cy);
      tc.emplace_back(row, node_index(gx, cy + 1), 1.0);
      tc.emplace_back(row, node_index(gx, cy), -1.0);
    }
  }
  for (int gy = 0; gy < n_; ++gy) {
    for (int cx = 0; cx < n_; ++cx) {
      const int row = flux_y_index(cx, gy);
      tc.emplace_back(row, node_index(cx + 1, gy), -1.0);
      tc.emplace_back(row, node_index(cx, gy), 1.0);
    }
  }
  E_curl_.resize(d1, d0);
  E_curl_.setFromTriplets(tc.begin(), tc.end());
  E_curl_.prune(0.0);

  // Discrete divergence: net flux out of each cell.
  for (int cy = 0; cy < n_; ++cy) {
    for (int cx = 0; cx < n_; ++cx) {
      const int row = cell_index(cx, cy);
      td.emplace_back(row, flux_x_index(cx + 1, cy), 1.0);
      td.emplace_back(row, flux_x_index(cx, cy), -1.0);
      td.emplace_back(row, flux_y_index(cx, cy + 1), 1.0);
      td.emplace_back(row, flux_y_index(cx, cy), -1.0);
    }
  }
  E_div_.resize(d2, d1);
  E_div_.setFromTriplets(td.begin(), td.end());
  E_div_.prune(0.0);
}

void Mesh::check_jacobians() const {
  const QuadratureRule& rule = gll_rule(std::max(spec_.p, 1));
  for (int ej = 0; ej < spec_.N; ++ej) {
    for (int ei = 0; ei < spec_.N; ++ei) {
      for (double eta : rule.nodes) {
        for (double xi : rule.nodes) {
          MapPoint mp = map_point(ei, ej, xi, eta);
          if (!(mp.det > 0.0))
            throw MeshError("degenerate mesh: non-positive Jacobian in element (" +
                            std::to_string(ei) + "," + std::to_string(ej) + ")");
        }
      }
    }
  }
}

Mesh build_mesh(const MeshSpec& spec) { return Mesh(spec); }

}  // namespace vmsns
