#include <cmath>
#include <random>

#include "doctest.h"
#include "vmsns/mesh.hpp"

using namespace vmsns;

namespace {

MeshSpec make_spec(int N, int p, Mapping m = Mapping::Orthogonal,
                   double c = 0.1) {
  MeshSpec s;
  s.N = N;
  s.p = p;
  s.mapping = m;
  s.curv_amplitude = c;
  return s;
}

}  // namespace

TEST_CASE("dimensions and indexing") {
  for (int N : {1, 2, 3}) {
    for (int p : {1, 2, 4}) {
      Mesh mesh = build_mesh(make_spec(N, p));
      const int n = N * p;
      CHECK(mesh.n() == n);
      CHECK(mesh.dim0() == n * n);
      CHECK(mesh.dim1() == 2 * n * n);
      CHECK(mesh.dim2() == n * n);
      CHECK(mesh.E_curl().rows() == mesh.dim1());
      CHECK(mesh.E_curl().cols() == mesh.dim0());
      CHECK(mesh.E_div().rows() == mesh.dim2());
      CHECK(mesh.E_div().cols() == mesh.dim1());
      // Periodic wrap.
      CHECK(mesh.node_index(n, 0) == mesh.node_index(0, 0));
      CHECK(mesh.node_index(-1, 2 % n) == mesh.node_index(n - 1, 2 % n));
      CHECK(mesh.flux_y_index(0, 0) == n * n);
    }
  }
}

TEST_CASE("exact sequence: E_div * E_curl = 0") {
  for (int N = 1; N <= 8; ++N) {
    for (int p = 1; p <= 4; ++p) {
      Mesh mesh = build_mesh(make_spec(N, p));
      Eigen::SparseMatrix<double> prod = mesh.E_div() * mesh.E_curl();
      prod.prune(0.0);
      CHECK(prod.nonZeros() == 0);
    }
  }
}

TEST_CASE("incidence entries are integers with correct row counts") {
  Mesh mesh = build_mesh(make_spec(3, 2));
  Eigen::SparseMatrix<double, Eigen::RowMajor> ec(mesh.E_curl());
  Eigen::SparseMatrix<double, Eigen::RowMajor> ed(mesh.E_div());
  for (int r = 0; r < ec.rows(); ++r) {
    int cnt = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ec, r);
         it; ++it) {
      CHECK(std::abs(it.value()) == 1.0);
      ++cnt;
    }
    CHECK(cnt == 2);
  }
  for (int r = 0; r < ed.rows(); ++r) {
    int cnt = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ed, r);
         it; ++it) {
      CHECK(std::abs(it.value()) == 1.0);
      ++cnt;
    }
    CHECK(cnt == 4);
  }
  // Constants are in the kernel of the discrete curl.
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.dim0());
  CHECK((mesh.E_curl() * ones).norm() == 0.0);
}

TEST_CASE("incidence commutes with grid translation") {
  Mesh mesh = build_mesh(make_spec(2, 3));
  const int n = mesh.n();
  // Shift every DOF by one grid cell in x and in y; the incidence
  // matrices must commute with both permutations.
  for (int dir = 0; dir < 2; ++dir) {
    const int sx = dir == 0 ? 1 : 0;
    const int sy = dir == 0 ? 0 : 1;
    Eigen::VectorXd w(mesh.dim0());
    std::mt19937 rng(99 + dir);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < w.size(); ++i) w[i] = dist(rng);

    Eigen::VectorXd ws(mesh.dim0());
    for (int gy = 0; gy < n; ++gy)
      for (int gx = 0; gx < n; ++gx)
        ws[mesh.node_index(gx + sx, gy + sy)] = w[mesh.node_index(gx, gy)];

    Eigen::VectorXd cu = mesh.E_curl() * w;
    Eigen::VectorXd cus = mesh.E_curl() * ws;
    for (int cy = 0; cy < n; ++cy)
      for (int gx = 0; gx < n; ++gx)
        CHECK(cus[mesh.flux_x_index(gx + sx, cy + sy)] ==
              doctest::Approx(cu[mesh.flux_x_index(gx, cy)]).epsilon(1e-14));
    for (int gy = 0; gy < n; ++gy)
      for (int cx = 0; cx < n; ++cx)
        CHECK(cus[mesh.flux_y_index(cx + sx, gy + sy)] ==
              doctest::Approx(cu[mesh.flux_y_index(cx, gy)]).epsilon(1e-14));

    Eigen::VectorXd u(mesh.dim1());
    for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
    Eigen::VectorXd us(mesh.dim1());
    for (int cy = 0; cy < n; ++cy)
      for (int gx = 0; gx < n; ++gx)
        us[mesh.flux_x_index(gx + sx, cy + sy)] = u[mesh.flux_x_index(gx, cy)];
    for (int gy = 0; gy < n; ++gy)
      for (int cx = 0; cx < n; ++cx)
        us[mesh.flux_y_index(cx + sx, gy + sy)] = u[mesh.flux_y_index(cx, gy)];
    Eigen::VectorXd dv = mesh.E_div() * u;
    Eigen::VectorXd dvs = mesh.E_div() * us;
    for (int cy = 0; cy < n; ++cy)
      for (int cx = 0; cx < n; ++cx)
        CHECK(dvs[mesh.cell_index(cx + sx, cy + sy)] ==
              doctest::Approx(dv[mesh.cell_index(cx, cy)]).epsilon(1e-14));
  }
}

TEST_CASE("orthogonal map is affine with constant Jacobian") {
  MeshSpec s = make_spec(4, 2);
  s.x_lo = 0.0;
  s.x_hi = 2.0;
  s.y_lo = 0.0;
  s.y_hi = 2.0;
  Mesh mesh = build_mesh(s);
  MapPoint mp = mesh.map_point(0, 0, -1.0, -1.0);
  CHECK(mp.x == doctest::Approx(0.0));
  CHECK(mp.y == doctest::Approx(0.0));
  mp = mesh.map_point(3, 3, 1.0, 1.0);
  CHECK(mp.x == doctest::Approx(2.0));
  CHECK(mp.y == doctest::Approx(2.0));
  mp = mesh.map_point(1, 2, 0.3, -0.7);
  CHECK(mp.jacobian(0, 0) == doctest::Approx(0.25));
  CHECK(mp.jacobian(1, 1) == doctest::Approx(0.25));
  CHECK(mp.jacobian(0, 1) == 0.0);
  CHECK(mp.det == doctest::Approx(0.0625));
}

TEST_CASE("curvilinear frozen point") {
  // At (xh, yh) = (0.25, 0.25) with c = 0.1 the perturbation is
  // g = 0.1 sin(pi/2)^2 = 0.1, so (x, y) = (0.35, 0.15).
  Mesh mesh = build_mesh(make_spec(1, 1, Mapping::Curvilinear, 0.1));
  MapPoint mp = mesh.map_point(0, 0, 0.25, 0.25);
  CHECK(mp.x == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(mp.y == doctest::Approx(0.15).epsilon(1e-14));
}

TEST_CASE("curvilinear Jacobian matches finite differences") {
  Mesh mesh = build_mesh(make_spec(3, 3, Mapping::Curvilinear, 0.1));
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  std::uniform_int_distribution<int> edist(0, 2);
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    const int ei = edist(rng), ej = edist(rng);
    const double xi = dist(rng), eta = dist(rng);
    MapPoint mp = mesh.map_point(ei, ej, xi, eta);
    MapPoint xm = mesh.map_point(ei, ej, xi - h, eta);
    MapPoint xp = mesh.map_point(ei, ej, xi + h, eta);
    MapPoint ym = mesh.map_point(ei, ej, xi, eta - h);
    MapPoint yp = mesh.map_point(ei, ej, xi, eta + h);
    Eigen::Matrix2d fd;
    fd << (xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h),
        (xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h);
    CHECK((mp.jacobian - fd).norm() / mp.jacobian.norm() < 1e-7);
    CHECK(mp.det > 0.0);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(build_mesh(make_spec(0, 2)), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(make_spec(2, 0)), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(make_spec(2, 2, Mapping::Curvilinear, 0.3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(make_spec(2, 2, Mapping::Curvilinear, -0.01)),
                  std::invalid_argument);
  MeshSpec bad = make_spec(2, 2);
  bad.x_hi = bad.x_lo;
  CHECK_THROWS_AS(build_mesh(bad), std::invalid_argument);
  MeshSpec np = make_spec(2, 2);
  np.periodic = false;
  CHECK_THROWS_AS(build_mesh(np), std::invalid_argument);
}

TEST_CASE("curvilinear Jacobian stays positive at sample meshes") {
  for (int N : {1, 4, 16}) {
    for (int p : {1, 4}) {
      CHECK_NOTHROW(build_mesh(make_spec(N, p, Mapping::Curvilinear, 0.1)));
    }
  }
}
