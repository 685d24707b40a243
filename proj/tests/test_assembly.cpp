#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "vmsns/assembly.hpp"

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

Eigen::VectorXd random_vec(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("single element frozen mass matrices") {
  Mesh mesh = build_mesh(make_spec(1, 1));
  OperatorSet ops = assemble_operators(mesh);  // q = p = 1
  REQUIRE(ops.M0.rows() == 1);
  REQUIRE(ops.M1.rows() == 2);
  REQUIRE(ops.M2.rows() == 1);
  CHECK(ops.M0.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(ops.M1.coeff(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ops.M1.coeff(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ops.M1.coeff(0, 1) == doctest::Approx(0.0));
  CHECK(ops.M2.coeff(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("quadrature degree below p is rejected") {
  Mesh mesh = build_mesh(make_spec(2, 3));
  CHECK_THROWS_AS(assemble_operators(mesh, 2), std::invalid_argument);
  CHECK_THROWS_AS(ConvectionEval(mesh, 2), std::invalid_argument);
}

TEST_CASE("mass matrices are symmetric positive definite") {
  for (Mapping m : {Mapping::Orthogonal, Mapping::Curvilinear}) {
    Mesh mesh = build_mesh(make_spec(2, 3, m));
    for (int q : {3, 6}) {
      OperatorSet ops = assemble_operators(mesh, q);
      for (const SpMat* mat : {&ops.M0, &ops.M1, &ops.M2}) {
        Eigen::MatrixXd d(*mat);
        CHECK((d - d.transpose()).norm() < 1e-13 * d.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
      }
    }
  }
}

TEST_CASE("equal-order M0 is diagonal, enriched M0 is not") {
  Mesh mesh = build_mesh(make_spec(2, 2, Mapping::Curvilinear));
  OperatorSet lo = assemble_operators(mesh, 2);
  OperatorSet hi = assemble_operators(mesh, 5);
  Eigen::MatrixXd dlo(lo.M0), dhi(hi.M0);
  Eigen::MatrixXd off_lo = dlo - dlo.diagonal().asDiagonal().toDenseMatrix();
  Eigen::MatrixXd off_hi = dhi - dhi.diagonal().asDiagonal().toDenseMatrix();
  CHECK(off_lo.norm() == 0.0);
  CHECK(off_hi.norm() > 1e-6);
  CHECK((dlo - dhi).norm() > 1e-6);  // under-integration is visible
}

TEST_CASE("pairings are incidence transposes of mass matrices") {
  Mesh mesh = build_mesh(make_spec(2, 2, Mapping::Curvilinear));
  OperatorSet ops = assemble_operators(mesh, 4);
  SpMat dc = ops.Wcurl - SpMat(mesh.E_curl().transpose() * ops.M1);
  SpMat dd = ops.Wdiv - SpMat(mesh.E_div().transpose() * ops.M2);
  CHECK(dc.norm() == 0.0);
  CHECK(dd.norm() == 0.0);
}

TEST_CASE("constant fields integrate to the domain area") {
  for (int N : {1, 2}) {
    for (int p : {1, 3}) {
      Mesh mesh = build_mesh(make_spec(N, p));
      OperatorSet ops = assemble_operators(mesh, p + 2);
      const double area = 4.0;

      Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.dim0());
      CHECK(ones.dot(ops.M0 * ones) == doctest::Approx(area).epsilon(1e-13));
      CHECK(Eigen::VectorXd::Ones(mesh.dim0()).dot(
                load_0(mesh, p + 2, [](double, double) { return 1.0; })) ==
            doctest::Approx(area).epsilon(1e-13));

      // Constant velocity (1, 0): x-flux DOFs are the cell heights.
      const std::vector<double>& nodes = nodal_basis(p).nodes();
      const double hy = 2.0 / N;
      Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.dim1());
      for (int cy = 0; cy < mesh.n(); ++cy) {
        const int c = cy % p + 1;
        const double len = (nodes[c] - nodes[c - 1]) * hy / 2.0;
        for (int gx = 0; gx < mesh.n(); ++gx)
          u[mesh.flux_x_index(gx, cy)] = len;
      }
      CHECK((mesh.E_div() * u).norm() < 1e-14);
      CHECK(u.dot(ops.M1 * u) == doctest::Approx(area).epsilon(1e-13));

      // Constant pressure 1: cell DOFs are the cell areas.
      Eigen::VectorXd q = Eigen::VectorXd::Zero(mesh.dim2());
      for (int cy = 0; cy < mesh.n(); ++cy) {
        for (int cx = 0; cx < mesh.n(); ++cx) {
          const double lx = (nodes[cx % p + 1] - nodes[cx % p]) / N;
          const double ly = (nodes[cy % p + 1] - nodes[cy % p]) / N;
          q[mesh.cell_index(cx, cy)] = lx * ly;
        }
      }
      CHECK(q.dot(ops.M2 * q) == doctest::Approx(area).epsilon(1e-13));
    }
  }
}

TEST_CASE("mass matrices agree with pointwise evaluators") {
  Mesh mesh = build_mesh(make_spec(2, 2, Mapping::Curvilinear));
  const int q = 5;
  OperatorSet ops = assemble_operators(mesh, q);
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd a0 = random_vec(mesh.dim0(), 10 + t);
    Eigen::VectorXd b0 = random_vec(mesh.dim0(), 20 + t);
    double direct = integrate(
        mesh, q, [&](int ei, int ej, double xi, double eta, double, double) {
          return eval_scalar0(mesh, a0, ei, ej, xi, eta) *
                 eval_scalar0(mesh, b0, ei, ej, xi, eta);
        });
    CHECK(a0.dot(ops.M0 * b0) == doctest::Approx(direct).epsilon(1e-12));

    Eigen::VectorXd a1 = random_vec(mesh.dim1(), 30 + t);
    Eigen::VectorXd b1 = random_vec(mesh.dim1(), 40 + t);
    direct = integrate(
        mesh, q, [&](int ei, int ej, double xi, double eta, double, double) {
          return eval_vector1(mesh, a1, ei, ej, xi, eta)
              .dot(eval_vector1(mesh, b1, ei, ej, xi, eta));
        });
    CHECK(a1.dot(ops.M1 * b1) == doctest::Approx(direct).epsilon(1e-12));

    Eigen::VectorXd a2 = random_vec(mesh.dim2(), 50 + t);
    Eigen::VectorXd b2 = random_vec(mesh.dim2(), 60 + t);
    direct = integrate(
        mesh, q, [&](int ei, int ej, double xi, double eta, double, double) {
          return eval_scalar2(mesh, a2, ei, ej, xi, eta) *
                 eval_scalar2(mesh, b2, ei, ej, xi, eta);
        });
    CHECK(a2.dot(ops.M2 * b2) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("discrete rot coefficients evaluate to the pointwise rot") {
  Mesh mesh = build_mesh(make_spec(2, 3, Mapping::Curvilinear));
  Eigen::VectorXd w = random_vec(mesh.dim0(), 7);
  Eigen::VectorXd cw = mesh.E_curl() * w;
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> dist(-0.95, 0.95);
  std::uniform_int_distribution<int> edist(0, 1);
  for (int t = 0; t < 20; ++t) {
    const int ei = edist(rng), ej = edist(rng);
    const double xi = dist(rng), eta = dist(rng);
    Eigen::Vector2d a = eval_rot0(mesh, w, ei, ej, xi, eta);
    Eigen::Vector2d b = eval_vector1(mesh, cw, ei, ej, xi, eta);
    CHECK((a - b).norm() < 1e-11 * (1.0 + a.norm()));
  }
}

TEST_CASE("convection vector is skew and linear in vorticity") {
  for (Mapping m : {Mapping::Orthogonal, Mapping::Curvilinear}) {
    Mesh mesh = build_mesh(make_spec(2, 3, m));
    ConvectionEval conv(mesh, 3);
    Eigen::VectorXd u = random_vec(mesh.dim1(), 123);
    Eigen::VectorXd w1 = random_vec(mesh.dim0(), 124);
    Eigen::VectorXd w2 = random_vec(mesh.dim0(), 125);

    Eigen::VectorXd b = conv.convect(u, w1);
    CHECK(std::abs(u.dot(b)) < 1e-12 * u.norm() * b.norm());

    Eigen::VectorXd lin =
        conv.convect(u, 2.0 * w1 + 0.5 * w2) -
        (2.0 * conv.convect(u, w1) + 0.5 * conv.convect(u, w2));
    CHECK(lin.norm() < 1e-12 * b.norm());

    CHECK(conv.convect(u, Eigen::VectorXd::Zero(mesh.dim0())).norm() == 0.0);
  }
}

TEST_CASE("convection matches a direct quadrature of the Lamb term") {
  Mesh mesh = build_mesh(make_spec(2, 2, Mapping::Curvilinear));
  const int q = 4;
  ConvectionEval conv(mesh, q);
  Eigen::VectorXd u = random_vec(mesh.dim1(), 321);
  Eigen::VectorXd w = random_vec(mesh.dim0(), 322);
  Eigen::VectorXd v = random_vec(mesh.dim1(), 323);
  const double direct = integrate(
      mesh, q, [&](int ei, int ej, double xi, double eta, double, double) {
        Eigen::Vector2d up = eval_vector1(mesh, u, ei, ej, xi, eta);
        Eigen::Vector2d vp = eval_vector1(mesh, v, ei, ej, xi, eta);
        const double wp = eval_scalar0(mesh, w, ei, ej, xi, eta);
        return vp.dot(Eigen::Vector2d(-wp * up(1), wp * up(0)));
      });
  CHECK(v.dot(conv.convect(u, w)) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("volume projection reproduces polynomials of per-variable degree p-1") {
  for (int p : {1, 2, 3}) {
    Mesh mesh = build_mesh(make_spec(2, p));
    OperatorSet ops = assemble_operators(mesh, p + 3);
    auto f = [p](double x, double y) {
      return std::pow(0.5 + x, p - 1) * std::pow(0.25 - y, p - 1) + 0.3;
    };
    Eigen::VectorXd q = l2_project_scalar(mesh, ops, f);
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> dist(-0.9, 0.9);
    std::uniform_int_distribution<int> edist(0, 1);
    for (int t = 0; t < 10; ++t) {
      const int ei = edist(rng), ej = edist(rng);
      const double xi = dist(rng), eta = dist(rng);
      MapPoint mp = mesh.map_point(ei, ej, xi, eta);
      CHECK(eval_scalar2(mesh, q, ei, ej, xi, eta) ==
            doctest::Approx(f(mp.x, mp.y)).epsilon(1e-11));
    }
  }
}

TEST_CASE("load vectors agree with direct quadrature") {
  Mesh mesh = build_mesh(make_spec(2, 2, Mapping::Curvilinear));
  const int q = 5;
  OperatorSet ops = assemble_operators(mesh, q);

  // Compare against integrate(): <load_0(f), a> == int f * a.
  Eigen::VectorXd a = random_vec(mesh.dim0(), 92);
  auto f = [](double x, double y) { return std::sin(x) + std::cos(2.0 * y); };
  Eigen::VectorXd r0 = load_0(mesh, q, f);
  const double direct = integrate(
      mesh, q, [&](int ei, int ej, double xi, double eta, double x, double y) {
        return f(x, y) * eval_scalar0(mesh, a, ei, ej, xi, eta);
      });
  CHECK(a.dot(r0) == doctest::Approx(direct).epsilon(1e-12));

  auto vf = [](double x, double y) {
    return Eigen::Vector2d(std::sin(y), std::cos(x));
  };
  Eigen::VectorXd a1 = random_vec(mesh.dim1(), 93);
  Eigen::VectorXd r1 = load_1(mesh, q, vf);
  const double direct1 = integrate(
      mesh, q, [&](int ei, int ej, double xi, double eta, double x, double y) {
        return vf(x, y).dot(eval_vector1(mesh, a1, ei, ej, xi, eta));
      });
  CHECK(a1.dot(r1) == doctest::Approx(direct1).epsilon(1e-12));

  Eigen::VectorXd a2 = random_vec(mesh.dim2(), 94);
  Eigen::VectorXd r2 = load_2(mesh, q, f);
  const double direct2 = integrate(
      mesh, q, [&](int ei, int ej, double xi, double eta, double x, double y) {
        return f(x, y) * eval_scalar2(mesh, a2, ei, ej, xi, eta);
      });
  CHECK(a2.dot(r2) == doctest::Approx(direct2).epsilon(1e-12));
}
