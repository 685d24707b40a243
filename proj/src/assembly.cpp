#include "vmsns/assembly.hpp"

#include <Eigen/SparseCholesky>

namespace vmsns {

ElementDofs element_dofs(const Mesh& mesh, int ei, int ej) {
  const int p = mesh.spec().p;
  ElementDofs d;
  d.n0.resize((p + 1) * (p + 1));
  d.fx.resize((p + 1) * p);
  d.fy.resize(p * (p + 1));
  d.c2.resize(p * p);
  const int gx0 = ei * p, gy0 = ej * p;
  for (int b = 0; b <= p; ++b)
    for (int a = 0; a <= p; ++a)
      d.n0[a + (p + 1) * b] = mesh.node_index(gx0 + a, gy0 + b);
  for (int c = 1; c <= p; ++c)
    for (int a = 0; a <= p; ++a)
      d.fx[a + (p + 1) * (c - 1)] = mesh.flux_x_index(gx0 + a, gy0 + c - 1);
  for (int b = 0; b <= p; ++b)
    for (int c = 1; c <= p; ++c)
      d.fy[(c - 1) + p * b] = mesh.flux_y_index(gx0 + c - 1, gy0 + b);
  for (int cy = 1; cy <= p; ++cy)
    for (int cx = 1; cx <= p; ++cx)
      d.c2[(cx - 1) + p * (cy - 1)] = mesh.cell_index(gx0 + cx - 1, gy0 + cy - 1);
  return d;
}

OperatorSet assemble_operators(const Mesh& mesh, int quadrature_degree) {
  const int p = mesh.spec().p;
  if (quadrature_degree < p)
    throw std::invalid_argument(
        "assemble_operators: quadrature degree must be >= p");

  const QuadratureRule& rule = gll_rule(quadrature_degree);
  const BasisTable table = tabulate_basis(p, rule);
  const int nq = rule.num_points();

  const int n0 = (p + 1) * (p + 1);
  const int nf = (p + 1) * p;          // per flux family
  const int n1 = 2 * nf;
  const int n2 = p * p;

  Eigen::MatrixXd A0(n0, n0), A1(n1, n1), A2(n2, n2);
  std::vector<Eigen::Triplet<double>> t0, t1, t2;
  t0.reserve(mesh.num_elements() * n0 * n0);
  t1.reserve(mesh.num_elements() * n1 * n1);
  t2.reserve(mesh.num_elements() * n2 * n2);

  std::vector<double> v0(n0), vx(nf), vy(nf), v2(n2);

  for (int ej = 0; ej < mesh.spec().N; ++ej) {
    for (int ei = 0; ei < mesh.spec().N; ++ei) {
      const ElementDofs dofs = element_dofs(mesh, ei, ej);
      A0.setZero();
      A1.setZero();
      A2.setZero();
      for (int qj = 0; qj < nq; ++qj) {
        for (int qi = 0; qi < nq; ++qi) {
          const MapPoint mp =
              mesh.map_point(ei, ej, rule.nodes[qi], rule.nodes[qj]);
          const double w = rule.weights[qi] * rule.weights[qj];
          const Eigen::Matrix2d K =
              (mp.jacobian.transpose() * mp.jacobian) / mp.det;

          const std::vector<double>& hx = table.nodal[qi];
          const std::vector<double>& hy = table.nodal[qj];
          const std::vector<double>& ex = table.edge[qi];
          const std::vector<double>& ey = table.edge[qj];

          for (int b = 0; b <= p; ++b)
            for (int a = 0; a <= p; ++a) v0[a + (p + 1) * b] = hx[a] * hy[b];
          for (int c = 1; c <= p; ++c)
            for (int a = 0; a <= p; ++a)
              vx[a + (p + 1) * (c - 1)] = hx[a] * ey[c - 1];
          for (int b = 0; b <= p; ++b)
            for (int c = 1; c <= p; ++c)
              vy[(c - 1) + p * b] = ex[c - 1] * hy[b];
          for (int cy = 1; cy <= p; ++cy)
            for (int cx = 1; cx <= p; ++cx)
              v2[(cx - 1) + p * (cy - 1)] = ex[cx - 1] * ey[cy - 1];

          const double w0 = w * mp.det;
          for (int i = 0; i < n0; ++i) {
            if (v0[i] == 0.0) continue;
            const double s = w0 * v0[i];
            for (int j = 0; j < n0; ++j) A0(i, j) += s * v0[j];
          }

          // 1-form metric: u^T (J^T J / det) v on the reference vectors.
          const double kxx = w * K(0, 0), kxy = w * K(0, 1), kyy = w * K(1, 1);
          for (int i = 0; i < nf; ++i) {
            const double sxx = kxx * vx[i], sxy = kxy * vx[i];
            if (vx[i] != 0.0) {
              for (int j = 0; j < nf; ++j) {
                A1(i, j) += sxx * vx[j];
                A1(i, nf + j) += sxy * vy[j];
              }
            }
            const double syx = kxy * vy[i], syy = kyy * vy[i];
            if (vy[i] != 0.0) {
              for (int j = 0; j < nf; ++j) {
                A1(nf + i, j) += syx * vx[j];
                A1(nf + i, nf + j) += syy * vy[j];
              }
            }
          }

          const double w2 = w / mp.det;
          for (int i = 0; i < n2; ++i) {
            if (v2[i] == 0.0) continue;
            const double s = w2 * v2[i];
            for (int j = 0; j < n2; ++j) A2(i, j) += s * v2[j];
          }
        }
      }

      for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j)
          if (A0(i, j) != 0.0)
            t0.emplace_back(dofs.n0[i], dofs.n0[j], A0(i, j));
      auto g1 = [&](int k) { return k < nf ? dofs.fx[k] : dofs.fy[k - nf]; };
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
          if (A1(i, j) != 0.0) t1.emplace_back(g1(i), g1(j), A1(i, j));
      for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j)
          if (A2(i, j) != 0.0)
            t2.emplace_back(dofs.c2[i], dofs.c2[j], A2(i, j));
    }
  }

  OperatorSet ops;
  ops.quadrature_degree = quadrature_degree;
  ops.M0.resize(mesh.dim0(), mesh.dim0());
  ops.M0.setFromTriplets(t0.begin(), t0.end());
  ops.M1.resize(mesh.dim1(), mesh.dim1());
  ops.M1.setFromTriplets(t1.begin(), t1.end());
  ops.M2.resize(mesh.dim2(), mesh.dim2());
  ops.M2.setFromTriplets(t2.begin(), t2.end());
  ops.Wcurl = mesh.E_curl().transpose() * ops.M1;
  ops.Wdiv = mesh.E_div().transpose() * ops.M2;
  return ops;
}

ConvectionEval::ConvectionEval(const Mesh& mesh, int quadrature_degree)
    : mesh_(&mesh),
      qdeg_(quadrature_degree),
      table_(tabulate_basis(mesh.spec().p, gll_rule(quadrature_degree))) {
  if (quadrature_degree < mesh.spec().p)
    throw std::invalid_argument(
        "ConvectionEval: quadrature degree must be >= p");
  const QuadratureRule& rule = gll_rule(qdeg_);
  const int nq = rule.num_points();
  geom_.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    geom_[e].resize(nq * nq);
    for (int qj = 0; qj < nq; ++qj) {
      for (int qi = 0; qi < nq; ++qi) {
        const MapPoint mp =
            mesh.map_point(e, rule.nodes[qi], rule.nodes[qj]);
        QuadPoint& g = geom_[e][qi + nq * qj];
        g.jac = mp.jacobian;
        g.w = rule.weights[qi] * rule.weights[qj];
      }
    }
  }
}

Vec ConvectionEval::convect(const Vec& u, const Vec& omega) const {
  const Mesh& mesh = *mesh_;
  const int p = mesh.spec().p;
  const QuadratureRule& rule = gll_rule(qdeg_);
  const int nq = rule.num_points();
  const int nf = (p + 1) * p;

  Vec b = Vec::Zero(mesh.dim1());
  std::vector<double> bx(nf), by(nf);

  for (int ej = 0; ej < mesh.spec().N; ++ej) {
    for (int ei = 0; ei < mesh.spec().N; ++ei) {
      const int e = ei + mesh.spec().N * ej;
      const ElementDofs dofs = element_dofs(mesh, ei, ej);
      std::fill(bx.begin(), bx.end(), 0.0);
      std::fill(by.begin(), by.end(), 0.0);
      for (int qj = 0; qj < nq; ++qj) {
        for (int qi = 0; qi < nq; ++qi) {
          const QuadPoint& g = geom_[e][qi + nq * qj];
          const std::vector<double>& hx = table_.nodal[qi];
          const std::vector<double>& hy = table_.nodal[qj];
          const std::vector<double>& ex = table_.edge[qi];
          const std::vector<double>& ey = table_.edge[qj];

          Eigen::Vector2d uhat(0.0, 0.0);
          for (int c = 1; c <= p; ++c)
            for (int a = 0; a <= p; ++a)
              uhat(0) += u[dofs.fx[a + (p + 1) * (c - 1)]] * hx[a] * ey[c - 1];
          for (int bb = 0; bb <= p; ++bb)
            for (int c = 1; c <= p; ++c)
              uhat(1) += u[dofs.fy[(c - 1) + p * bb]] * ex[c - 1] * hy[bb];

          double w0 = 0.0;
          for (int bb = 0; bb <= p; ++bb)
            for (int a = 0; a <= p; ++a)
              w0 += omega[dofs.n0[a + (p + 1) * bb]] * hx[a] * hy[bb];

          const double det = g.jac.determinant();
          const Eigen::Vector2d up = (g.jac * uhat) / det;
          // omega x u = omega * (-u_y, u_x); one det cancels with the
          // Piola factor of the test function.
          const Eigen::Vector2d f(-w0 * up(1), w0 * up(0));
          const Eigen::Vector2d t = g.w * (g.jac.transpose() * f);

          for (int c = 1; c <= p; ++c)
            for (int a = 0; a <= p; ++a)
              bx[a + (p + 1) * (c - 1)] += hx[a] * ey[c - 1] * t(0);
          for (int bb = 0; bb <= p; ++bb)
            for (int c = 1; c <= p; ++c)
              by[(c - 1) + p * bb] += ex[c - 1] * hy[bb] * t(1);
        }
      }
      for (int i = 0; i < nf; ++i) {
        b[dofs.fx[i]] += bx[i];
        b[dofs.fy[i]] += by[i];
      }
    }
  }
  return b;
}

namespace {

template <typename Body>
void quad_loop(const Mesh& mesh, int quadrature_degree, const Body& body) {
  const QuadratureRule& rule = gll_rule(quadrature_degree);
  const int nq = rule.num_points();
  for (int ej = 0; ej < mesh.spec().N; ++ej) {
    for (int ei = 0; ei < mesh.spec().N; ++ei) {
      const ElementDofs dofs = element_dofs(mesh, ei, ej);
      for (int qj = 0; qj < nq; ++qj) {
        for (int qi = 0; qi < nq; ++qi) {
          const MapPoint mp =
              mesh.map_point(ei, ej, rule.nodes[qi], rule.nodes[qj]);
          const double w = rule.weights[qi] * rule.weights[qj];
          body(dofs, qi, qj, mp, w);
        }
      }
    }
  }
}

}  // namespace

Vec load_0(const Mesh& mesh, int quadrature_degree, const ScalarField& f) {
  const int p = mesh.spec().p;
  const BasisTable table = tabulate_basis(p, gll_rule(quadrature_degree));
  Vec r = Vec::Zero(mesh.dim0());
  quad_loop(mesh, quadrature_degree,
            [&](const ElementDofs& dofs, int qi, int qj, const MapPoint& mp,
                double w) {
              const double s = w * mp.det * f(mp.x, mp.y);
              const std::vector<double>& hx = table.nodal[qi];
              const std::vector<double>& hy = table.nodal[qj];
              for (int b = 0; b <= p; ++b)
                for (int a = 0; a <= p; ++a)
                  r[dofs.n0[a + (p + 1) * b]] += s * hx[a] * hy[b];
            });
  return r;
}

Vec load_1(const Mesh& mesh, int quadrature_degree, const VectorField& f) {
  const int p = mesh.spec().p;
  const BasisTable table = tabulate_basis(p, gll_rule(quadrature_degree));
  Vec r = Vec::Zero(mesh.dim1());
  quad_loop(mesh, quadrature_degree,
            [&](const ElementDofs& dofs, int qi, int qj, const MapPoint& mp,
                double w) {
              // (J vhat / det) . F * det = (J vhat) . F
              const Eigen::Vector2d t =
                  w * (mp.jacobian.transpose() * f(mp.x, mp.y));
              const std::vector<double>& hx = table.nodal[qi];
              const std::vector<double>& hy = table.nodal[qj];
              const std::vector<double>& ex = table.edge[qi];
              const std::vector<double>& ey = table.edge[qj];
              for (int c = 1; c <= p; ++c)
                for (int a = 0; a <= p; ++a)
                  r[dofs.fx[a + (p + 1) * (c - 1)]] +=
                      hx[a] * ey[c - 1] * t(0);
              for (int b = 0; b <= p; ++b)
                for (int c = 1; c <= p; ++c)
                  r[dofs.fy[(c - 1) + p * b]] += ex[c - 1] * hy[b] * t(1);
            });
  return r;
}

Vec load_2(const Mesh& mesh, int quadrature_degree, const ScalarField& f) {
  const int p = mesh.spec().p;
  const BasisTable table = tabulate_basis(p, gll_rule(quadrature_degree));
  Vec r = Vec::Zero(mesh.dim2());
  quad_loop(mesh, quadrature_degree,
            [&](const ElementDofs& dofs, int qi, int qj, const MapPoint& mp,
                double w) {
              // (ehat/det) * f * det = ehat * f
              const double s = w * f(mp.x, mp.y);
              const std::vector<double>& ex = table.edge[qi];
              const std::vector<double>& ey = table.edge[qj];
              for (int cy = 1; cy <= p; ++cy)
                for (int cx = 1; cx <= p; ++cx)
                  r[dofs.c2[(cx - 1) + p * (cy - 1)]] +=
                      s * ex[cx - 1] * ey[cy - 1];
            });
  return r;
}

Vec l2_project_scalar(const Mesh& mesh, const OperatorSet& ops,
                      const ScalarField& f, int rhs_quadrature_degree) {
  Eigen::SimplicialLDLT<SpMat> solver(ops.M2);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("l2_project_scalar: M2 factorization failed");
  return solver.solve(load_2(mesh, rhs_quadrature_degree, f));
}

double eval_scalar0(const Mesh& mesh, const Vec& omega, int ei, int ej,
                    double xi, double eta) {
  const int p = mesh.spec().p;
  const ElementDofs dofs = element_dofs(mesh, ei, ej);
  std::vector<double> hx, dx, hy, dy;
  nodal_basis(p).eval(xi, hx, dx);
  nodal_basis(p).eval(eta, hy, dy);
  double v = 0.0;
  for (int b = 0; b <= p; ++b)
    for (int a = 0; a <= p; ++a)
      v += omega[dofs.n0[a + (p + 1) * b]] * hx[a] * hy[b];
  return v;
}

Eigen::Vector2d eval_rot0(const Mesh& mesh, const Vec& omega, int ei, int ej,
                          double xi, double eta) {
  const int p = mesh.spec().p;
  const ElementDofs dofs = element_dofs(mesh, ei, ej);
  std::vector<double> hx, dx, hy, dy;
  nodal_basis(p).eval(xi, hx, dx);
  nodal_basis(p).eval(eta, hy, dy);
  double wxi = 0.0, weta = 0.0;
  for (int b = 0; b <= p; ++b) {
    for (int a = 0; a <= p; ++a) {
      const double c = omega[dofs.n0[a + (p + 1) * b]];
      wxi += c * dx[a] * hy[b];
      weta += c * hx[a] * dy[b];
    }
  }
  // rot_hat = (d/deta, -d/dxi); physical rot = J rot_hat / det.
  const MapPoint mp = mesh.map_point(ei, ej, xi, eta);
  return (mp.jacobian * Eigen::Vector2d(weta, -wxi)) / mp.det;
}

Eigen::Vector2d eval_vector1(const Mesh& mesh, const Vec& u, int ei, int ej,
                             double xi, double eta) {
  const int p = mesh.spec().p;
  const ElementDofs dofs = element_dofs(mesh, ei, ej);
  std::vector<double> hx, dx, hy, dy, ex, ey;
  nodal_basis(p).eval(xi, hx, dx);
  nodal_basis(p).eval(eta, hy, dy);
  edge_basis(p).eval(xi, ex);
  edge_basis(p).eval(eta, ey);
  Eigen::Vector2d uhat(0.0, 0.0);
  for (int c = 1; c <= p; ++c)
    for (int a = 0; a <= p; ++a)
      uhat(0) += u[dofs.fx[a + (p + 1) * (c - 1)]] * hx[a] * ey[c - 1];
  for (int b = 0; b <= p; ++b)
    for (int c = 1; c <= p; ++c)
      uhat(1) += u[dofs.fy[(c - 1) + p * b]] * ex[c - 1] * hy[b];
  const MapPoint mp = mesh.map_point(ei, ej, xi, eta);
  return (mp.jacobian * uhat) / mp.det;
}

double eval_scalar2(const Mesh& mesh, const Vec& q, int ei, int ej, double xi,
                    double eta) {
  const int p = mesh.spec().p;
  const ElementDofs dofs = element_dofs(mesh, ei, ej);
  std::vector<double> ex, ey;
  edge_basis(p).eval(xi, ex);
  edge_basis(p).eval(eta, ey);
  double v = 0.0;
  for (int cy = 1; cy <= p; ++cy)
    for (int cx = 1; cx <= p; ++cx)
      v += q[dofs.c2[(cx - 1) + p * (cy - 1)]] * ex[cx - 1] * ey[cy - 1];
  const MapPoint mp = mesh.map_point(ei, ej, xi, eta);
  return v / mp.det;
}

double integrate(const Mesh& mesh, int quadrature_degree,
                 const std::function<double(int, int, double, double, double,
                                            double)>& integrand) {
  const QuadratureRule& rule = gll_rule(quadrature_degree);
  const int nq = rule.num_points();
  double total = 0.0;
  for (int ej = 0; ej < mesh.spec().N; ++ej) {
    for (int ei = 0; ei < mesh.spec().N; ++ei) {
      for (int qj = 0; qj < nq; ++qj) {
        for (int qi = 0; qi < nq; ++qi) {
          const MapPoint mp =
              mesh.map_point(ei, ej, rule.nodes[qi], rule.nodes[qj]);
          total += rule.weights[qi] * rule.weights[qj] * mp.det *
                   integrand(ei, ej, rule.nodes[qi], rule.nodes[qj], mp.x,
                             mp.y);
        }
      }
    }
  }
  return total;
}

}  // namespace vmsns
