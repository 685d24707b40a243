#include "vmsns/cases.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vmsns/vms.hpp"

namespace vmsns {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TGVPoint tgv_exact(const TGVCase& c, double x, double y, double t) {
  c.validate();
  const double e = std::exp(-2.0 * kPi * kPi * t / c.Re);
  const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
  const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
  TGVPoint out;
  out.u_x = -sx * cy * e;
  out.u_y = cx * sy * e;
  out.omega = -2.0 * kPi * sx * sy * e;
  out.p = 0.25 * (std::cos(2.0 * kPi * x) + std::cos(2.0 * kPi * y)) * e * e;
  out.dux_dx = -kPi * cx * cy * e;
  out.dux_dy = kPi * sx * sy * e;
  out.duy_dx = -kPi * sx * sy * e;
  out.duy_dy = kPi * cx * cy * e;
  out.domega_dx = -2.0 * kPi * kPi * cx * sy * e;
  out.domega_dy = -2.0 * kPi * kPi * sx * cy * e;
  return out;
}

AnalyticReference tgv_reference(const TGVCase& c, double t) {
  c.validate();
  AnalyticReference ref;
  ref.omega = [c, t](double x, double y) { return tgv_exact(c, x, y, t).omega; };
  ref.u = [c, t](double x, double y) {
    const TGVPoint v = tgv_exact(c, x, y, t);
    return Eigen::Vector2d(v.u_x, v.u_y);
  };
  ref.rot_omega = [c, t](double x, double y) {
    const TGVPoint v = tgv_exact(c, x, y, t);
    return Eigen::Vector2d(v.domega_dy, -v.domega_dx);
  };
  ref.pressure = [c, t](double x, double y) {
    const TGVPoint v = tgv_exact(c, x, y, t);
    return v.p + 0.5 * (v.u_x * v.u_x + v.u_y * v.u_y);
  };
  return ref;
}

ExactSolution tgv_exact_solution(const TGVCase& c, double t) {
  c.validate();
  ExactSolution ex;
  ex.rot_omega = [c, t](double x, double y) {
    const TGVPoint v = tgv_exact(c, x, y, t);
    return Eigen::Vector2d(v.domega_dy, -v.domega_dx);
  };
  ex.u = [c, t](double x, double y) {
    const TGVPoint v = tgv_exact(c, x, y, t);
    return Eigen::Vector2d(v.u_x, v.u_y);
  };
  ex.p_static = [c, t](double x, double y) { return tgv_exact(c, x, y, t).p; };
  return ex;
}

MeshSpec tgv_mesh_spec(int N, int p, Mapping mapping) {
  MeshSpec spec;
  spec.N = N;
  spec.p = p;
  spec.mapping = mapping;
  spec.curv_amplitude = 0.1;
  spec.x_lo = -1.0;
  spec.x_hi = 1.0;
  spec.y_lo = -1.0;
  spec.y_hi = 1.0;
  spec.validate();
  return spec;
}

Eigen::Vector2d rollup_ic(const RollupCase& c, double x, double y) {
  const double ux = (y <= kPi) ? std::tanh((y - kPi / 2.0) / c.delta)
                               : std::tanh((3.0 * kPi / 2.0 - y) / c.delta);
  return Eigen::Vector2d(ux, c.eps * std::sin(x));
}

double rollup_omega(const RollupCase& c, double x, double y) {
  const auto sech2 = [](double s) {
    const double ch = std::cosh(s);
    return 1.0 / (ch * ch);
  };
  // On the seam y = pi the two branch formulas differ by twice the
  // saturated tail value; the symmetric representative (their average,
  // zero) keeps quadrature rules with nodes on the seam mirror-exact.
  double shear;
  if (y < kPi)
    shear = -sech2((y - kPi / 2.0) / c.delta) / c.delta;
  else if (y > kPi)
    shear = sech2((3.0 * kPi / 2.0 - y) / c.delta) / c.delta;
  else
    shear = 0.0;
  return c.eps * std::cos(x) + shear;
}

AnalyticReference rollup_reference(const RollupCase& c) {
  AnalyticReference ref;
  ref.omega = [c](double x, double y) { return rollup_omega(c, x, y); };
  ref.u = [c](double x, double y) { return rollup_ic(c, x, y); };
  ref.rot_omega = [c](double x, double y) {
    const auto sech2 = [](double s) {
      const double ch = std::cosh(s);
      return 1.0 / (ch * ch);
    };
    // rot omega = (d omega / dy, -d omega / dx); both tanh branches give
    // the same form of the y-derivative.
    const double s = (y <= kPi) ? (y - kPi / 2.0) / c.delta
                                : (3.0 * kPi / 2.0 - y) / c.delta;
    const double domega_dy =
        2.0 / (c.delta * c.delta) * sech2(s) * std::tanh(s);
    const double domega_dx = -c.eps * std::sin(x);
    return Eigen::Vector2d(domega_dy, -domega_dx);
  };
  return ref;
}

MeshSpec rollup_mesh_spec(int N, int p) {
  MeshSpec spec;
  spec.N = N;
  spec.p = p;
  spec.mapping = Mapping::Orthogonal;
  spec.x_lo = 0.0;
  spec.x_hi = 2.0 * kPi;
  spec.y_lo = 0.0;
  spec.y_hi = 2.0 * kPi;
  spec.validate();
  return spec;
}

namespace {

const char* mapping_name(Mapping m) {
  return m == Mapping::Orthogonal ? "orthogonal" : "curvilinear";
}

void write_values(std::ostream& os, const char* name, const Vec& v) {
  char buf[64];
  os << name << ' ' << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    os << buf << '\n';
  }
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
  snap.spec.validate();
  std::ofstream os(path);
  if (!os) throw SnapshotError("cannot open for writing: " + path);
  char buf[256];
  os << "vmsns-snapshot v1\n";
  os << "N " << snap.spec.N << '\n';
  os << "p " << snap.spec.p << '\n';
  os << "mapping " << mapping_name(snap.spec.mapping) << '\n';
  std::snprintf(buf, sizeof(buf), "curv_amplitude %.17g\n",
                snap.spec.curv_amplitude);
  os << buf;
  std::snprintf(buf, sizeof(buf), "domain %.17g %.17g %.17g %.17g\n",
                snap.spec.x_lo, snap.spec.x_hi, snap.spec.y_lo,
                snap.spec.y_hi);
  os << buf;
  std::snprintf(buf, sizeof(buf), "t %.17g\n", snap.state.t);
  os << buf;
  write_values(os, "omega", snap.state.omega);
  write_values(os, "u", snap.state.u);
  write_values(os, "P", snap.state.P);
  if (!os) throw SnapshotError("write failure: " + path);
}

namespace {

std::string next_line(std::istream& is, const std::string& path) {
  std::string line;
  if (!std::getline(is, line))
    throw SnapshotError("truncated snapshot file: " + path);
  return line;
}

Vec read_values(std::istream& is, const std::string& path, const char* name,
                int expected) {
  std::istringstream head(next_line(is, path));
  std::string key;
  long count = -1;
  if (!(head >> key >> count) || key != name || count != expected)
    throw SnapshotError("snapshot " + path + ": expected array header '" +
                        name + " " + std::to_string(expected) + "'");
  Vec v(expected);
  for (int i = 0; i < expected; ++i) {
    std::istringstream row(next_line(is, path));
    if (!(row >> v[i]))
      throw SnapshotError("snapshot " + path + ": bad value in array '" +
                          std::string(name) + "' at row " + std::to_string(i));
  }
  return v;
}

}  // namespace

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SnapshotError("cannot open snapshot: " + path);
  if (next_line(is, path) != "vmsns-snapshot v1")
    throw SnapshotError("snapshot " + path +
                        ": unsupported format (expected 'vmsns-snapshot v1')");
  Snapshot snap;
  auto scalar_line = [&](const char* name) -> std::string {
    std::istringstream row(next_line(is, path));
    std::string key;
    if (!(row >> key) || key != name)
      throw SnapshotError("snapshot " + path + ": expected field '" +
                          std::string(name) + "'");
    std::string rest;
    std::getline(row, rest);
    return rest;
  };
  auto parse = [&](const std::string& text, const char* name) {
    std::istringstream row(text);
    double v;
    if (!(row >> v))
      throw SnapshotError("snapshot " + path + ": bad numeric value for '" +
                          std::string(name) + "'");
    return v;
  };
  snap.spec.N = static_cast<int>(parse(scalar_line("N"), "N"));
  snap.spec.p = static_cast<int>(parse(scalar_line("p"), "p"));
  {
    std::istringstream row(scalar_line("mapping"));
    std::string kind;
    row >> kind;
    if (kind == "orthogonal")
      snap.spec.mapping = Mapping::Orthogonal;
    else if (kind == "curvilinear")
      snap.spec.mapping = Mapping::Curvilinear;
    else
      throw SnapshotError("snapshot " + path + ": unknown mapping '" + kind +
                          "'");
  }
  snap.spec.curv_amplitude =
      parse(scalar_line("curv_amplitude"), "curv_amplitude");
  {
    std::istringstream row(scalar_line("domain"));
    if (!(row >> snap.spec.x_lo >> snap.spec.x_hi >> snap.spec.y_lo >>
          snap.spec.y_hi))
      throw SnapshotError("snapshot " + path + ": bad domain line");
  }
  snap.state.t = parse(scalar_line("t"), "t");
  try {
    snap.spec.validate();
  } catch (const std::exception& e) {
    throw SnapshotError("snapshot " + path + ": invalid mesh spec: " +
                        e.what());
  }
  const int n = snap.spec.N * snap.spec.p;
  snap.state.omega = read_values(is, path, "omega", n * n);
  snap.state.u = read_values(is, path, "u", 2 * n * n);
  snap.state.P = read_values(is, path, "P", n * n);
  return snap;
}

ReferenceProjection project_reference(const Mesh& fine, const FlowState& ref,
                                      const Mesh& coarse,
                                      const OperatorSet& ops_coarse,
                                      ProjectorParams params) {
  params.validate();
  const MeshSpec& sf = fine.spec();
  const MeshSpec& sc = coarse.spec();
  if (sf.mapping != sc.mapping || sf.x_lo != sc.x_lo || sf.x_hi != sc.x_hi ||
      sf.y_lo != sc.y_lo || sf.y_hi != sc.y_hi ||
      (sf.mapping == Mapping::Curvilinear &&
       sf.curv_amplitude != sc.curv_amplitude))
    throw std::invalid_argument(
        "project_reference: reference and coarse meshes must share the "
        "domain and mapping");
  if (sf.N % sc.N != 0 || sf.p < sc.p)
    throw std::invalid_argument(
        "project_reference: meshes are not nested (reference N must be a "
        "multiple of the coarse N and its degree at least the coarse "
        "degree)");
  if (ref.omega.size() != fine.dim0() || ref.u.size() != fine.dim1() ||
      ref.P.size() != fine.dim2())
    throw std::invalid_argument(
        "project_reference: reference coefficient sizes do not match the "
        "reference mesh");

  ReferenceProjection out;
  if (sf.N == sc.N && sf.p == sc.p) {
    SaddleSolver solver(coarse, ops_coarse, params);
    out.coarse = apply_projector_discrete(solver, coarse, ops_coarse,
                                          ref.omega, ref.u, &ref.P);
    out.unresolved.omega = ref.omega - out.coarse.omega;
    out.unresolved.u = ref.u - out.coarse.u;
    out.unresolved.P = ref.P - out.coarse.P;
    return out;
  }
  if (!(params.a_mass > 0.0))
    throw std::invalid_argument(
        "project_reference: cross-mesh projection requires a positive mass "
        "weight (the harmonic velocity component is otherwise unpinned)");

  // Composite quadrature: assemble the reference-mesh operators with a
  // rule exact for products of the piecewise polynomial integrands, and
  // pair the embedded coarse test functions through them.
  const OperatorSet opsf = assemble_operators(fine, sf.p + 3);
  const Embeddings em = build_embedding_matrices(coarse, fine);
  SaddleSolver solver(coarse, ops_coarse, params);
  const double w = solver.system().w;

  const Vec r0 = w * Vec(em.e0.transpose() *
                         Vec(opsf.M0 * ref.omega - opsf.Wcurl * ref.u));
  const Vec rot_ref = fine.E_curl() * ref.omega;
  const Vec r1 =
      em.e1.transpose() * Vec(-params.a_curl * Vec(opsf.M1 * rot_ref) -
                              params.a_mass * Vec(opsf.M1 * ref.u) +
                              Vec(opsf.Wdiv * ref.P));
  const Vec r2 = em.e2.transpose() * Vec(opsf.Wdiv.transpose() * ref.u);

  out.coarse = solver.solve(r0, r1, r2);

  // Separate L2 projection of the pressure through the same composite
  // pairing (exact best approximation of the piecewise polynomial).
  const SpMat m2c = SpMat(em.e2.transpose() * SpMat(opsf.M2 * em.e2));
  Eigen::SimplicialLDLT<SpMat> ldlt(m2c);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("project_reference: coarse pressure Gram matrix is "
                      "not positive definite");
  out.coarse.P = ldlt.solve(Vec(em.e2.transpose() * Vec(opsf.M2 * ref.P)));

  out.unresolved.omega = ref.omega - em.e0 * out.coarse.omega;
  out.unresolved.u = ref.u - em.e1 * out.coarse.u;
  out.unresolved.P = ref.P - em.e2 * out.coarse.P;
  return out;
}

}  // namespace vmsns
