#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "vmsns/cases.hpp"
#include "vmsns/vms.hpp"

using namespace vmsns;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Taylor-Green evaluator matches the closed-form values") {
  TGVCase c;
  c.Re = 100.0;
  TGVPoint a = tgv_exact(c, 0.5, 0.0, 0.0);
  CHECK(a.u_x == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(a.u_y == doctest::Approx(0.0).epsilon(1e-14));
  TGVPoint b = tgv_exact(c, 0.5, 0.5, 0.0);
  CHECK(b.omega == doctest::Approx(-2.0 * kPi).epsilon(1e-14));

  // After one time unit every velocity value is its initial value times
  // the decay factor exp(-2 pi^2 / Re) ~ 0.82093.
  const double decay = std::exp(-2.0 * kPi * kPi / c.Re);
  CHECK(decay == doctest::Approx(0.82093).epsilon(1e-4));
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x = dist(gen), y = dist(gen);
    const TGVPoint p0 = tgv_exact(c, x, y, 0.0);
    const TGVPoint p1 = tgv_exact(c, x, y, 1.0);
    CHECK(p1.u_x == doctest::Approx(p0.u_x * decay).epsilon(1e-13));
    CHECK(p1.u_y == doctest::Approx(p0.u_y * decay).epsilon(1e-13));
    CHECK(p1.omega == doctest::Approx(p0.omega * decay).epsilon(1e-13));
    // The pressure decay is the square of the velocity decay.
    CHECK(p1.p == doctest::Approx(p0.p * decay * decay).epsilon(1e-13));
  }
}

TEST_CASE("Taylor-Green evaluator satisfies the analytic identities") {
  TGVCase c;
  c.Re = 40.0;
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_real_distribution<double> tdist(0.0, 2.0);
  double worst_div = 0.0, worst_curl = 0.0, worst_rot = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen), y = dist(gen), t = tdist(gen);
    const TGVPoint v = tgv_exact(c, x, y, t);
    worst_div = std::max(worst_div, std::abs(v.dux_dx + v.duy_dy));
    worst_curl =
        std::max(worst_curl, std::abs(v.omega - (v.duy_dx - v.dux_dy)));
    // Derivatives against central differences.
    const double h = 1e-6;
    const double fd_ox =
        (tgv_exact(c, x + h, y, t).omega - tgv_exact(c, x - h, y, t).omega) /
        (2.0 * h);
    const double fd_oy =
        (tgv_exact(c, x, y + h, t).omega - tgv_exact(c, x, y - h, t).omega) /
        (2.0 * h);
    worst_rot = std::max(worst_rot, std::abs(v.domega_dx - fd_ox) +
                                        std::abs(v.domega_dy - fd_oy));
  }
  CHECK(worst_div < 1e-13);
  CHECK(worst_curl < 1e-13);
  CHECK(worst_rot < 1e-7);
}

TEST_CASE("roll-up initial condition: branch values and continuity") {
  RollupCase c;
  Eigen::Vector2d a = rollup_ic(c, kPi / 2.0, kPi / 2.0);
  CHECK(a.x() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(a.y() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(rollup_ic(c, 0.0, kPi / 2.0).y() == doctest::Approx(0.0));

  // Both branches agree at y = pi (tanh saturated).
  const double lower = std::tanh((kPi - kPi / 2.0) / c.delta);
  const double upper = std::tanh((3.0 * kPi / 2.0 - kPi) / c.delta);
  CHECK(std::abs(lower - upper) < 1e-12);
  for (double x : {0.0, 1.0, 4.0}) {
    CHECK(std::abs(rollup_ic(c, x, kPi).x() -
                   rollup_ic(c, x, kPi + 1e-13).x()) < 1e-12);
  }
}

TEST_CASE("roll-up vorticity is the curl of the initial velocity") {
  RollupCase c;
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * kPi);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double x = dist(gen);
    double y = dist(gen);
    if (std::abs(y - kPi) < 0.05) y += 0.1;  // keep FD stencils one-branch
    const double fd =
        (rollup_ic(c, x + h, y).y() - rollup_ic(c, x - h, y).y()) / (2.0 * h) -
        (rollup_ic(c, x, y + h).x() - rollup_ic(c, x, y - h).x()) / (2.0 * h);
    CHECK(rollup_omega(c, x, y) == doctest::Approx(fd).epsilon(1e-5));
    // rot_omega consistency with FD of the vorticity.
    const Eigen::Vector2d ro = rollup_reference(c).rot_omega(x, y);
    const double fd_oy =
        (rollup_omega(c, x, y + h) - rollup_omega(c, x, y - h)) / (2.0 * h);
    const double fd_ox =
        (rollup_omega(c, x + h, y) - rollup_omega(c, x - h, y)) / (2.0 * h);
    CHECK(ro.x() == doctest::Approx(fd_oy).epsilon(1e-4));
    CHECK(ro.y() == doctest::Approx(-fd_ox).epsilon(1e-4));
  }
}

TEST_CASE("projected roll-up initial condition has zero total vorticity") {
  Mesh mesh = build_mesh(rollup_mesh_spec(4, 2));
  OperatorSet ops = assemble_operators(mesh);
  ProjectedTriple pr = apply_projector(mesh, ops, ProjectorParams{1.0, 0.0},
                                       rollup_reference(RollupCase{}));
  const double W = Vec::Ones(mesh.dim0()).dot(Vec(ops.M0 * pr.omega));
  CHECK(std::abs(W) < 1e-11);
}

TEST_CASE("snapshot files round-trip bit-exactly and reject damage") {
  Mesh mesh = build_mesh(tgv_mesh_spec(2, 2, Mapping::Curvilinear));
  OperatorSet ops = assemble_operators(mesh);
  Snapshot snap;
  snap.spec = mesh.spec();
  ProjectedTriple pr = apply_projector(mesh, ops, ProjectorParams{1.0, 0.0},
                                       tgv_reference(TGVCase{}, 0.0));
  snap.state.omega = pr.omega;
  snap.state.u = pr.u;
  snap.state.P = pr.P;
  snap.state.t = 0.375;

  const std::string path = "test_snapshot.vmsnap";
  write_snapshot(path, snap);
  Snapshot back = read_snapshot(path);
  CHECK(back.spec.N == 2);
  CHECK(back.spec.p == 2);
  CHECK(back.spec.mapping == Mapping::Curvilinear);
  CHECK(back.state.t == snap.state.t);
  CHECK((back.state.omega - snap.state.omega).norm() == 0.0);
  CHECK((back.state.u - snap.state.u).norm() == 0.0);
  CHECK((back.state.P - snap.state.P).norm() == 0.0);

  // Truncation and header damage are clean, typed errors.
  {
    std::ifstream is(path);
    std::string text((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    std::ofstream os("test_snapshot_trunc.vmsnap");
    os << text.substr(0, text.size() / 2);
  }
  CHECK_THROWS_AS(read_snapshot("test_snapshot_trunc.vmsnap"), SnapshotError);
  {
    std::ofstream os("test_snapshot_hdr.vmsnap");
    os << "vmsns-snapshot v2\n";
  }
  CHECK_THROWS_AS(read_snapshot("test_snapshot_hdr.vmsnap"), SnapshotError);
  CHECK_THROWS_AS(read_snapshot("does_not_exist.vmsnap"), SnapshotError);
  std::remove(path.c_str());
  std::remove("test_snapshot_trunc.vmsnap");
  std::remove("test_snapshot_hdr.vmsnap");
}

TEST_CASE("project_reference on the same mesh reproduces the reference") {
  Mesh mesh = build_mesh(rollup_mesh_spec(4, 2));
  OperatorSet ops = assemble_operators(mesh);
  ProjectedTriple pr = apply_projector(mesh, ops, ProjectorParams{1.0, 0.0},
                                       rollup_reference(RollupCase{}));
  FlowState ref;
  ref.omega = pr.omega;
  ref.u = pr.u;
  ref.P = pr.P;
  ReferenceProjection out = project_reference(
      mesh, ref, mesh, ops, ProjectorParams{0.0, 100.0});
  const double scale = pr.omega.norm() + pr.u.norm() + 1.0;
  CHECK((out.coarse.omega - ref.omega).norm() < 1e-11 * scale);
  CHECK((out.coarse.u - ref.u).norm() < 1e-11 * scale);
  CHECK((out.coarse.P - ref.P).norm() < 1e-11 * scale);
  CHECK(out.unresolved.omega.norm() < 1e-11 * scale);
  CHECK(out.unresolved.u.norm() < 1e-11 * scale);
}

TEST_CASE("cross-mesh project_reference: pairings, idempotence, errors") {
  Mesh fine = build_mesh(rollup_mesh_spec(8, 2));
  OperatorSet ops_fine = assemble_operators(fine);
  Mesh coarse = build_mesh(rollup_mesh_spec(4, 2));
  OperatorSet ops_coarse = assemble_operators(coarse);

  ProjectedTriple pr = apply_projector(fine, ops_fine, ProjectorParams{1.0, 0.0},
                                       rollup_reference(RollupCase{}));
  FlowState ref;
  ref.omega = pr.omega;
  ref.u = pr.u;
  ref.P = pr.P;
  const ProjectorParams params{0.0, 100.0};
  ReferenceProjection out =
      project_reference(fine, ref, coarse, ops_coarse, params);

  const double scale = pr.omega.norm() + pr.u.norm() + 1.0;
  // The unresolved remainder is the reference minus the embedded coarse
  // projection.
  Embeddings em = build_embedding_matrices(coarse, fine);
  CHECK((out.unresolved.omega -
         Vec(ref.omega - em.e0 * out.coarse.omega)).norm() < 1e-13 * scale);

  // The coarse total vorticity matches the reference pairing with the
  // constant test function under the composite quadrature.
  const OperatorSet opsq = assemble_operators(fine, fine.spec().p + 3);
  const double W_coarse =
      Vec::Ones(coarse.dim0()).dot(Vec(ops_coarse.M0 * out.coarse.omega));
  const double W_ref = Vec::Ones(fine.dim0()).dot(Vec(opsq.M0 * ref.omega));
  CHECK(W_coarse == doctest::Approx(W_ref).epsilon(1e-11));

  // Idempotence: re-projecting the coarse output onto its own mesh is
  // the identity.
  FlowState again;
  again.omega = out.coarse.omega;
  again.u = out.coarse.u;
  again.P = out.coarse.P;
  ReferenceProjection rep =
      project_reference(coarse, again, coarse, ops_coarse, params);
  CHECK((rep.coarse.omega - again.omega).norm() < 1e-11 * scale);
  CHECK((rep.coarse.u - again.u).norm() < 1e-11 * scale);
  CHECK((rep.coarse.P - again.P).norm() < 1e-11 * scale);

  // Non-nested meshes are rejected.
  Mesh bad = build_mesh(rollup_mesh_spec(3, 2));
  OperatorSet ops_bad = assemble_operators(bad);
  CHECK_THROWS_AS(project_reference(fine, ref, bad, ops_bad, params),
                  std::invalid_argument);
  Mesh other = build_mesh(tgv_mesh_spec(4, 2, Mapping::Orthogonal));
  OperatorSet ops_other = assemble_operators(other);
  CHECK_THROWS_AS(project_reference(fine, ref, other, ops_other, params),
                  std::invalid_argument);
}
