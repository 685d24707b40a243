#include "vmsns/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace vmsns {

namespace {

long step_count(const RunConfig& cfg) {
  const double m_real = cfg.t_final / cfg.dt;
  const long m = std::lround(m_real);
  if (std::abs(m_real - static_cast<double>(m)) > 1e-8)
    throw ConfigError("config: t_final must be an integer multiple of dt");
  return m;
}

DiagnosticsRecord base_record(const Mesh& mesh, const OperatorSet& ops,
                              const Vec& omega, const Vec& u) {
  DiagnosticsRecord rec;
  const ConservedQuantities cq = conserved_quantities(mesh, ops, omega, u);
  rec.K_total = cq.K;
  rec.E_total = cq.E;
  rec.W_total = cq.W;
  rec.P_pal = cq.Ppal;
  return rec;
}

}  // namespace

MeshSpec config_mesh_spec(const RunConfig& cfg) {
  MeshSpec spec = cfg.case_kind == CaseKind::Tgv
                      ? tgv_mesh_spec(cfg.N, cfg.p, cfg.mapping)
                      : rollup_mesh_spec(cfg.N, cfg.p);
  if (cfg.case_kind == CaseKind::Rollup) spec.mapping = cfg.mapping;
  spec.curv_amplitude = cfg.curv_amplitude;
  return spec;
}

AnalyticReference case_reference(const RunConfig& cfg, double t) {
  if (cfg.case_kind == CaseKind::Tgv) {
    TGVCase c;
    c.Re = cfg.Re;
    return tgv_reference(c, t);
  }
  return rollup_reference(RollupCase{});
}

FlowState case_initial_state(const Mesh& mesh, const OperatorSet& ops,
                             const RunConfig& cfg) {
  const ProjectedTriple pr = apply_projector(
      mesh, ops, ProjectorParams{1.0, 0.0}, case_reference(cfg, 0.0));
  FlowState s;
  s.omega = pr.omega;
  s.u = pr.u;
  s.P = pr.P;
  s.t = 0.0;
  return s;
}

StepControls step_controls(const RunConfig& cfg) {
  StepControls ctl;
  ctl.dt = cfg.dt;
  ctl.Re = cfg.Re;
  ctl.picard_tol = cfg.picard_tol;
  ctl.picard_max = cfg.picard_max;
  ctl.validate();
  return ctl;
}

GalerkinRun run_galerkin(const RunConfig& cfg, const DumpHook& hook) {
  cfg.validate();
  const long m = step_count(cfg);
  GalerkinRun out{build_mesh(config_mesh_spec(cfg)), {}, {}, {}};
  out.ops = assemble_operators(out.mesh);
  const StepControls ctl = step_controls(cfg);
  GalerkinStepper stepper(out.mesh, out.ops, ctl);
  FlowState state = case_initial_state(out.mesh, out.ops, cfg);

  DiagnosticsRecord rec = base_record(out.mesh, out.ops, state.omega, state.u);
  rec.K_coarse = rec.K_total;
  rec.div_res_coarse =
      Vec(out.mesh.E_div() * state.u).lpNorm<Eigen::Infinity>();
  out.diag.push_back(rec);
  if (hook) hook(state.t, out.mesh, state.omega, state.u, state.P);

  for (long s = 0; s < m; ++s) {
    StepResult r = stepper.step(state);
    rec = base_record(out.mesh, out.ops, r.state.omega, r.state.u);
    rec.step = s + 1;
    rec.t = r.state.t;
    rec.K_coarse = rec.K_total;
    rec.div_res_coarse =
        Vec(out.mesh.E_div() * r.state.u).lpNorm<Eigen::Infinity>();
    rec.picard_iters = r.picard_iters;
    rec.energy_balance_res = energy_balance_audit(
        out.ops, state.omega, state.u, r.state.omega, r.state.u, ctl);
    out.diag.push_back(rec);
    state = std::move(r.state);
    if (hook) hook(state.t, out.mesh, state.omega, state.u, state.P);
  }
  out.final = std::move(state);
  return out;
}

VmsRun run_vms(const RunConfig& cfg, const DumpHook& hook) {
  cfg.validate();
  const long m = step_count(cfg);
  VmsRun out{build_scale_pair(config_mesh_spec(cfg), cfg.k), {}, {}};
  const ScalePair& pair = out.pair;
  const StepControls ctl = step_controls(cfg);
  VmsStepper stepper(pair, ctl);
  // k = 0 keeps the coarse-space initial state so the run matches the
  // Galerkin stepper bit for bit; otherwise the initial data is prepared
  // in the fine space (same Stokes projection as a fine-mesh Galerkin
  // run) and split into its pair-orthogonal scale components. Starting
  // the fine scales at zero instead would perturb the trajectory by the
  // unresolved content of the initial condition, a coarse-space-sized
  // offset that no fine-space refinement can remove.
  SplitState state;
  if (cfg.k == 0) {
    const OperatorSet ops_c = assemble_operators(pair.coarse);
    state = split_from_coarse(pair, case_initial_state(pair.coarse, ops_c, cfg));
  } else {
    state = split_from_fine(
        pair, ctl.params(), case_initial_state(pair.fine, pair.ops_fine, cfg));
  }

  auto record = [&](const SplitState& s) {
    const Vec wt = total_omega(pair, s);
    const Vec ut = total_u(pair, s);
    DiagnosticsRecord rec = base_record(pair.fine, pair.ops_fine, wt, ut);
    rec.K_coarse =
        0.5 * s.coarse.u.dot(Vec(pair.ops_coarse.M1 * s.coarse.u));
    rec.K_fine = 0.5 * s.fine.u.dot(Vec(pair.ops_fine.M1 * s.fine.u));
    rec.div_res_coarse =
        Vec(pair.coarse.E_div() * s.coarse.u).lpNorm<Eigen::Infinity>();
    rec.div_res_fine =
        Vec(pair.fine.E_div() * s.fine.u).lpNorm<Eigen::Infinity>();
    return rec;
  };
  auto dump = [&](const SplitState& s) {
    if (hook)
      hook(s.t(), pair.fine, total_omega(pair, s), total_u(pair, s),
           total_P(pair, s));
  };

  out.diag.push_back(record(state));
  dump(state);
  for (long s = 0; s < m; ++s) {
    VmsStepResult r = stepper.step(state);
    DiagnosticsRecord rec = record(r.state);
    rec.step = s + 1;
    rec.t = r.state.t();
    rec.picard_iters = r.picard_iters;
    rec.energy_balance_res =
        vms_energy_balance_residual(pair, state, r.state, ctl);
    out.diag.push_back(rec);
    state = std::move(r.state);
    dump(state);
  }
  out.final = std::move(state);
  return out;
}

TgvSweepRow tgv_run_row(const RunConfig& cfg) {
  if (cfg.case_kind != CaseKind::Tgv)
    throw ConfigError("config: the convergence study requires case = tgv");
  TGVCase c;
  c.Re = cfg.Re;
  const ExactSolution exact = tgv_exact_solution(c, cfg.t_final);
  // The time stepper's pressure is a midpoint quantity; the stepped modes
  // compare it against the exact static pressure at t_final - dt/2.
  ExactSolution exact_step = exact;
  exact_step.p_static =
      tgv_exact_solution(c, cfg.t_final - 0.5 * cfg.dt).p_static;
  const StepControls ctl = step_controls(cfg);

  TgvSweepRow row;
  row.N = cfg.N;
  row.p = cfg.p;
  row.k = cfg.mode == RunMode::Vms ? cfg.k : 0;
  auto scan_diag = [&row](const std::vector<DiagnosticsRecord>& diag) {
    for (size_t i = 1; i < diag.size(); ++i) {
      row.max_picard = std::max(row.max_picard, diag[i].picard_iters);
      row.max_energy_res =
          std::max(row.max_energy_res, diag[i].energy_balance_res);
    }
  };

  switch (cfg.mode) {
    case RunMode::Galerkin: {
      row.mode = "galerkin";
      GalerkinRun r = run_galerkin(cfg);
      row.err = error_norms(r.mesh, r.final.omega, r.final.u, r.final.P,
                            exact_step);
      scan_diag(r.diag);
      break;
    }
    case RunMode::ProjectOnly: {
      row.mode = "projection";
      Mesh mesh = build_mesh(config_mesh_spec(cfg));
      OperatorSet ops = assemble_operators(mesh);
      const ProjectedTriple pr = apply_projector(
          mesh, ops, ctl.params(), tgv_reference(c, cfg.t_final));
      row.err = error_norms(mesh, pr.omega, pr.u, pr.P, exact);
      break;
    }
    case RunMode::Vms: {
      row.mode = "vms";
      VmsRun r = run_vms(cfg);
      const ScalePair& pair = r.pair;
      const FlowState& cs = r.final.coarse;
      row.err = error_norms(pair.coarse, cs.omega, cs.u, cs.P, exact_step);
      scan_diag(r.diag);

      // Optimal projection of the exact solution onto the coarse space
      // and onto the fine space; their difference embedded in the fine
      // space is the exact unresolved field. The coarse projection uses
      // the pair's restricted operators so the target is the one the
      // two-scale dynamics actually see.
      const ProjectedTriple proj_c =
          apply_projector(pair.coarse, pair.ops_coarse, ctl.params(),
                          tgv_reference(c, cfg.t_final));
      row.err_proj = discrete_error_norms(pair.coarse, cs.omega, cs.u, cs.P,
                                          proj_c.omega, proj_c.u, proj_c.P);
      const ProjectedTriple proj_f =
          apply_projector(pair.fine, pair.ops_fine, ctl.params(),
                          tgv_reference(c, cfg.t_final));
      const Vec wp = proj_f.omega - pair.embed.e0 * proj_c.omega;
      const Vec up = proj_f.u - pair.embed.e1 * proj_c.u;
      const Vec Pp = proj_f.P - pair.embed.e2 * proj_c.P;
      row.err_prime =
          discrete_error_norms(pair.fine, r.final.fine.omega, r.final.fine.u,
                               r.final.fine.P, wp, up, Pp);
      break;
    }
  }
  return row;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_diag_csv(const std::string& path,
                    const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  os << "step,t,K_total,K_coarse,K_fine,E_total,W_total,P_pal,"
        "div_res_coarse,div_res_fine,picard_iters,energy_balance_res\n";
  for (const DiagnosticsRecord& r : rows) {
    os << r.step << ',' << format17(r.t) << ',' << format17(r.K_total) << ','
       << format17(r.K_coarse) << ',' << format17(r.K_fine) << ','
       << format17(r.E_total) << ',' << format17(r.W_total) << ','
       << format17(r.P_pal) << ',' << format17(r.div_res_coarse) << ','
       << format17(r.div_res_fine) << ',' << r.picard_iters << ','
       << format17(r.energy_balance_res) << '\n';
  }
  if (!os) throw std::ios_base::failure("write failure: " + path);
}

void write_fields_csv(const std::string& path, const Mesh& mesh,
                      const Vec& omega, const Vec& u, const Vec& P,
                      int density) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  os << "x,y,omega,u_x,u_y,P\n";
  const int N = mesh.spec().N;
  for (int ej = 0; ej < N; ++ej)
    for (int ei = 0; ei < N; ++ei)
      for (int j = 0; j <= density; ++j)
        for (int i = 0; i <= density; ++i) {
          const double xi = -1.0 + 2.0 * i / density;
          const double eta = -1.0 + 2.0 * j / density;
          const MapPoint mp = mesh.map_point(ei, ej, xi, eta);
          const double w = eval_scalar0(mesh, omega, ei, ej, xi, eta);
          const Eigen::Vector2d v = eval_vector1(mesh, u, ei, ej, xi, eta);
          const double q = eval_scalar2(mesh, P, ei, ej, xi, eta);
          os << format17(mp.x) << ',' << format17(mp.y) << ',' << format17(w)
             << ',' << format17(v.x()) << ',' << format17(v.y()) << ','
             << format17(q) << '\n';
        }
  if (!os) throw std::ios_base::failure("write failure: " + path);
}

std::string fields_filename(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "fields_t%g.csv", t);
  return buf;
}

namespace {

namespace fs = std::filesystem;

void prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec)
    throw std::ios_base::failure("cannot create output directory '" +
                                 cfg.out_dir + "': " + ec.message());
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

bool is_dump_time(const RunConfig& cfg, double t) {
  for (double td : cfg.dump_times)
    if (std::abs(t - td) < 1e-6 * cfg.dt) return true;
  return false;
}

}  // namespace

void cmd_run(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.mode == RunMode::ProjectOnly) {
    cmd_project(cfg);
    return;
  }
  prepare_out_dir(cfg);
  DumpHook hook = [&](double t, const Mesh& mesh, const Vec& omega,
                      const Vec& u, const Vec& P) {
    if (!is_dump_time(cfg, t)) return;
    write_fields_csv(out_path(cfg, fields_filename(t)), mesh, omega, u, P,
                     cfg.dump_density);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "snapshot_t%g.vmsnap", t);
    Snapshot snap;
    snap.spec = mesh.spec();
    snap.state = FlowState{omega, u, P, t};
    write_snapshot(out_path(cfg, buf), snap);
  };

  Snapshot final_snap;
  if (cfg.mode == RunMode::Galerkin) {
    GalerkinRun r = run_galerkin(cfg, hook);
    write_diag_csv(out_path(cfg, "diag.csv"), r.diag);
    final_snap.spec = r.mesh.spec();
    final_snap.state = r.final;
  } else {
    VmsRun r = run_vms(cfg, hook);
    write_diag_csv(out_path(cfg, "diag.csv"), r.diag);
    final_snap.spec = r.pair.fine.spec();
    final_snap.state = FlowState{total_omega(r.pair, r.final),
                                 total_u(r.pair, r.final),
                                 total_P(r.pair, r.final), r.final.t()};
  }
  write_snapshot(out_path(cfg, "final.vmsnap"), final_snap);
}

void cmd_tgv_converge(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.case_kind != CaseKind::Tgv)
    throw ConfigError("config: tgv-converge requires case = tgv");
  if (cfg.sweep_N.empty() && cfg.sweep_k.empty())
    throw ConfigError("config: tgv-converge requires sweep_N or sweep_k");
  prepare_out_dir(cfg);

  if (!cfg.sweep_N.empty()) {
    std::ofstream os(out_path(cfg, "tgv_h.csv"));
    if (!os) throw std::ios_base::failure("cannot open tgv_h.csv");
    os << "N,p,k,mode,e_omega,e_u,e_p,order_local\n";
    double prev_e = 0.0;
    int prev_N = 0;
    for (int N : cfg.sweep_N) {
      RunConfig one = cfg;
      one.N = N;
      const TgvSweepRow row = tgv_run_row(one);
      os << row.N << ',' << row.p << ',' << row.k << ',' << row.mode << ','
         << format17(row.err.e_omega) << ',' << format17(row.err.e_u) << ','
         << format17(row.err.e_p) << ',';
      if (prev_N > 0 && row.err.e_omega > 0.0 && prev_e > 0.0)
        os << format17(std::log(prev_e / row.err.e_omega) /
                       std::log(static_cast<double>(N) / prev_N));
      os << '\n';
      prev_e = row.err.e_omega;
      prev_N = N;
    }
    if (!os) throw std::ios_base::failure("write failure: tgv_h.csv");
  }

  if (!cfg.sweep_k.empty()) {
    std::ofstream os(out_path(cfg, "tgv_k.csv"));
    std::ofstream osp(out_path(cfg, "tgv_k_proj.csv"));
    std::ofstream osu(out_path(cfg, "tgv_k_prime.csv"));
    if (!os || !osp || !osu)
      throw std::ios_base::failure("cannot open k-study CSVs");
    os << "N,p,k,mode,e_omega,e_u,e_p,order_local\n";
    osp << "N,p,k,mode,e_omega,e_u,e_p\n";
    osu << "N,p,k,mode,e_omega,e_u,e_p\n";
    double prev_e = 0.0;
    bool first = true;
    for (int k : cfg.sweep_k) {
      RunConfig one = cfg;
      one.mode = RunMode::Vms;  // the k-study is a two-scale study
      one.k = k;
      const TgvSweepRow row = tgv_run_row(one);
      os << row.N << ',' << row.p << ',' << row.k << ',' << row.mode << ','
         << format17(row.err.e_omega) << ',' << format17(row.err.e_u) << ','
         << format17(row.err.e_p) << ',';
      if (!first && row.err_proj.e_omega > 0.0 && prev_e > 0.0)
        os << format17(std::log2(prev_e / row.err_proj.e_omega));
      os << '\n';
      osp << row.N << ',' << row.p << ',' << row.k << ',' << row.mode << ','
          << format17(row.err_proj.e_omega) << ','
          << format17(row.err_proj.e_u) << ',' << format17(row.err_proj.e_p)
          << '\n';
      osu << row.N << ',' << row.p << ',' << row.k << ',' << row.mode << ','
          << format17(row.err_prime.e_omega) << ','
          << format17(row.err_prime.e_u) << ',' << format17(row.err_prime.e_p)
          << '\n';
      prev_e = row.err_proj.e_omega;
      first = false;
    }
    if (!os || !osp || !osu)
      throw std::ios_base::failure("write failure: k-study CSVs");
  }
}

void cmd_project(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.reference.empty())
    throw ConfigError("config: project requires a reference snapshot path");
  prepare_out_dir(cfg);
  const Snapshot snap = read_snapshot(cfg.reference);
  Mesh fine = build_mesh(snap.spec);
  MeshSpec coarse_spec = snap.spec;
  coarse_spec.N = cfg.N;
  coarse_spec.p = cfg.p;
  coarse_spec.validate();
  Mesh coarse = build_mesh(coarse_spec);
  OperatorSet ops_c = assemble_operators(coarse);
  const ProjectorParams params = step_controls(cfg).params();
  const ReferenceProjection out =
      project_reference(fine, snap.state, coarse, ops_c, params);

  char buf[64];
  std::snprintf(buf, sizeof(buf), "fields_coarse_t%g.csv", snap.state.t);
  write_fields_csv(out_path(cfg, buf), coarse, out.coarse.omega, out.coarse.u,
                   out.coarse.P, cfg.dump_density);
  std::snprintf(buf, sizeof(buf), "fields_unresolved_t%g.csv", snap.state.t);
  write_fields_csv(out_path(cfg, buf), fine, out.unresolved.omega,
                   out.unresolved.u, out.unresolved.P, cfg.dump_density);
  Snapshot proj;
  proj.spec = coarse_spec;
  proj.state =
      FlowState{out.coarse.omega, out.coarse.u, out.coarse.P, snap.state.t};
  write_snapshot(out_path(cfg, "projected.vmsnap"), proj);
}

}  // namespace vmsns
