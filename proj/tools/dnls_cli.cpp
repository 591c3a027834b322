// command-line driver: evolve runs, verification batteries, profile extraction
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnls/config.hpp"
#include "dnls/modified_scattering.hpp"
#include "dnls/propagator.hpp"
#include "dnls/snapshot_io.hpp"
#include "dnls/transform.hpp"
#include "dnls/v_operators.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dnls;

namespace {

struct FlagOverrides {
  std::string config_path;
  double q = 0, lambda = 0, epsilon = 0, l = 0, dt = 0, tmax = 0, beta = 0;
  std::uint64_t n = 0, seed = 0;
  std::string out;
};

void add_common_flags(CLI::App* app, FlagOverrides& f) {
  app->add_option("--config", f.config_path, "configuration file (key=value lines)");
  app->add_option("--q", f.q, "delta coupling strength (> 0)");
  app->add_option("--lambda", f.lambda, "cubic coupling");
  app->add_option("--epsilon", f.epsilon, "initial datum size in the Sigma norm");
  app->add_option("--l", f.l, "half-length of the spatial box");
  app->add_option("--n", f.n, "grid size (power of two)");
  app->add_option("--dt", f.dt, "time step");
  app->add_option("--tmax", f.tmax, "final time");
  app->add_option("--beta", f.beta, "H1-growth monitor exponent");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "profile jitter seed");
}

SimConfig resolve_config(const CLI::App* app, const FlagOverrides& f) {
  SimConfig cfg;
  if (app->count("--config") > 0) cfg = load_config(f.config_path);
  if (app->count("--q") > 0) cfg.q = f.q;
  if (app->count("--lambda") > 0) cfg.lambda = f.lambda;
  if (app->count("--epsilon") > 0) cfg.epsilon = f.epsilon;
  if (app->count("--l") > 0) cfg.L = f.l;
  if (app->count("--n") > 0) cfg.N = static_cast<Eigen::Index>(f.n);
  if (app->count("--dt") > 0) cfg.dt = f.dt;
  if (app->count("--tmax") > 0) cfg.t_max = f.tmax;
  if (app->count("--beta") > 0) cfg.beta = f.beta;
  if (app->count("--seed") > 0) cfg.seed = f.seed;
  if (app->count("--out") > 0) cfg.output_dir = f.out;
  if (const char* env = std::getenv("DNLS_OUT"); env != nullptr && *env != '\0')
    cfg.output_dir = env;
  cfg.validate();
  return cfg;
}

ComplexField gaussian_field(const GridSpec& g, double width = 1.0, double k_mod = 0.0) {
  ComplexField f = ComplexField::zero(g, Space::Position);
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double x = g.x(k);
    f.v[k] = std::exp(-0.5 * x * x / (width * width)) * std::exp(kI * k_mod * x);
  }
  return f;
}

std::string snap_name(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%04zu.bin", i);
  return buf;
}

// log-spaced snapshot schedule plus centered spot triples for the profile-
// equation consistency check
std::vector<double> evolve_schedule(double t_max, double dt) {
  std::vector<double> times = snapshot_times(t_max);
  if (t_max >= 16.0) {
    for (double frac : {0.125, 0.25, 0.5, 0.75, 1.0}) {
      const double tc = std::min(frac * t_max, t_max - 0.5);
      for (double t : {tc - 0.5, tc, tc + 0.5})
        if (t >= 1.0 && t <= t_max) times.push_back(t);
    }
  }
  // snap to the dt grid: partial steps would defeat the cached propagator
  for (double& t : times) t = std::max(1.0, std::round(t / dt)) * dt;
  std::sort(times.begin(), times.end());
  std::vector<double> out;
  for (double t : times) {
    if (!out.empty() && t - out.back() < 0.5 * dt) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<Snapshot> load_run(const fs::path& dir, double* q, double* lambda) {
  std::vector<Snapshot> run;
  for (size_t i = 0;; ++i) {
    const fs::path p = dir / snap_name(i);
    if (!fs::exists(p)) break;
    run.push_back(read_snapshot(p, q, lambda));
  }
  if (run.empty()) throw InsufficientRun("no snapshots found in " + dir.string());
  return run;
}

int run_evolve(const CLI::App* app, const FlagOverrides& f) {
  const SimConfig cfg = resolve_config(app, f);
  fs::create_directories(cfg.output_dir);
  const GridSpec grid = cfg.grid();
  const DistortedTransformPlan plan(grid, cfg.q);
  // keep the data inside the band the box represents faithfully up to t_max:
  // a component at xi reaches the seam at t = L / xi and the line picture ends
  const double xi_cut =
      std::min(0.8 * cfg.L / std::max(cfg.t_max, 1.0), 0.5 * grid.xi_max());
  ComplexField u0 = initial_profile(cfg, grid);
  if (cfg.epsilon > 0.0) {
    u0 = band_prepare(plan, u0, xi_cut);
    u0.v *= cfg.epsilon / norm(u0, Norm::Sigma);
  }
  EvolutionState state = make_state(plan, u0, cfg.lambda);
  save_config(fs::path(cfg.output_dir) / "run.cfg", cfg);

  const std::vector<double> schedule = evolve_schedule(cfg.t_max, cfg.dt);
  std::vector<Snapshot> run;
  const auto wall0 = std::chrono::steady_clock::now();
  for (double target : schedule) {
    const long nsteps = std::lround((target - state.t) / cfg.dt);
    for (long i = 0; i < nsteps; ++i) state = step_strang(std::move(state), cfg.dt);
    run.push_back(take_snapshot(state));
    write_snapshot(fs::path(cfg.output_dir) / snap_name(run.size() - 1), run.back(),
                   cfg.q, cfg.lambda);
    const double el =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    std::printf("t=%10.4f  |u|_inf=%.6e  sqrt(t)|u|_inf=%.6e  |w|_H1=%.6e  [%.1fs]\n",
                state.t, run.back().norms.u_inf,
                std::sqrt(std::max(state.t, 1.0)) * run.back().norms.u_inf,
                run.back().norms.w_h1, el);
    std::fflush(stdout);
  }
  write_index(fs::path(cfg.output_dir) / "index.txt", run);

  std::vector<ObservableRow> rows = observable_rows(run);
  try {
    const GSeries g = accumulate_g(run, cfg.lambda, cfg.q);
    for (size_t i = 1; i < rows.size(); ++i)
      rows[i].g_cauchy_inf = (g.g1[i] - g.g1[i - 1]).cwiseAbs().maxCoeff();
    const ProfileResult prof = extract_profile(run, cfg.lambda, cfg.q, cfg.beta);
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto it = std::find(prof.times.begin(), prof.times.end(), run[i].t);
      if (it != prof.times.end())
        rows[i].residual_vw = prof.residual[it - prof.times.begin()];
    }
    std::vector<double> thm;
    theorem_residual(run, prof.W, cfg.lambda, prof.T / 16.0, prof.T, 0.8, &thm);
    size_t j = 0;
    for (size_t i = 0; i < rows.size(); ++i)
      if (run[i].t >= 1.0 && j < thm.size()) rows[i].residual_thm = thm[j++];
  } catch (const std::exception& e) {
    std::printf("profile columns skipped: %s\n", e.what());
  }
  write_csv(fs::path(cfg.output_dir) / "observables.csv", rows);

  const MonitorReport rep = bound_monitors(run, cfg.epsilon, cfg.beta);
  std::printf("monitors: w_inf/eps=%.3f  <t>^-beta w_H1/eps=%.3f  <t>^1/2 u_inf/eps=%.3f\n",
              rep.w_inf_ratio, rep.w_h1_ratio, rep.u_decay_ratio);
  std::printf("wrote %zu snapshots to %s\n", run.size(), cfg.output_dir.c_str());
  return 0;
}

int run_verify_transform(const CLI::App* app, const FlagOverrides& f) {
  const SimConfig base = resolve_config(app, f);
  const GridSpec grid =
      (app->count("--l") || app->count("--n")) ? base.grid() : GridSpec::make(40.0, 4096);
  int failures = 0;
  for (double q : {0.5, 1.0, 2.0}) {
    if (app->count("--q")) q = base.q;
    const DistortedTransformPlan plan(grid, q);
    const ComplexField phi = gaussian_field(grid, 1.0, 0.7);
    const ComplexField psi = plan.forward(phi);
    const ComplexField back = plan.inverse(psi);
    const double rt = (back.v - phi.v).cwiseAbs().maxCoeff();
    const double l2 = norm(phi, Norm::L2);
    const double uni = std::abs(plan.spectral_l2(psi) - l2) / l2;
    const double null0 = std::abs(psi.v[0]);
    const CVec oracle = plan.forward_oracle(phi.v, grid);
    const CVec fast = plan.forward_raw(phi.v, grid);
    const double ora = (oracle - fast).cwiseAbs().maxCoeff();
    const bool ok = rt < 1e-7 && uni < 1e-8 && null0 < 1e-6 && ora < 1e-7;
    failures += !ok;
    std::printf("q=%4.2f  roundtrip=%.3e  unitarity=%.3e  null0=%.3e  oracle=%.3e  %s\n",
                q, rt, uni, null0, ora, ok ? "ok" : "FAIL");
    if (app->count("--q")) break;
  }
  return failures == 0 ? 0 : 1;
}

int run_verify_vops(const CLI::App* app, const FlagOverrides& f) {
  const SimConfig base = resolve_config(app, f);
  const double q = app->count("--q") ? base.q : 1.0;
  const GridSpec grid = GridSpec::make(40.0, 2048);
  const DistortedTransformPlan plan(grid, q);
  ComplexField psi = gaussian_field(grid, 1.5, 0.3);
  int failures = 0;
  for (double t : {1.0, 10.0, 100.0}) {
    const VApplication fast_app = VApplication::make(t, VMode::FastComposition, plan);
    const VApplication oracle_app = VApplication::make(t, VMode::KernelOracle, plan);
    const ComplexField vf = apply_V(fast_app, psi);
    const ComplexField vo = apply_V(oracle_app, psi);
    const double dv = (vf.v - vo.v).cwiseAbs().maxCoeff();
    const double iso = std::abs(norm(vf, Norm::L2) - norm(psi, Norm::L2)) / norm(psi, Norm::L2);
    const ComplexField wf = apply_Vinv(fast_app, psi);
    const ComplexField wo = apply_Vinv(oracle_app, psi);
    const double dw = (wf.v - wo.v).cwiseAbs().maxCoeff();
    // isometry defect ~ |psi(0)|^2/(2 pi t L) of Fresnel-tail mass leaves the box
    const bool ok = dv < 1e-4 && dw < 1e-4 && iso < 1e-2;
    failures += !ok;
    std::printf("t=%6.1f  |V_fast-V_oracle|=%.3e  |Vinv_fast-Vinv_oracle|=%.3e  isometry=%.3e  %s\n",
                t, dv, dw, iso, ok ? "ok" : "FAIL");
  }
  return failures == 0 ? 0 : 1;
}

int run_extract_profile(const CLI::App* app, const FlagOverrides& f) {
  const SimConfig cfg = resolve_config(app, f);
  double q = cfg.q, lambda = cfg.lambda;
  const std::vector<Snapshot> run = load_run(cfg.output_dir, &q, &lambda);
  const ProfileResult prof = extract_profile(run, lambda, q, cfg.beta);
  const RateFit thm = theorem_residual(run, prof.W, lambda, prof.T / 16.0, prof.T);
  const GSeries g = accumulate_g(run, lambda, q);
  double g_cauchy_last = 0.0;
  if (g.g1.size() >= 2) g_cauchy_last = (g.g1.back() - g.g1[g.g1.size() - 2]).cwiseAbs().maxCoeff();

  json out;
  out["T"] = prof.T;
  out["q"] = q;
  out["lambda"] = lambda;
  out["profile_sup"] = prof.W.v.cwiseAbs().maxCoeff();
  out["residual_slope"] = prof.fit.slope;
  out["residual_points"] = prof.fit.points;
  out["residual_last"] = prof.residual.empty() ? 0.0 : prof.residual.back();
  out["theorem_slope"] = thm.slope;
  out["theorem_points"] = thm.points;
  out["g_cauchy_last"] = g_cauchy_last;
  std::cout << out.dump(2) << "\n";

  std::ofstream wf(fs::path(cfg.output_dir) / "profile.dat");
  for (Eigen::Index k = 0; k < prof.W.grid.N; ++k)
    wf << prof.W.grid.x(k) << " " << std::abs(prof.W.v[k]) << "\n";
  return 0;
}

int run_report(const CLI::App* app, const FlagOverrides& f) {
  const SimConfig cfg = resolve_config(app, f);
  const auto index = read_index(fs::path(cfg.output_dir) / "index.txt");
  const auto emit = [&](const char* name, auto value) {
    std::ofstream os(fs::path(cfg.output_dir) / (std::string("report_") + name + ".dat"));
    os << "# t " << name << "\n";
    for (const auto& [t, n] : index) os << t << " " << value(t, n) << "\n";
  };
  emit("u_inf", [](double, const NormsRecord& n) { return n.u_inf; });
  emit("sqrt_t_u_inf", [](double t, const NormsRecord& n) { return std::sqrt(t) * n.u_inf; });
  emit("w_inf", [](double, const NormsRecord& n) { return n.w_inf; });
  emit("w_h1", [](double, const NormsRecord& n) { return n.w_h1; });
  emit("w_at_zero", [](double, const NormsRecord& n) { return n.w_at_zero_abs; });
  emit("mass", [](double, const NormsRecord& n) { return n.mass; });
  emit("energy", [](double, const NormsRecord& n) { return n.energy; });
  std::printf("wrote 7 gnuplot series for %zu records to %s\n", index.size(),
              cfg.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for the 1d cubic NLS with a repulsive delta potential"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  FlagOverrides fe, fvt, fvv, fep, frp;
  CLI::App* evolve = app.add_subcommand("evolve", "integrate the flow and write snapshots");
  add_common_flags(evolve, fe);
  CLI::App* vt = app.add_subcommand("verify-transform", "transform battery: roundtrip, unitarity, oracle");
  add_common_flags(vt, fvt);
  CLI::App* vv = app.add_subcommand("verify-vops", "V / V^-1 fast paths against the kernel oracle");
  add_common_flags(vv, fvv);
  CLI::App* ep = app.add_subcommand("extract-profile", "profile extraction and residual slopes from a run");
  add_common_flags(ep, fep);
  CLI::App* rp = app.add_subcommand("report", "gnuplot series from a run index");
  add_common_flags(rp, frp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (evolve->parsed()) return run_evolve(evolve, fe);
    if (vt->parsed()) return run_verify_transform(vt, fvt);
    if (vv->parsed()) return run_verify_vops(vv, fvv);
    if (ep->parsed()) return run_extract_profile(ep, fep);
    if (rp->parsed()) return run_report(rp, frp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
