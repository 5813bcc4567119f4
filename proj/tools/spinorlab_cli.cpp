#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "spinorlab/algebra.hpp"
#include "spinorlab/config.hpp"
#include "spinorlab/estimates.hpp"
#include "spinorlab/evolution.hpp"
#include "spinorlab/illposed.hpp"
#include "spinorlab/multiplier.hpp"
#include "spinorlab/rng.hpp"

namespace fs = std::filesystem;
using namespace spinorlab;

namespace {

Report base_report(const std::string& suite, const RunConfig& cfg) {
  Report rep;
  rep.suite = suite;
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.getu("sweep.seed");
  rep.version = kVersion;
  return rep;
}

Report run_verify_algebra(const RunConfig& cfg) {
  Report rep = base_report("verify-algebra", cfg);
  const DiracMatrices& dm = dirac_matrices();
  const Mat4 I = Mat4::Identity();
  double anti = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Mat4 s = dm.alpha[i] * dm.alpha[j] + dm.alpha[j] * dm.alpha[i];
      anti = std::max(anti, operator_norm(s - (i == j ? 2.0 : 0.0) * I));
    }
    anti = std::max(anti,
                    operator_norm(dm.alpha[i] * dm.beta + dm.beta * dm.alpha[i]));
  }
  anti = std::max(anti, operator_norm(dm.beta * dm.beta - I));

  GaussianRng rng(cfg.getu("sweep.seed"));
  double idem = 0, comp = 0, symb = 0, unit = 0, group = 0, betac = 0;
  for (int it = 0; it < 10000; ++it) {
    const double m = (it % 2 == 0) ? 0.0 : 1.0 + rng.uniform();
    Vec3 xi(rng.gaussian(), rng.gaussian(), rng.gaussian());
    xi *= std::pow(2.0, 6.0 * rng.uniform() - 3.0);
    const FrequencyPoint p{xi, m};
    const Mat4 pp = projector(p, Sign::plus);
    const Mat4 pm = projector(p, Sign::minus);
    idem = std::max({idem, operator_norm(pp * pp - pp),
                     operator_norm(pm * pm - pm), operator_norm(pp * pm)});
    comp = std::max(comp, operator_norm(pp + pm - I));
    symb = std::max(symb,
                    operator_norm(dirac_symbol(p) - bracket(p) * (pp - pm)));
    betac = std::max({betac, beta_commutation_residual(p, Sign::plus),
                      beta_commutation_residual(p, Sign::minus)});
    const double t = 2.0 * rng.uniform() - 1.0;
    const double s = 2.0 * rng.uniform() - 1.0;
    const Mat4 ut = propagator_symbol(t, p);
    unit = std::max(unit, operator_norm(ut.adjoint() * ut - I));
    group = std::max(group, operator_norm(propagator_symbol(t + s, p) -
                                          ut * propagator_symbol(s, p)));
  }
  rep.values = {{"anticommutation_residual", anti},
                {"projector_idempotency_residual", idem},
                {"projector_completeness_residual", comp},
                {"symbol_identity_residual", symb},
                {"beta_commutation_residual", betac},
                {"propagator_unitarity_residual", unit},
                {"propagator_group_law_residual", group}};
  rep.checks = {{"anticommutation", anti <= 1e-12},
                {"projector_idempotency", idem <= 1e-12},
                {"projector_completeness", comp <= 1e-12},
                {"symbol_identity", symb <= 1e-12},
                {"beta_commutation", betac <= 1e-12},
                {"propagator_unitarity", unit <= 1e-12},
                {"propagator_group_law", group <= 1e-10}};
  return rep;
}

Report run_sweep_strichartz(const RunConfig& cfg, const fs::path& dir) {
  Report rep = base_report("sweep-strichartz", cfg);
  const BoxGrid grid = grid_from(cfg);
  const double p = cfg.getd("sweep.p"), q = cfg.getd("sweep.q");
  const double m = cfg.getd("mass");
  std::vector<SweepPoint> pts;
  std::vector<std::pair<double, double>> fitpts;
  for (int k = cfg.geti("sweep.kmin"); k <= cfg.geti("sweep.kmax"); ++k) {
    SweepPoint pt = strichartz_ratio(grid, k, p, q, m, cfg.geti("sweep.trials"),
                                     GaussianRng::derive(cfg.getu("sweep.seed"), k),
                                     cfg.geti("sweep.slices"));
    fitpts.emplace_back(std::ldexp(1.0, k), pt.measured);
    pts.push_back(pt);
  }
  write_sweep_csv((dir / "strichartz.csv").string(), pts);
  bool positive = true;
  for (const auto& pt : pts) positive = positive && pt.measured > 0;
  rep.checks = {{"measured_positive", positive}};
  if (fitpts.size() >= 3) {
    const ExponentFit fit = fit_exponent(fitpts);
    rep.values = {{"slope", fit.slope}, {"residual", fit.residual}};
    const double target = 1.25 * (0.5 - 1.0 / q);
    rep.checks.emplace_back("slope_within_loss", fit.slope <= target + 0.1);
  }
  return rep;
}

Report run_sweep_local(const RunConfig& cfg, const fs::path& dir) {
  Report rep = base_report("sweep-local", cfg);
  const BoxGrid grid = grid_from(cfg);
  const double p = cfg.getd("sweep.p");
  const double m = cfg.getd("mass");
  std::vector<SweepPoint> pts;
  for (int k = cfg.geti("sweep.kmin"); k <= cfg.geti("sweep.kmax"); ++k)
    for (int kp = std::max(0, k - 2); kp <= k; ++kp)
      pts.push_back(localized_strichartz_ratio(
          grid, k, kp, p, m, cfg.geti("sweep.trials"),
          GaussianRng::derive(cfg.getu("sweep.seed"), 64 * k + kp),
          cfg.geti("sweep.slices")));
  write_sweep_csv((dir / "local.csv").string(), pts);
  double rmin = 1e300, rmax = 0.0;
  for (const auto& pt : pts) {
    rmin = std::min(rmin, pt.ratio);
    rmax = std::max(rmax, pt.ratio);
  }
  rep.values = {{"ratio_min", rmin}, {"ratio_max", rmax},
                {"ratio_spread", rmax / rmin}};
  rep.checks = {{"ratios_positive", rmin > 0 && std::isfinite(rmax)}};
  return rep;
}

Report run_sweep_bilinear(const RunConfig& cfg, const fs::path& dir) {
  Report rep = base_report("sweep-bilinear", cfg);
  const BoxGrid grid = grid_from(cfg);
  const double m = cfg.getd("mass");
  const Sign t1 = cfg.geti("sweep.theta1") >= 0 ? Sign::plus : Sign::minus;
  const Sign t2 = cfg.geti("sweep.theta2") >= 0 ? Sign::plus : Sign::minus;
  std::vector<SweepPoint> pts;
  std::vector<std::pair<double, double>> fitpts;
  for (int k = cfg.geti("sweep.kmin"); k <= cfg.geti("sweep.kmax"); ++k) {
    SweepPoint pt = bilinear_ratio(grid, k, cfg.geti("sweep.k1"),
                                   cfg.geti("sweep.k2"), t1, t2, m,
                                   cfg.geti("sweep.trials"),
                                   GaussianRng::derive(cfg.getu("sweep.seed"), k),
                                   cfg.geti("sweep.slices"));
    fitpts.emplace_back(std::ldexp(1.0, k), pt.measured);
    pts.push_back(pt);
  }
  write_sweep_csv((dir / "bilinear.csv").string(), pts);
  bool positive = true;
  for (const auto& pt : pts) positive = positive && pt.measured > 0;
  rep.checks = {{"measured_positive", positive}};
  if (fitpts.size() >= 3) {
    const ExponentFit fit = fit_exponent(fitpts);
    rep.values = {{"slope", fit.slope}, {"residual", fit.residual}};
  }
  return rep;
}

// Pi_+-range Gaussian wave packet centered at frequency freq * e3, normalized
// to the requested H^s size.
SpinorField packet_data(const BoxGrid& grid, double m, double s, double freq,
                        double sigma, double amplitude) {
  SpinorField f = make_field(grid, Representation::fourier);
  const Vec3 center(0, 0, freq);
  for (int ix = 0; ix < grid.n; ++ix)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int iz = 0; iz < grid.n; ++iz) {
        const Vec3 xi = grid.frequency(ix, iy, iz);
        const double w =
            std::exp(-0.5 * sigma * sigma * (xi - center).squaredNorm());
        if (w < 1e-14) continue;
        const double b = std::sqrt(m * m + xi.squaredNorm());
        if (b == 0.0) continue;
        Spinor v = Spinor::Zero();
        v[0] = w;
        v = projector(FrequencyPoint{xi, m}, Sign::plus) * v;
        const std::size_t idx = grid.flat(ix, iy, iz);
        for (int c = 0; c < 4; ++c) f.at(c, idx) = v[c];
      }
  const double nrm = sobolev_norm(f, s, m);
  if (nrm > 0)
    for (Complex& z : f.data) z *= amplitude / nrm;
  return f;
}

Report run_solve(const RunConfig& cfg, const fs::path& dir, bool snapshots) {
  Report rep = base_report("solve", cfg);
  const BoxGrid grid = grid_from(cfg);
  const EvolutionConfig ecfg = evolution_from(cfg);
  SpinorField psi0 =
      packet_data(grid, ecfg.m, ecfg.s, cfg.getd("data.freq"),
                  cfg.getd("data.sigma"), cfg.getd("data.amplitude"));
  const SolveResult res = solve(psi0, ecfg);
  const ScatteringReport sc = scattering_profile(res.traj, ecfg);

  std::ofstream csv(dir / "solve.csv", std::ios::binary);
  csv << "t,charge,sobolev_s,scatter_gap\n";
  std::size_t rec = 0;
  for (std::size_t j = 0; j < res.step_times.size(); ++j) {
    double gap = 0.0;
    if (rec < res.traj.times.size() &&
        res.step_times[j] == res.traj.times[rec]) {
      if (rec > 0) gap = sc.gap_plus[rec - 1] + sc.gap_minus[rec - 1];
      if (snapshots) {
        char name[32];
        std::snprintf(name, sizeof(name), "field_%04zu.spnf", rec);
        save_field(res.traj.fields[rec], (dir / name).string());
      }
      ++rec;
    }
    csv << format_double(res.step_times[j]) << ','
        << format_double(res.charge_series[j]) << ','
        << format_double(res.sobolev_series[j]) << ',' << format_double(gap)
        << '\n';
  }
  double drift = 0.0;
  const double q0 = res.charge_series.front();
  for (double q : res.charge_series)
    drift = std::max(drift, std::abs(q - q0) / std::max(q0, 1e-300));
  rep.values = {{"charge_drift_rel", drift},
                {"final_sobolev", res.sobolev_series.back()}};
  rep.checks = {{"charge_conserved", drift <= 1e-8}};
  rep.notes = {{"scatter_verdict", sc.verdict}};
  return rep;
}

Report run_illposed(const RunConfig& cfg, const fs::path& dir) {
  Report rep = base_report("illposed", cfg);
  const PotentialSpec pot = potential_from(cfg);
  const WitnessReport wit = run_witness(
      cfg.get_list("illposed.lams"), cfg.getd("illposed.eps"), pot,
      cfg.getd("illposed.m"), cfg.geti("illposed.samples"),
      cfg.getu("sweep.seed"));
  std::ofstream csv(dir / "illposed.csv", std::ios::binary);
  csv << "lam,n_abs,n_se,kernel_min_re\n";
  bool positive = true, kernel_pos = true;
  for (std::size_t i = 0; i < wit.lams.size(); ++i) {
    csv << format_double(wit.lams[i]) << ',' << format_double(wit.n_abs[i])
        << ',' << format_double(wit.n_se[i]) << ','
        << format_double(wit.kernel_min_re[i]) << '\n';
    positive = positive && wit.n_abs[i] > 0;
    kernel_pos = kernel_pos && wit.kernel_min_re[i] > 0;
  }
  const std::string verdict =
      supercritical_verdict(wit, cfg.getd("illposed.s"));
  rep.values = {{"fitted_exponent", wit.fitted_exponent}};
  rep.checks = {{"n_positive", positive}, {"kernel_re_positive", kernel_pos}};
  rep.notes = {{"verdict", verdict}};
  return rep;
}

Report run_report(const RunConfig& cfg, const fs::path& dir) {
  Report rep = base_report("report", cfg);
  std::vector<fs::path> files;
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json" && e.path().filename() != "report.json")
        files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    in >> j;
    rep.checks.emplace_back(j.value("suite", f.stem().string()),
                            j.value("pass", false));
  }
  rep.notes = {{"suites_found", std::to_string(files.size())}};
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral verification lab for the cubic Hartree Dirac system"};
  app.require_subcommand(1);
  std::string config_path, out_dir, seed_str;
  int threads = 0;
  bool snapshots = false;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--seed", seed_str, "override sweep.seed");
  app.add_option("--threads", threads, "worker thread budget (informational)");
  app.add_option("--out", out_dir, "override output.dir");

  const std::vector<std::string> suites = {
      "verify-algebra", "sweep-strichartz", "sweep-local",
      "sweep-bilinear", "solve",            "illposed",
      "report"};
  for (const auto& s : suites) {
    CLI::App* sub = app.add_subcommand(s);
    if (s == "solve")
      sub->add_flag("--snapshots", snapshots, "write binary field snapshots");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg =
        config_path.empty() ? default_config() : parse_config_file(config_path);
    apply_env_overrides(cfg);
    if (!seed_str.empty()) set_key(cfg, "sweep.seed", seed_str);
    if (!out_dir.empty()) set_key(cfg, "output.dir", out_dir);
    validate(cfg);
    const fs::path dir = cfg.gets("output.dir");
    fs::create_directories(dir);

    const std::string suite = app.get_subcommands().front()->get_name();
    Report rep;
    if (suite == "verify-algebra") rep = run_verify_algebra(cfg);
    else if (suite == "sweep-strichartz") rep = run_sweep_strichartz(cfg, dir);
    else if (suite == "sweep-local") rep = run_sweep_local(cfg, dir);
    else if (suite == "sweep-bilinear") rep = run_sweep_bilinear(cfg, dir);
    else if (suite == "solve") rep = run_solve(cfg, dir, snapshots);
    else if (suite == "illposed") rep = run_illposed(cfg, dir);
    else rep = run_report(cfg, dir);

    write_report((dir / (suite + ".json")).string(), rep);
    std::cout << report_json(rep);
    return report_pass(rep) ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}
