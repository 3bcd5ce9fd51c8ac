#include "stokes/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stokes/bifurcation.hpp"
#include "stokes/errors.hpp"
#include "stokes/numfmt.hpp"
#include "stokes/selfcheck.hpp"

namespace stokes {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json record_json(const ClassificationRecord& r) {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  return {{"g", r.params.g},
          {"depth", r.params.depth.to_string()},
          {"kappa", r.params.kappa},
          {"gamma", r.params.gamma},
          {"j_star", r.j_star},
          {"c_star", r.c_star},
          {"kernel_dim", r.kernel_dim},
          {"partner", opt(r.partner)},
          {"bond_plus", opt(r.bond_plus)},
          {"bond_minus", opt(r.bond_minus)},
          {"regime", std::string(to_string(r.regime))},
          {"residual", opt(r.residual)},
          {"searched", r.searched}};
}

fs::path prepare_output(const RunConfig& config) {
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << serialize_config(config);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write " + path.string());
}

int fourier_columns(const RunConfig& config) { return std::min(config.grid.n_modes, 8); }

std::string csv_header(int k_cols) {
  std::string h = "c,epsilon_or_a,momentum,residual";
  for (int k = 1; k <= k_cols; ++k) h += ",eta_fourier_" + std::to_string(k);
  return h + "\n";
}

/// eta_fourier_k is the amplitude 2 |eta_hat_k| of the k-th harmonic.
std::string csv_row(const BranchPoint& b, int k_cols) {
  std::string row = fmt17(b.c) + "," + fmt17(b.amplitude) + "," + fmt17(b.momentum) + "," + fmt17(b.residual_norm);
  for (int k = 1; k <= k_cols; ++k) row += "," + fmt17(2.0 * std::abs(b.state.eta[k]));
  return row + "\n";
}

int partner_of(const RunConfig& config) {
  if (config.partner) return *config.partner;
  const ClassificationRecord rec = classify_kernel(config.params, config.j_star, config.j_max, config.tol.resonance);
  if (!rec.partner) throw MisuseError("the kernel is two-dimensional for this j_star; no resonant partner");
  return *rec.partner;
}

}  // namespace

int cmd_classify(const RunConfig& config, std::ostream& out) {
  const ClassificationRecord rec = classify_kernel(config.params, config.j_star, config.j_max, config.tol.resonance);
  out << record_json(rec).dump(2) << "\n";
  return kExitOk;
}

int cmd_resonance(const RunConfig& config, std::ostream& out) {
  if (!config.j) throw ConfigError("resonance: the second wavenumber 'j' is required");
  const ResonantKappa r = find_resonant_kappa(config.params.g, config.params.depth, config.params.gamma,
                                              config.j_star, *config.j);
  out << fmt17(r.kappa) << "\n";
  return kExitOk;
}

int cmd_atlas(const RunConfig& config, std::ostream& out) {
  if (config.atlas.size() == 0) throw ConfigError("atlas: the parameter grid is empty");
  const auto records = atlas_scan(config.atlas, config.j_star, config.j_max, config.tol.resonance, config.threads);
  const fs::path dir = prepare_output(config);
  std::ostringstream csv;
  write_atlas_csv(csv, records);
  write_file(dir / "atlas.csv", csv.str());
  out << json{{"records", records.size()}, {"csv", (dir / "atlas.csv").string()}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_branch(const RunConfig& config, std::ostream& out) {
  const SpectralGrid grid = config.grid.build();
  const auto points = nonresonant_branch(config.params, grid, config.j_star, config.epsilons, config.driver_options());
  const fs::path dir = prepare_output(config);
  const int k_cols = fourier_columns(config);
  std::string csv = csv_header(k_cols);
  bool all_ok = true;
  json summary = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const BranchPoint& b = points[i];
    csv += csv_row(b, k_cols);
    const std::string name = fmt::format("branch_{:03d}.json", i);
    write_file(dir / name, to_json(b).dump(2) + "\n");
    all_ok = all_ok && b.accepted;
    summary.push_back({{"epsilon", b.amplitude}, {"c", b.c}, {"residual", b.residual_norm}, {"accepted", b.accepted}});
  }
  write_file(dir / "branch.csv", csv);
  out << json{{"points", summary}, {"csv", (dir / "branch.csv").string()}}.dump(2) << "\n";
  return all_ok ? kExitOk : kExitNumerical;
}

int cmd_resonant_speed(const RunConfig& config, std::ostream& out) {
  const SpectralGrid grid = config.grid.build();
  const int partner = partner_of(config);
  std::vector<double> speeds = config.c_values;
  if (speeds.empty()) {
    // both sides of c*; which one carries solutions is found empirically
    const double c_star = bifurcation_speed(config.params, config.j_star);
    speeds = {c_star + 1e-3, c_star - 1e-3};
  }
  const fs::path dir = prepare_output(config);
  const int k_cols = fourier_columns(config);
  std::string csv = csv_header(k_cols);
  bool all_ok = true;
  json runs = json::array();
  for (std::size_t s = 0; s < speeds.size(); ++s) {
    const FixedSpeedResult r = resonant_fixed_speed(config.params, grid, config.j_star, partner, speeds[s],
                                                    config.multistart, config.driver_options());
    json orbits = json::array();
    for (std::size_t i = 0; i < r.orbits.size(); ++i) {
      const BranchPoint& b = r.orbits[i];
      csv += csv_row(b, k_cols);
      write_file(dir / fmt::format("speed_{:03d}_orbit_{:02d}.json", s, i), to_json(b).dump(2) + "\n");
      all_ok = all_ok && b.accepted;
      orbits.push_back({{"phi", b.phi}, {"residual", b.residual_norm}, {"accepted", b.accepted}});
    }
    runs.push_back({{"c", r.c}, {"orbits", orbits}, {"newton_failures", r.newton_failures}});
  }
  write_file(dir / "resonant_speed.csv", csv);
  out << json{{"partner", partner}, {"runs", runs}, {"csv", (dir / "resonant_speed.csv").string()}}.dump(2) << "\n";
  return all_ok ? kExitOk : kExitNumerical;
}

int cmd_resonant_momentum(const RunConfig& config, std::ostream& out) {
  const SpectralGrid grid = config.grid.build();
  const int partner = partner_of(config);
  const auto results = fixed_momentum_sweep(config.params, grid, config.j_star, partner, config.a_values,
                                            config.multistart, config.driver_options());
  const fs::path dir = prepare_output(config);
  const int k_cols = fourier_columns(config);
  std::string csv = csv_header(k_cols);
  bool all_ok = true;
  json runs = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const FixedMomentumResult& r = results[i];
    for (const auto& [label, b] : {std::pair{"min", &r.min_orbit}, std::pair{"max", &r.max_orbit}}) {
      csv += csv_row(*b, k_cols);
      write_file(dir / fmt::format("momentum_{:03d}_{}.json", i, label), to_json(*b).dump(2) + "\n");
      all_ok = all_ok && b->accepted;
    }
    runs.push_back({{"a", r.a},
                    {"min", {{"c", r.min_orbit.c}, {"energy", r.min_orbit.phi}, {"accepted", r.min_orbit.accepted}}},
                    {"max", {{"c", r.max_orbit.c}, {"energy", r.max_orbit.phi}, {"accepted", r.max_orbit.accepted}}},
                    {"distinct", r.distinct}});
  }
  write_file(dir / "resonant_momentum.csv", csv);
  out << json{{"partner", partner}, {"runs", runs}, {"csv", (dir / "resonant_momentum.csv").string()}}.dump(2)
      << "\n";
  return all_ok ? kExitOk : kExitNumerical;
}

int cmd_selfcheck(const RunConfig& config, std::ostream& out) {
  const SelfCheckReport r = run_selfcheck(config.params, config.grid.build(), config.j_star, 8, config.seed);
  out << r.to_json().dump(2) << "\n";
  return r.passed() ? kExitOk : kExitNumerical;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-amplitude Stokes waves with surface tension and constant vorticity", "stokes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  double g = 0, kappa = 0, gamma = 0;
  std::string depth;
  int n_modes = 0, dealias = 0, dno_order = 0, j_star = 0, partner = 0, j = 0, j_max = 0, multistart = 0, threads = 0;
  std::vector<double> eps, a_values, c_values;
  std::uint64_t seed = 0;
  std::string output_dir;
  double tol_residual = 0, tol_newton = 0, tol_resonance = 0, tol_distinct = 0;

  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  auto* o_g = app.add_option("--g", g, "gravity");
  auto* o_depth = app.add_option("--depth", depth, "depth, a number or inf");
  auto* o_kappa = app.add_option("--kappa", kappa, "surface tension");
  auto* o_gamma = app.add_option("--gamma", gamma, "constant vorticity");
  auto* o_n = app.add_option("--N", n_modes, "highest retained wavenumber");
  auto* o_dealias = app.add_option("--dealias", dealias, "collocation points per mode");
  auto* o_order = app.add_option("--dno-order", dno_order, "Dirichlet-Neumann expansion order");
  auto* o_jstar = app.add_option("--j-star", j_star, "bifurcation wavenumber");
  auto* o_partner = app.add_option("--partner", partner, "resonant partner wavenumber");
  auto* o_j = app.add_option("--j", j, "second wavenumber (resonance)");
  auto* o_jmax = app.add_option("--j-max", j_max, "classification search range");
  auto* o_eps = app.add_option("--eps", eps, "kernel amplitudes (branch)")->delimiter(',');
  auto* o_a = app.add_option("--a", a_values, "momentum levels (resonant-momentum)")->delimiter(',');
  auto* o_c = app.add_option("--c", c_values, "speeds (resonant-speed)")->delimiter(',');
  auto* o_multi = app.add_option("--multistart", multistart, "multistart size");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_out = app.add_option("--output-dir", output_dir, "artifact directory");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (fallback: STOKES_THREADS)");
  auto* o_tres = app.add_option("--tol-residual", tol_residual, "acceptance bound on ||F||");
  auto* o_tnewton = app.add_option("--tol-newton", tol_newton, "range equation tolerance");
  auto* o_treson = app.add_option("--tol-resonance", tol_resonance, "resonance tolerance");
  auto* o_tdist = app.add_option("--tol-distinct", tol_distinct, "orbit distinctness tolerance");

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::pair<std::string, Command>> commands = {
      {"classify", cmd_classify},         {"resonance", cmd_resonance},
      {"atlas", cmd_atlas},               {"branch", cmd_branch},
      {"resonant-speed", cmd_resonant_speed}, {"resonant-momentum", cmd_resonant_momentum},
      {"selfcheck", cmd_selfcheck}};
  for (const auto& [name, _] : commands) app.add_subcommand(name);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      std::stringstream text;
      text << f.rdbuf();
      config = parse_config(text.str());
    }
    const char* env_threads = std::getenv("STOKES_THREADS");
    if (o_threads->count() == 0 && env_threads && *env_threads) {
      try {
        threads = std::stoi(env_threads);
      } catch (const std::exception&) {
        throw ConfigError("STOKES_THREADS must be an integer");
      }
      config.threads = threads;
    }
    if (o_g->count()) config.params.g = g;
    if (o_depth->count()) {
      try {
        config.params.depth = Depth::parse(depth);
      } catch (const Error& e) {
        throw ConfigError(std::string("--depth: ") + e.what());
      }
    }
    if (o_kappa->count()) config.params.kappa = kappa;
    if (o_gamma->count()) config.params.gamma = gamma;
    if (o_n->count()) config.grid.n_modes = n_modes;
    if (o_dealias->count()) config.grid.dealias = dealias;
    if (o_order->count()) config.grid.dno_order = dno_order;
    if (o_jstar->count()) config.j_star = j_star;
    if (o_partner->count()) config.partner = partner;
    if (o_j->count()) config.j = j;
    if (o_jmax->count()) config.j_max = j_max;
    if (o_eps->count()) config.epsilons = eps;
    if (o_a->count()) config.a_values = a_values;
    if (o_c->count()) config.c_values = c_values;
    if (o_multi->count()) config.multistart = multistart;
    if (o_seed->count()) config.seed = seed;
    if (o_out->count()) config.output_dir = output_dir;
    if (o_threads->count()) config.threads = threads;
    if (o_tres->count()) config.tol.residual = tol_residual;
    if (o_tnewton->count()) config.tol.newton = tol_newton;
    if (o_treson->count()) config.tol.resonance = tol_resonance;
    if (o_tdist->count()) config.tol.distinct = tol_distinct;
    config.validate();

    for (const auto& [name, cmd] : commands) {
      if (app.got_subcommand(name)) return cmd(config, out);
    }
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << json{{"error", e.what()}, {"diagnostics", e.diagnostics()}}.dump(2) << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MisuseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedConfiguration& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GridTooSmall& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace stokes
