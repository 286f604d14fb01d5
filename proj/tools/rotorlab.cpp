// rotorlab: command line front door to the rotator laboratory.
// Subcommands cover the stationary family, particle simulation, the
// spectral mode solver, the Fokker-Planck integrator, and the
// statistical experiments. Every run writes its outputs next to a
// manifest carrying the resolved config, seed, and timestamps; the
// scientific outputs themselves contain no timestamps, so a fixed
// (config, seed) pair reproduces them byte for byte.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotor/config.hpp"
#include "rotor/experiments.hpp"
#include "rotor/grid.hpp"
#include "rotor/hilbert.hpp"
#include "rotor/io.hpp"
#include "rotor/measures.hpp"
#include "rotor/pde.hpp"
#include "rotor/rng.hpp"
#include "rotor/sde.hpp"
#include "rotor/spectral.hpp"
#include "rotor/stationary.hpp"

namespace {

struct CommandContext {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::string out_dir = ".";
  std::vector<std::string> raw_overrides;
};

void add_common_options(CLI::App& sub, CommandContext& ctx) {
  sub.add_option("--config", ctx.config_path,
                 "Config file of 'key = value' lines");
  sub.add_option("--seed", ctx.seed, "Base seed for all random streams")
      ->each([&ctx](const std::string&) { ctx.seed_given = true; });
  sub.add_option("--threads", ctx.threads,
                 "Worker threads for path-parallel commands");
  sub.add_option("--out", ctx.out_dir, "Output directory, created if absent");
  sub.add_option("--set", ctx.raw_overrides,
                 "Override a config key as KEY=VALUE");
}

rotor::ResolvedConfig resolve(const CommandContext& ctx,
                              const std::vector<rotor::SchemaEntry>& schema) {
  std::map<std::string, std::string> file_values;
  if (!ctx.config_path.empty()) {
    file_values = rotor::parse_config_file(ctx.config_path);
  }
  std::map<std::string, std::string> overrides;
  for (const std::string& item : ctx.raw_overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error("config: override '" + item +
                               "': expected KEY=VALUE");
    }
    overrides[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (ctx.seed_given) {
    overrides["seed"] = std::to_string(ctx.seed);
  }
  return rotor::resolve_config(schema, file_values, overrides);
}

std::string out_path(const CommandContext& ctx, const std::string& name) {
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

void write_manifest(const CommandContext& ctx, const std::string& command,
                    const rotor::ResolvedConfig& cfg, std::uint64_t seed,
                    const std::string& started_at,
                    const std::vector<std::string>& outputs) {
  rotor::OrderedJson echo;
  for (const auto& [key, value] : cfg.values()) {
    echo[key] = value;
  }
  rotor::write_json_file(
      out_path(ctx, command + "_manifest.json"),
      rotor::make_manifest(command, echo, seed, started_at,
                           rotor::utc_timestamp(), outputs));
}

void print_value(const std::string& name, double value) {
  std::cout << name << " = " << rotor::format_double(value) << '\n';
}

void cmd_stationary(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, true, ""},
      {"grid_size", rotor::ValueKind::kInt, false, "512"},
  };
  const auto cfg = resolve(ctx, schema);
  const double coupling = cfg.get_double("coupling");
  const auto grid_size = static_cast<int>(cfg.get_int("grid_size"));
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  const rotor::CircleGrid grid(grid_size);
  std::vector<double> density(grid.size());
  print_value("coupling", coupling);
  if (coupling > 1.0) {
    const rotor::StationaryProfile profile(coupling, 0.0);
    const auto weight = rotor::weight_values(
        grid, [&](double theta) { return profile.inv_density(theta); });
    std::vector<double> deriv(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      deriv[static_cast<std::size_t>(i)] = profile.density_deriv(grid.node(i));
      density[static_cast<std::size_t>(i)] = profile.density(grid.node(i));
    }
    const auto element =
        rotor::HMinusOneElement::from_density_values(grid, deriv);
    print_value("r", profile.degree());
    print_value("D_K", rotor::diffusion_coefficient(coupling));
    print_value("c", rotor::c_constant(coupling));
    print_value("qprime_norm", rotor::h1w_norm(element, weight));
  } else {
    std::fill(density.begin(), density.end(),
              1.0 / (2.0 * std::numbers::pi));
    std::cout << "r = 0\n";
    std::cout << "D_K = undefined\n";
    std::cout << "c = undefined\n";
    std::cout << "qprime_norm = 0\n";
  }

  rotor::CsvWriter csv(out_path(ctx, "stationary.csv"), {"theta", "density"});
  for (int i = 0; i < grid.size(); ++i) {
    csv.write_row({grid.node(i), density[static_cast<std::size_t>(i)]});
  }
  write_manifest(ctx, "stationary", cfg, 0, started, {csv.path()});
}

rotor::PhaseEnsemble initial_ensemble(const std::string& kind, double coupling,
                                      double center, int n_particles,
                                      std::uint64_t seed) {
  if (kind == "equally_spaced") {
    return rotor::sample_equally_spaced(n_particles);
  }
  if (kind == "quantiles") {
    return rotor::sample_quantiles(rotor::StationaryProfile(coupling, center),
                                   n_particles);
  }
  if (kind == "iid") {
    rotor::SequentialRng rng(
        rotor::derive_stream(seed, rotor::kPurposeInitialSample, 0));
    return rotor::sample_iid(rotor::StationaryProfile(coupling, center),
                             n_particles, rng);
  }
  throw std::runtime_error(
      "config: key 'init': expected one of "
      "quantiles|equally_spaced|iid, got '" +
      kind + "'");
}

void cmd_simulate(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, true, ""},
      {"n_particles", rotor::ValueKind::kInt, true, ""},
      {"dt", rotor::ValueKind::kDouble, false, "0.001"},
      {"t_end", rotor::ValueKind::kDouble, true, ""},
      {"record_stride", rotor::ValueKind::kInt, false, "100"},
      {"init", rotor::ValueKind::kString, false, "quantiles"},
      {"init_center", rotor::ValueKind::kDouble, false, "0"},
      {"seed", rotor::ValueKind::kUInt, false, "0"},
      {"zero_noise", rotor::ValueKind::kBool, false, "false"},
  };
  const auto cfg = resolve(ctx, schema);
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  rotor::SimConfig sim;
  sim.coupling = cfg.get_double("coupling");
  sim.n_particles = static_cast<int>(cfg.get_int("n_particles"));
  sim.dt = cfg.get_double("dt");
  sim.t_end = cfg.get_double("t_end");
  sim.seed = cfg.get_uint("seed");
  sim.record_stride = static_cast<int>(cfg.get_int("record_stride"));
  sim.zero_noise = cfg.get_bool("zero_noise");
  rotor::validate(sim);

  const auto initial =
      initial_ensemble(cfg.get_string("init"), sim.coupling,
                       cfg.get_double("init_center"), sim.n_particles,
                       sim.seed);
  const rotor::PhaseTrack track = rotor::run(sim, initial);

  rotor::CsvWriter csv(out_path(ctx, "simulate.csv"), {"t", "r", "psi"});
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    csv.write_row(
        {track.times[i], track.r_values[i], track.psi_unwrapped[i]});
  }
  print_value("final_r", track.r_values.back());
  print_value("final_psi", track.psi_unwrapped.back());
  std::cout << "unwrap_warnings = " << track.unwrap_warnings << '\n';
  write_manifest(ctx, "simulate", cfg, sim.seed, started, {csv.path()});
}

void cmd_pde(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, true, ""},
      {"truncation", rotor::ValueKind::kInt, false, "64"},
      {"dt", rotor::ValueKind::kDouble, false, "0.005"},
      {"t_end", rotor::ValueKind::kDouble, true, ""},
      {"record_stride", rotor::ValueKind::kInt, false, "10"},
      {"init", rotor::ValueKind::kString, false, "cos"},
      {"init_amplitude", rotor::ValueKind::kDouble, false, "0.4"},
      {"init_mode", rotor::ValueKind::kInt, false, "1"},
      {"init_center", rotor::ValueKind::kDouble, false, "0"},
  };
  const auto cfg = resolve(ctx, schema);
  const double coupling = cfg.get_double("coupling");
  const auto truncation = static_cast<int>(cfg.get_int("truncation"));
  const double dt = cfg.get_double("dt");
  const double t_end = cfg.get_double("t_end");
  const auto stride = static_cast<std::int64_t>(cfg.get_int("record_stride"));
  if (stride < 1) {
    throw std::runtime_error("config: key 'record_stride': must be >= 1");
  }
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  rotor::FourierDensity state(truncation);
  const std::string init = cfg.get_string("init");
  if (init == "uniform") {
    // keep the flat start
  } else if (init == "cos") {
    const double amplitude = cfg.get_double("init_amplitude");
    const auto mode = static_cast<int>(cfg.get_int("init_mode"));
    if (!(std::abs(amplitude) < 1.0)) {
      throw std::runtime_error(
          "config: key 'init_amplitude': magnitude must stay below 1 to keep "
          "the density positive");
    }
    if (mode < 1 || mode > truncation) {
      throw std::runtime_error(
          "config: key 'init_mode': must lie in [1, truncation]");
    }
    state.set_mode(mode, amplitude / (4.0 * std::numbers::pi));
  } else if (init == "profile") {
    state = rotor::FourierDensity::from_profile(
        rotor::StationaryProfile(coupling, cfg.get_double("init_center")),
        truncation);
  } else {
    throw std::runtime_error(
        "config: key 'init': expected one of uniform|cos|profile, got '" +
        init + "'");
  }

  const rotor::CircleGrid grid;
  rotor::CsvWriter csv(out_path(ctx, "pde.csv"),
                       {"t", "re_c1", "im_c1", "dist", "free_energy"});
  const auto total_steps = static_cast<std::int64_t>(std::llround(t_end / dt));
  const auto record = [&](double t, const rotor::FourierDensity& p) {
    const rotor::GridDensity on_grid(grid, rotor::density_on_grid(p, grid));
    csv.write_row({t, p.mode(1).real(), p.mode(1).imag(),
                   rotor::dist_to_manifold(on_grid, coupling, grid),
                   rotor::free_energy(p, coupling, grid)});
  };
  record(0.0, state);
  std::int64_t done = 0;
  while (done < total_steps) {
    const std::int64_t chunk = std::min(stride, total_steps - done);
    state = rotor::evolve(state, coupling, static_cast<double>(chunk) * dt, dt);
    done += chunk;
    record(static_cast<double>(done) * dt, state);
  }

  const rotor::GridDensity final_density(grid,
                                         rotor::density_on_grid(state, grid));
  print_value("final_dist",
              rotor::dist_to_manifold(final_density, coupling, grid));
  print_value("final_free_energy",
              rotor::free_energy(state, coupling, grid));
  write_manifest(ctx, "pde", cfg, 0, started, {csv.path()});
}

void cmd_spectrum(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, true, ""},
      {"truncation", rotor::ValueKind::kInt, false, "64"},
      {"p_list", rotor::ValueKind::kIntList, false, "8,12,16"},
  };
  const auto cfg = resolve(ctx, schema);
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  const auto assembly = rotor::assemble(
      cfg.get_double("coupling"), static_cast<int>(cfg.get_int("truncation")));
  const auto dec = rotor::eigensolve(assembly);
  const auto report =
      rotor::asymptotics_report(dec, cfg.get_int_list("p_list"));

  rotor::CsvWriter csv(out_path(ctx, "spectrum.csv"),
                       {"index", "eigenvalue", "parity"});
  for (std::size_t j = 0; j < dec.eigenvalues.size(); ++j) {
    csv.write_row({static_cast<std::int64_t>(j), dec.eigenvalues[j],
                   static_cast<std::int64_t>(dec.parity[j])});
  }

  rotor::OrderedJson doc;
  doc["coupling"] = dec.coupling;
  doc["degree"] = dec.degree;
  doc["truncation"] = dec.truncation;
  doc["lambda_0"] = dec.eigenvalues[0];
  doc["lambda_1"] = dec.eigenvalues[1];
  doc["index_offset"] = report.index_offset;
  doc["truncation_warning"] = report.truncation_warning;
  auto rows = rotor::OrderedJson::array();
  for (const auto& row : report.rows) {
    rotor::OrderedJson item;
    item["p"] = row.p;
    item["lambda_low"] = row.lambda_low;
    item["lambda_high"] = row.lambda_high;
    item["predicted"] = row.predicted;
    item["residual"] = row.residual;
    item["defect"] = row.defect;
    rows.push_back(item);
  }
  doc["pairs"] = rows;
  rotor::write_json_file(out_path(ctx, "spectrum.json"), doc);

  print_value("lambda_0", dec.eigenvalues[0]);
  print_value("lambda_1", dec.eigenvalues[1]);
  write_manifest(ctx, "spectrum", cfg, 0, started,
                 {csv.path(), out_path(ctx, "spectrum.json")});
}

void cmd_diffusion(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, false, "2"},
      {"n_particles", rotor::ValueKind::kInt, false, "1000"},
      {"tau_f", rotor::ValueKind::kDouble, false, "1"},
      {"dt", rotor::ValueKind::kDouble, false, "0.001"},
      {"n_paths", rotor::ValueKind::kInt, false, "100"},
      {"init_center", rotor::ValueKind::kDouble, false, "0"},
      {"seed", rotor::ValueKind::kUInt, false, "0"},
  };
  const auto cfg = resolve(ctx, schema);
  const std::uint64_t seed = cfg.get_uint("seed");
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  const auto estimate = rotor::phase_diffusion_experiment(
      cfg.get_double("coupling"), static_cast<int>(cfg.get_int("n_particles")),
      cfg.get_double("tau_f"), cfg.get_double("dt"),
      static_cast<int>(cfg.get_int("n_paths")), seed,
      cfg.get_double("init_center"), ctx.threads);

  rotor::CsvWriter csv(out_path(ctx, "diffusion_variance.csv"),
                       {"tau", "variance"});
  for (std::size_t m = 0; m < estimate.taus.size(); ++m) {
    csv.write_row({estimate.taus[m], estimate.variances[m]});
  }

  rotor::OrderedJson doc;
  doc["coupling"] = estimate.coupling;
  doc["n_particles"] = estimate.n_particles;
  doc["tau_f"] = estimate.tau_f;
  doc["dt"] = estimate.dt;
  doc["n_paths"] = estimate.n_paths;
  doc["excluded_paths"] = estimate.excluded_paths;
  doc["slope"] = estimate.slope;
  doc["intercept"] = estimate.intercept;
  doc["fit_r2"] = estimate.fit_r2;
  doc["d_hat"] = estimate.d_hat;
  doc["d_stderr"] = estimate.d_stderr;
  doc["target"] = estimate.target;
  doc["drift_mean"] = estimate.drift_mean;
  doc["drift_stderr"] = estimate.drift_stderr;
  doc["autocorr_lag1"] = estimate.autocorr_lag1;
  doc["autocorr_samples"] = estimate.autocorr_samples;
  auto paths = rotor::OrderedJson::array();
  for (std::size_t p = 0; p < estimate.path_increments.size(); ++p) {
    rotor::OrderedJson item;
    item["increment"] = estimate.path_increments[p];
    item["final_r"] = estimate.path_final_r[p];
    paths.push_back(item);
  }
  doc["paths"] = paths;
  rotor::write_json_file(out_path(ctx, "diffusion.json"), doc);

  print_value("d_hat", estimate.d_hat);
  print_value("d_stderr", estimate.d_stderr);
  print_value("target", estimate.target);
  write_manifest(ctx, "diffusion", cfg, seed, started,
                 {csv.path(), out_path(ctx, "diffusion.json")});
}

void cmd_scaling(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, false, "2"},
      {"t_fixed", rotor::ValueKind::kDouble, false, "4"},
      {"n_list", rotor::ValueKind::kIntList, false, "250,500,1000,2000,4000"},
      {"n_paths", rotor::ValueKind::kInt, false, "24"},
      {"dt", rotor::ValueKind::kDouble, false, "0.002"},
      {"seed", rotor::ValueKind::kUInt, false, "0"},
  };
  const auto cfg = resolve(ctx, schema);
  const std::uint64_t seed = cfg.get_uint("seed");
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  const auto result = rotor::fluctuation_scaling(
      cfg.get_double("coupling"), cfg.get_double("t_fixed"),
      cfg.get_int_list("n_list"), static_cast<int>(cfg.get_int("n_paths")),
      seed, cfg.get_double("dt"), ctx.threads);

  rotor::CsvWriter csv(out_path(ctx, "scaling.csv"),
                       {"n", "mean_distance", "stderr"});
  for (const auto& point : result.points) {
    csv.write_row({static_cast<std::int64_t>(point.n_particles),
                   point.mean_distance, point.stderr_mean});
  }

  rotor::OrderedJson doc;
  doc["coupling"] = result.coupling;
  doc["t_fixed"] = result.t_fixed;
  doc["n_paths"] = result.n_paths;
  doc["dt"] = result.dt;
  doc["slope"] = result.slope;
  doc["intercept"] = result.intercept;
  auto points = rotor::OrderedJson::array();
  for (const auto& point : result.points) {
    rotor::OrderedJson item;
    item["n"] = point.n_particles;
    item["mean_distance"] = point.mean_distance;
    item["stderr"] = point.stderr_mean;
    points.push_back(item);
  }
  doc["points"] = points;
  rotor::write_json_file(out_path(ctx, "scaling.json"), doc);

  print_value("slope", result.slope);
  write_manifest(ctx, "scaling", cfg, seed, started,
                 {csv.path(), out_path(ctx, "scaling.json")});
}

void cmd_emergence(const CommandContext& ctx) {
  const std::vector<rotor::SchemaEntry> schema = {
      {"coupling", rotor::ValueKind::kDouble, false, "2"},
      {"n_particles", rotor::ValueKind::kInt, false, "500"},
      {"n_paths", rotor::ValueKind::kInt, false, "200"},
      {"dt", rotor::ValueKind::kDouble, false, "0.002"},
      {"seed", rotor::ValueKind::kUInt, false, "0"},
  };
  const auto cfg = resolve(ctx, schema);
  const std::uint64_t seed = cfg.get_uint("seed");
  const std::string started = rotor::utc_timestamp();
  std::filesystem::create_directories(ctx.out_dir);

  const auto result = rotor::emergence_from_uniform(
      cfg.get_double("coupling"), static_cast<int>(cfg.get_int("n_particles")),
      static_cast<int>(cfg.get_int("n_paths")), seed, cfg.get_double("dt"),
      ctx.threads);

  rotor::CsvWriter csv(out_path(ctx, "emergence.csv"),
                       {"center", "crossing_time"});
  for (std::size_t i = 0; i < result.centers.size(); ++i) {
    csv.write_row({result.centers[i], result.crossing_times[i]});
  }

  rotor::OrderedJson doc;
  doc["coupling"] = result.coupling;
  doc["n_particles"] = result.n_particles;
  doc["n_paths"] = result.n_paths;
  doc["dt"] = result.dt;
  doc["threshold"] = result.threshold;
  doc["time_limit"] = result.time_limit;
  doc["timeout_count"] = result.timeout_count;
  doc["rayleigh_statistic"] = result.rayleigh_statistic;
  doc["rayleigh_p"] = result.rayleigh_p;
  rotor::write_json_file(out_path(ctx, "emergence.json"), doc);

  print_value("rayleigh_p", result.rayleigh_p);
  std::cout << "timeouts = " << result.timeout_count << '\n';
  write_manifest(ctx, "emergence", cfg, seed, started,
                 {csv.path(), out_path(ctx, "emergence.json")});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for noisy mean-field rotators"};
  app.require_subcommand(1);

  CommandContext stationary_ctx;
  auto* stationary = app.add_subcommand(
      "stationary", "Synchronized profile constants and density grid");
  add_common_options(*stationary, stationary_ctx);
  stationary->callback([&] { cmd_stationary(stationary_ctx); });

  CommandContext simulate_ctx;
  auto* simulate =
      app.add_subcommand("simulate", "One particle-system trajectory");
  add_common_options(*simulate, simulate_ctx);
  simulate->callback([&] { cmd_simulate(simulate_ctx); });

  CommandContext pde_ctx;
  auto* pde = app.add_subcommand(
      "pde", "Spectral evolution of the mean-field density");
  add_common_options(*pde, pde_ctx);
  pde->callback([&] { cmd_pde(pde_ctx); });

  CommandContext spectrum_ctx;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Eigenvalues of the linearized mean-field operator");
  add_common_options(*spectrum, spectrum_ctx);
  spectrum->callback([&] { cmd_spectrum(spectrum_ctx); });

  CommandContext diffusion_ctx;
  auto* diffusion = app.add_subcommand(
      "diffusion", "Variance growth of the synchronization center");
  add_common_options(*diffusion, diffusion_ctx);
  diffusion->callback([&] { cmd_diffusion(diffusion_ctx); });

  CommandContext scaling_ctx;
  auto* scaling = app.add_subcommand(
      "scaling", "Distance to the stationary family against particle count");
  add_common_options(*scaling, scaling_ctx);
  scaling->callback([&] { cmd_scaling(scaling_ctx); });

  CommandContext emergence_ctx;
  auto* emergence = app.add_subcommand(
      "emergence", "Center selection from a symmetric start");
  add_common_options(*emergence, emergence_ctx);
  emergence->callback([&] { cmd_emergence(emergence_ctx); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
