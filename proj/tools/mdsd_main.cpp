// SPDX-License-Identifier: Apache-2.0
//
// mdsd command line: scenario runs and single-shot physics queries.
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdsd/config.hpp"
#include "mdsd/dustphys.hpp"
#include "mdsd/error.hpp"
#include "mdsd/errprop.hpp"
#include "mdsd/gridio.hpp"
#include "mdsd/scenario.hpp"
#include "mdsd/spectra.hpp"
#include "mdsd/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mdsd::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_simulate(const std::string& config_path, int threads, const std::string& output) {
  auto cfg = mdsd::Config::load(config_path);
  auto sc = mdsd::scenario::Scenario::from_config(cfg);
  if (threads >= 0) sc.threads = static_cast<unsigned>(threads);
  if (!output.empty()) sc.output_dir = output;
  const auto result = mdsd::scenario::run_scenario(sc);
  std::printf("rows %zu, failed %zu, %.2f s, output %s\n", result.rows.size(), result.failed_cells,
              result.wall_seconds, sc.output_dir.c_str());
  return 0;
}

int cmd_attenuation(double freq, double temp, double pressure, const std::string& catalog_path,
                    const std::string& partition_path) {
  const auto catalog = mdsd::spectra::parse_line_catalog(
      slurp(catalog_path), {}, {0.0, std::numeric_limits<double>::infinity()});
  mdsd::spectra::PartitionModel partition;
  if (!partition_path.empty()) partition = mdsd::spectra::parse_partition_table(slurp(partition_path));
  const auto atm = mdsd::spectra::mars_atmosphere(temp, pressure);
  const double k = mdsd::spectra::absorption_coefficient(atm, catalog, freq, partition);
  std::printf("frequency_hz %.9g\nk_per_m %.9e\nattenuation_db_per_km %.9e\n", freq, k,
              mdsd::spectra::absorption_db_per_km(k));
  return 0;
}

int cmd_invert(double a_dust, double freq, const mdsd::dust::DustParticles& particles) {
  const double n = mdsd::dust::concentration_from_attenuation(a_dust, particles, freq);
  const double v = mdsd::dust::visibility_or_clear(a_dust, particles, freq);
  std::printf("concentration_per_m3 %.9e\n", n);
  if (std::isinf(v)) {
    std::printf("visibility_km inf\n");
  } else {
    std::printf("visibility_km %.9g\n", v);
  }
  return 0;
}

int cmd_errprop(double freq, double n, std::size_t mc_samples, std::uint64_t seed) {
  const mdsd::dust::DustMedium medium{{}, n};
  const mdsd::errprop::UncertaintyBudget budget;
  const auto v = mdsd::errprop::variance_components(medium, freq, budget);
  std::printf("component variance_db2_per_km2\n");
  std::printf("radius %.6e\nconcentration %.6e\neps_real %.6e\neps_imag %.6e\n", v.var_r, v.var_N,
              v.var_eps_real, v.var_eps_imag);
  std::printf("total_sigma_db_per_km %.6e\n", v.total_sigma);
  std::printf("attenuation_db_per_km %.6e\n", mdsd::dust::dust_attenuation(medium, freq));
  if (mc_samples > 0) {
    const auto mc = mdsd::errprop::monte_carlo(medium, freq, budget, mc_samples, seed, 0);
    std::printf("monte_carlo_sigma_db_per_km %.6e\nmonte_carlo_rejection_rate %.3e\n", mc.sigma,
                mc.rejection_rate());
  }
  return 0;
}

int cmd_ingest(const std::string& path, bool cdod) {
  const auto grid = cdod ? mdsd::gridio::ingest_cdod_grid(path) : mdsd::gridio::read_grid_file(path);
  const auto& s = grid.spec();
  std::printf("ok %s\nnx %zu\nny %zu\nextent %.9g %.9g %.9g %.9g\nvalid %zu of %zu\n", path.c_str(),
              s.nx, s.ny, s.extent.xmin, s.extent.xmax, s.extent.ymin, s.extent.ymax,
              grid.valid_count(), grid.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Martian dust storm detection simulator"};
  app.set_version_flag("--version", mdsd::kVersion);
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "run a scenario config");
  std::string config_path, output;
  int threads = -1;
  simulate->add_option("config", config_path, "scenario config file")->required();
  simulate->add_option("--threads", threads, "worker threads (0 = all cores)");
  simulate->add_option("--output", output, "override run.output");

  auto* atten = app.add_subcommand("attenuation", "molecular absorption at one frequency");
  double freq = 1e12, temp = 210.0, pressure = 610.0;
  std::string catalog, partition;
  atten->add_option("--freq", freq, "frequency in Hz")->required();
  atten->add_option("--temp", temp, "temperature in K")->required();
  atten->add_option("--pressure", pressure, "pressure in Pa")->required();
  atten->add_option("--catalog", catalog, "HITRAN 160-column line list")->required();
  atten->add_option("--partition", partition, "partition function table");

  auto* invert = app.add_subcommand("invert", "concentration and visibility from dust attenuation");
  double a_dust = 0.0;
  double invert_freq = 1e12;
  mdsd::dust::DustParticles particles;
  invert->add_option("--adust", a_dust, "isolated dust attenuation in dB/km")->required();
  invert->add_option("--freq", invert_freq, "frequency in Hz");
  invert->add_option("--radius", particles.mean_radius, "mean particle radius in m");
  invert->add_option("--eps-real", particles.eps_real, "real permittivity");
  invert->add_option("--eps-imag", particles.eps_imag, "imaginary permittivity");

  auto* err = app.add_subcommand("errprop", "attenuation variance breakdown");
  double err_freq = 1e12, err_n = 1e8;
  std::size_t mc = 0;
  std::uint64_t seed = 1;
  err->add_option("--freq", err_freq, "frequency in Hz")->required();
  err->add_option("--n", err_n, "particle concentration in 1/m^3")->required();
  err->add_option("--mc", mc, "Monte Carlo samples (0 = skip)");
  err->add_option("--seed", seed, "Monte Carlo seed");

  auto* ingest = app.add_subcommand("ingest", "validate a grid file");
  std::string grid_path;
  bool cdod = false;
  ingest->add_option("--check", grid_path, "MDSD-GRID v1 file")->required();
  ingest->add_flag("--cdod", cdod, "also convert CDOD to concentration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, threads, output);
    if (*atten) return cmd_attenuation(freq, temp, pressure, catalog, partition);
    if (*invert) return cmd_invert(a_dust, invert_freq, particles);
    if (*err) return cmd_errprop(err_freq, err_n, mc, seed);
    if (*ingest) return cmd_ingest(grid_path, cdod);
  } catch (const mdsd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const mdsd::Error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
