// SPDX-License-Identifier: Apache-2.0
//
// End-to-end experiment: for every (season, seed, node count) deploy a
// network, synthesize hourly link attenuation over calibration and season
// sols, estimate baselines, run the detector, invert the isolated dust
// attenuation per link and map it with every configured method, then score
// the maps against the true concentration field once per sol.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mdsd/config.hpp"
#include "mdsd/detect.hpp"
#include "mdsd/dustphys.hpp"
#include "mdsd/errprop.hpp"
#include "mdsd/interp.hpp"

namespace mdsd::scenario {

struct Scenario {
  std::uint64_t seed = 1;
  std::size_t seed_count = 1;  // seeds seed, seed+1, ...
  unsigned threads = 0;        // 0 = hardware concurrency
  std::string output_dir = "mdsd_out";
  bool write_grids = true;

  /// "storm", "calm", or "file" (static CDOD grid from field_grid).
  std::vector<std::string> seasons{"storm", "calm"};
  std::string field_grid;
  std::size_t sols = 10;
  std::size_t calibration_sols = 2;
  double area_width = 120.0;  // km
  double area_height = 60.0;
  std::size_t grid_nx = 64;
  std::size_t grid_ny = 32;
  int eval_hour = 12;

  std::vector<std::size_t> node_counts{20, 50, 100, 200};
  double max_link_length = 15.0;  // km
  double frequency = 1e12;        // Hz
  std::size_t path_points = 16;

  double temperature = 210.0;
  double pressure = 610.0;
  double co2 = 0.9532;
  double n2 = 0.027;
  std::string catalog_path;
  std::string partition_path;

  dust::DustParticles particles;
  double noise_sigma = 0.05;  // dB/km
  detect::DetectionConfig detection;
  std::vector<interp::Method> methods{interp::Method::linear, interp::Method::nearest,
                                      interp::Method::cubic,  interp::Method::rbf,
                                      interp::Method::idw,    interp::Method::kriging};
  double idw_power = 2.0;
  double z = 1.0;
  errprop::UncertaintyBudget budget;

  /// Throws ConfigError for unknown keys or malformed values.
  static Scenario from_config(const Config& cfg);
  Config to_config() const;
  void validate() const;
};

struct MetricsRow {
  std::string season;
  std::string method;
  double ndf = 0.0;
  std::uint64_t seed = 0;
  double mae = 0.0;
  double rho = 0.0;
  double nbias = 0.0;
  double coverage = 0.0;
  std::size_t clamp_count = 0;
  std::optional<long> detect_latency;  // hours from season start
  std::size_t node_count = 0;
  std::string error;  // non-empty when the cell failed
};

struct RunResult {
  std::vector<MetricsRow> rows;
  std::size_t failed_cells = 0;
  double wall_seconds = 0.0;
};

/// CSV with header season,method,ndf,seed,mae,rho,nbias,coverage,
/// clamp_count,detect_latency.
std::string metrics_csv(const std::vector<MetricsRow>& rows);

/// Runs every cell; when write_files is set, writes metrics.csv,
/// manifest.json, detection logs and (optionally) grids under output_dir.
RunResult run_scenario(const Scenario& scenario, bool write_files = true);

}  // namespace mdsd::scenario
