// SPDX-License-Identifier: Apache-2.0

#include "mdsd/scenario.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "mdsd/channel.hpp"
#include "mdsd/error.hpp"
#include "mdsd/evalx.hpp"
#include "mdsd/gridio.hpp"
#include "mdsd/log.hpp"
#include "mdsd/network.hpp"
#include "mdsd/parallel.hpp"
#include "mdsd/random.hpp"
#include "mdsd/spectra.hpp"
#include "mdsd/synthetic_field.hpp"
#include "mdsd/version.hpp"

namespace mdsd::scenario {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (const auto& it : items) {
    if (!out.empty()) out += ",";
    if constexpr (std::is_same_v<T, std::string>) {
      out += it;
    } else {
      out += std::to_string(it);
    }
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared, read-only inputs of every cell.
struct Inputs {
  std::vector<spectra::SpectralLine> catalog;
  spectra::PartitionModel partition;
  std::optional<IntensityGrid> file_field;  // concentration, 1/m^3
};

struct CellOutput {
  std::vector<MetricsRow> rows;  // one per method, scenario order
  std::vector<detect::DetectionLogRow> detection;
  std::string topology_json;
  std::vector<std::pair<std::string, IntensityGrid>> grids;
};

struct Cell {
  std::size_t season_index;
  std::string season;
  std::uint64_t seed;
  std::size_t nodes;
};

std::string cell_stem(const Cell& c) {
  return c.season + "_n" + std::to_string(c.nodes) + "_seed" + std::to_string(c.seed);
}

CellOutput run_cell(const Scenario& sc, const Inputs& in, const Cell& cell) {
  CellOutput out;
  const bool from_file = cell.season == "file";
  GridSpec grid;
  if (from_file) {
    grid = in.file_field->spec();
  } else {
    grid = {{0.0, sc.area_width, 0.0, sc.area_height}, sc.grid_nx, sc.grid_ny};
  }
  const Extent area = grid.extent;
  const double ndf = network::node_density_factor(cell.nodes, sc.max_link_length, area.area());

  for (auto m : sc.methods) {
    MetricsRow row;
    row.season = cell.season;
    row.method = std::string(interp::to_string(m));
    row.ndf = ndf;
    row.seed = cell.seed;
    row.node_count = cell.nodes;
    out.rows.push_back(row);
  }
  auto fail_all = [&](const std::string& what) {
    for (auto& r : out.rows) {
      if (r.error.empty()) r.error = what;
    }
  };

  try {
    // Hourly concentration frames: calibration sols are dust free.
    const int cal_hours = static_cast<int>(sc.calibration_sols) * channel::kHoursPerSol;
    const int total_hours = cal_hours + static_cast<int>(sc.sols) * channel::kHoursPerSol;
    channel::FieldSeries field;
    field.frames.reserve(static_cast<std::size_t>(total_hours));
    const IntensityGrid clear(grid, 0.0);
    std::unique_ptr<field::SyntheticField> synthetic;
    if (!from_file) {
      synthetic = std::make_unique<field::SyntheticField>(field::season_from_string(cell.season), area,
                                                          derive_seed(cell.seed, {0x6669656c64ULL}));
    }
    for (int t = 0; t < total_hours; ++t) {
      if (t < cal_hours) {
        field.frames.push_back(clear);
      } else if (from_file) {
        field.frames.push_back(*in.file_field);
      } else {
        IntensityGrid f = synthetic->frame(grid, static_cast<double>(t - cal_hours));
        for (double& v : f.values()) v = dust::concentration_from_cdod(v);
        field.frames.push_back(std::move(f));
      }
    }

    const auto topo = network::make_topology(cell.nodes, area, sc.max_link_length, sc.frequency,
                                             derive_seed(cell.seed, {0x746f706fULL, cell.nodes}));
    if (sc.write_grids) out.topology_json = network::topology_to_json(topo);
    if (topo.links.empty()) {
      fail_all("network has no links");
      return out;
    }

    channel::SynthesisContext ctx;
    ctx.atmosphere = spectra::mars_atmosphere(sc.temperature, sc.pressure);
    ctx.atmosphere.composition = {{2, 0, sc.co2, 1.0}, {22, 0, sc.n2, 1.0}};
    ctx.catalog = in.catalog;
    ctx.partition = in.partition;
    ctx.particles = sc.particles;
    ctx.noise = {sc.noise_sigma,
                 derive_seed(cell.seed, {0x6e6f697365ULL, cell.nodes, cell.season_index})};
    ctx.sampling.points = sc.path_points;
    const auto series = channel::synthesize_network(topo.links, field, ctx, 1);
    const double k = channel::link_absorption(topo.links.front(), ctx);

    const std::size_t links = series.size();
    std::vector<std::vector<double>> delta(links);
    std::vector<std::vector<double>> a_dust(links);
    std::size_t clamps = 0;
    for (std::size_t l = 0; l < links; ++l) {
      const auto residual = channel::remove_absorption(series[l], k);
      const auto mask = channel::clear_mask_from_flags(series[l]);
      const auto baseline = channel::estimate_baseline(residual, mask);
      delta[l] = channel::signal_level_change(residual, baseline);
      auto iso = channel::isolate_series(series[l], baseline, k);
      clamps += iso.clamp_count;
      a_dust[l] = std::move(iso.a_dust);
    }

    std::optional<long> latency;
    out.detection = detect::scan(delta, sc.detection);
    if (auto on = detect::onset(out.detection)) {
      latency = static_cast<long>(out.detection[*on].window_start + sc.detection.window) - cal_hours;
    }

    // Midpoint samples carrying the inverted concentration and its variance.
    std::vector<Point2> positions;
    for (const auto& link : topo.links) positions.push_back(link.midpoint());
    const double slope = dust::attenuation_per_particle(sc.particles, sc.frequency);
    std::vector<int> eval_times;
    for (std::size_t s = 0; s < sc.sols; ++s) {
      eval_times.push_back(cal_hours + static_cast<int>(s) * channel::kHoursPerSol + sc.eval_hour);
    }
    std::vector<std::vector<double>> values(eval_times.size(), std::vector<double>(links));
    std::vector<std::vector<double>> variances(eval_times.size(), std::vector<double>(links));
    std::vector<IntensityGrid> truth;
    for (std::size_t e = 0; e < eval_times.size(); ++e) {
      const auto t = static_cast<std::size_t>(eval_times[e]);
      for (std::size_t l = 0; l < links; ++l) {
        const double n = dust::concentration_from_attenuation(a_dust[l][t], sc.particles, sc.frequency);
        const auto vc = errprop::variance_components({sc.particles, n}, sc.frequency, sc.budget);
        const double var_a = vc.total_sigma * vc.total_sigma + sc.noise_sigma * sc.noise_sigma;
        values[e][l] = n;
        variances[e][l] = var_a / (slope * slope);
      }
      truth.push_back(field.frames[t]);
    }

    for (std::size_t mi = 0; mi < sc.methods.size(); ++mi) {
      auto& row = out.rows[mi];
      row.clamp_count = clamps;
      row.detect_latency = latency;
      try {
        interp::InterpConfig icfg;
        icfg.method = sc.methods[mi];
        icfg.idw_power = sc.idw_power;
        icfg.z = sc.z;
        icfg.weight_length = sc.max_link_length;
        const interp::Interpolator interpolator(positions, grid, icfg);
        std::vector<IntensityGrid> pred;
        for (std::size_t e = 0; e < eval_times.size(); ++e) {
          pred.push_back(interpolator.apply(values[e], variances[e]));
        }
        const auto report = eval::evaluate(pred, truth);
        row.mae = report.mae;
        row.rho = report.rho;
        row.nbias = report.nbias;
        row.coverage = report.coverage;
        if (sc.write_grids) out.grids.emplace_back(row.method, std::move(pred.back()));
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
    if (sc.write_grids) out.grids.emplace_back("truth", truth.back());
  } catch (const Error& e) {
    fail_all(e.what());
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

Scenario Scenario::from_config(const Config& cfg) {
  Scenario s;
  s.seed = cfg.get_uint("run.seed", s.seed);
  s.seed_count = cfg.get_uint("run.seeds", s.seed_count);
  s.threads = static_cast<unsigned>(cfg.get_uint("run.threads", s.threads));
  s.output_dir = cfg.get_string("run.output", s.output_dir);
  s.write_grids = cfg.get_bool("run.write_grids", s.write_grids);

  s.seasons = cfg.get_list("field.seasons", s.seasons);
  s.field_grid = cfg.get_string("field.grid", s.field_grid);
  s.sols = cfg.get_uint("field.sols", s.sols);
  s.calibration_sols = cfg.get_uint("field.calibration_sols", s.calibration_sols);
  s.eval_hour = static_cast<int>(cfg.get_int("field.eval_hour", s.eval_hour));
  s.area_width = cfg.get_double("area.width", s.area_width);
  s.area_height = cfg.get_double("area.height", s.area_height);
  s.grid_nx = cfg.get_uint("grid.nx", s.grid_nx);
  s.grid_ny = cfg.get_uint("grid.ny", s.grid_ny);

  if (cfg.has("network.nodes")) {
    s.node_counts.clear();
    for (const auto& item : cfg.get_list("network.nodes", {})) {
      std::size_t n = 0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
      if (ec != std::errc() || ptr != item.data() + item.size()) {
        throw ConfigError("network.nodes: '" + item + "' is not a node count");
      }
      s.node_counts.push_back(n);
    }
  }
  s.max_link_length = cfg.get_double("network.max_link_length", s.max_link_length);
  s.frequency = cfg.get_double("network.frequency", s.frequency);
  s.path_points = cfg.get_uint("network.path_points", s.path_points);

  s.temperature = cfg.get_double("atmosphere.temperature", s.temperature);
  s.pressure = cfg.get_double("atmosphere.pressure", s.pressure);
  s.co2 = cfg.get_double("atmosphere.co2", s.co2);
  s.n2 = cfg.get_double("atmosphere.n2", s.n2);
  s.catalog_path = cfg.get_string("atmosphere.catalog", s.catalog_path);
  s.partition_path = cfg.get_string("atmosphere.partition", s.partition_path);

  s.particles.mean_radius = cfg.get_double("dust.radius", s.particles.mean_radius);
  s.particles.eps_real = cfg.get_double("dust.eps_real", s.particles.eps_real);
  s.particles.eps_imag = cfg.get_double("dust.eps_imag", s.particles.eps_imag);
  s.noise_sigma = cfg.get_double("noise.sigma", s.noise_sigma);

  s.detection.rho_threshold = cfg.get_double("detect.rho_threshold", s.detection.rho_threshold);
  s.detection.alpha = cfg.get_double("detect.alpha", s.detection.alpha);
  s.detection.window = cfg.get_uint("detect.window", s.detection.window);

  if (cfg.has("interp.methods")) {
    s.methods.clear();
    for (const auto& m : cfg.get_list("interp.methods", {})) s.methods.push_back(interp::method_from_string(m));
  }
  s.idw_power = cfg.get_double("interp.idw_power", s.idw_power);
  s.z = cfg.get_double("interp.z", s.z);

  s.budget.sigma_r = cfg.get_double("budget.sigma_r", s.budget.sigma_r);
  s.budget.sigma_eps_real = cfg.get_double("budget.sigma_eps_real", s.budget.sigma_eps_real);
  s.budget.sigma_eps_imag = cfg.get_double("budget.sigma_eps_imag", s.budget.sigma_eps_imag);
  s.budget.sigma_N_rel = cfg.get_double("budget.sigma_n_rel", s.budget.sigma_N_rel);

  cfg.reject_unused();
  s.validate();
  return s;
}

Config Scenario::to_config() const {
  Config c;
  c.set("run.seed", std::to_string(seed));
  c.set("run.seeds", std::to_string(seed_count));
  c.set("run.threads", std::to_string(threads));
  c.set("run.output", output_dir);
  c.set("run.write_grids", write_grids ? "true" : "false");
  c.set("field.seasons", join(seasons));
  if (!field_grid.empty()) c.set("field.grid", field_grid);
  c.set("field.sols", std::to_string(sols));
  c.set("field.calibration_sols", std::to_string(calibration_sols));
  c.set("field.eval_hour", std::to_string(eval_hour));
  c.set("area.width", fmt(area_width));
  c.set("area.height", fmt(area_height));
  c.set("grid.nx", std::to_string(grid_nx));
  c.set("grid.ny", std::to_string(grid_ny));
  c.set("network.nodes", join(node_counts));
  c.set("network.max_link_length", fmt(max_link_length));
  c.set("network.frequency", fmt(frequency));
  c.set("network.path_points", std::to_string(path_points));
  c.set("atmosphere.temperature", fmt(temperature));
  c.set("atmosphere.pressure", fmt(pressure));
  c.set("atmosphere.co2", fmt(co2));
  c.set("atmosphere.n2", fmt(n2));
  if (!catalog_path.empty()) c.set("atmosphere.catalog", catalog_path);
  if (!partition_path.empty()) c.set("atmosphere.partition", partition_path);
  c.set("dust.radius", fmt(particles.mean_radius));
  c.set("dust.eps_real", fmt(particles.eps_real));
  c.set("dust.eps_imag", fmt(particles.eps_imag));
  c.set("noise.sigma", fmt(noise_sigma));
  c.set("detect.rho_threshold", fmt(detection.rho_threshold));
  c.set("detect.alpha", fmt(detection.alpha));
  c.set("detect.window", std::to_string(detection.window));
  std::vector<std::string> names;
  for (auto m : methods) names.emplace_back(interp::to_string(m));
  c.set("interp.methods", join(names));
  c.set("interp.idw_power", fmt(idw_power));
  c.set("interp.z", fmt(z));
  c.set("budget.sigma_r", fmt(budget.sigma_r));
  c.set("budget.sigma_eps_real", fmt(budget.sigma_eps_real));
  c.set("budget.sigma_eps_imag", fmt(budget.sigma_eps_imag));
  c.set("budget.sigma_n_rel", fmt(budget.sigma_N_rel));
  return c;
}

void Scenario::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(seed_count >= 1, "run.seeds must be >= 1");
  require(!seasons.empty(), "field.seasons must not be empty");
  for (const auto& s : seasons) {
    require(s == "storm" || s == "calm" || s == "file", "unknown season '" + s + "'");
    if (s == "file") {
      require(!field_grid.empty(), "season 'file' needs field.grid");
      require(std::ifstream(field_grid).good(), "cannot read field.grid " + field_grid);
    }
  }
  require(sols >= 1, "field.sols must be >= 1");
  require(calibration_sols >= 1, "field.calibration_sols must be >= 1");
  require(eval_hour >= 0 && eval_hour < channel::kHoursPerSol, "field.eval_hour must be in [0, 23]");
  require(area_width > 0.0 && area_height > 0.0, "area must be positive");
  require(grid_nx >= 1 && grid_ny >= 1, "grid dimensions must be >= 1");
  require(!node_counts.empty(), "network.nodes must not be empty");
  for (auto n : node_counts) require(n >= 2, "node counts must be >= 2");
  require(max_link_length > 0.0, "network.max_link_length must be > 0");
  require(frequency > 0.0, "network.frequency must be > 0");
  require(path_points >= 1, "network.path_points must be >= 1");
  require(noise_sigma >= 0.0, "noise.sigma must be >= 0");
  require(!methods.empty(), "interp.methods must not be empty");
  require(idw_power > 0.0, "interp.idw_power must be > 0");
  require(z >= 0.0, "interp.z must be >= 0");
  if (!catalog_path.empty()) require(std::ifstream(catalog_path).good(), "cannot read catalog " + catalog_path);
  if (!partition_path.empty()) {
    require(std::ifstream(partition_path).good(), "cannot read partition table " + partition_path);
  }
  try {
    particles.validate();
    detection.validate();
    budget.validate();
    spectra::mars_atmosphere(temperature, pressure).validate();
    require(co2 >= 0.0 && n2 >= 0.0 && co2 + n2 <= 1.0, "mixing ratios must be >= 0 and sum to <= 1");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "season,method,ndf,seed,mae,rho,nbias,coverage,clamp_count,detect_latency\n";
  char buf[512];
  for (const auto& r : rows) {
    const std::string latency = r.detect_latency ? std::to_string(*r.detect_latency) : "NA";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool ok = r.error.empty();
    std::snprintf(buf, sizeof buf, "%s,%s,%.9g,%llu,%.9g,%.9g,%.9g,%.9g,%zu,%s\n", r.season.c_str(),
                  r.method.c_str(), r.ndf, static_cast<unsigned long long>(r.seed), ok ? r.mae : nan,
                  ok ? r.rho : nan, ok ? r.nbias : nan, ok ? r.coverage : nan, r.clamp_count,
                  latency.c_str());
    out += buf;
  }
  return out;
}

RunResult run_scenario(const Scenario& sc, bool write_files) {
  const auto started = std::chrono::steady_clock::now();
  sc.validate();

  Inputs in;
  if (!sc.catalog_path.empty()) {
    in.catalog = spectra::parse_line_catalog(read_text(sc.catalog_path), {},
                                             {0.0, std::numeric_limits<double>::infinity()});
  }
  if (!sc.partition_path.empty()) in.partition = spectra::parse_partition_table(read_text(sc.partition_path));
  for (const auto& s : sc.seasons) {
    if (s == "file" && !in.file_field) in.file_field = gridio::ingest_cdod_grid(sc.field_grid);
  }

  std::vector<Cell> cells;
  for (std::size_t si = 0; si < sc.seasons.size(); ++si) {
    for (std::size_t k = 0; k < sc.seed_count; ++k) {
      for (auto n : sc.node_counts) cells.push_back({si, sc.seasons[si], sc.seed + k, n});
    }
  }
  std::vector<CellOutput> outputs(cells.size());
  parallel_for(cells.size(), sc.threads, [&](std::size_t i) { outputs[i] = run_cell(sc, in, cells[i]); });

  // Rows ordered by season, method, node count, seed.
  RunResult result;
  for (std::size_t si = 0; si < sc.seasons.size(); ++si) {
    for (std::size_t mi = 0; mi < sc.methods.size(); ++mi) {
      for (auto n : sc.node_counts) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i].season_index != si || cells[i].nodes != n) continue;
          result.rows.push_back(outputs[i].rows[mi]);
        }
      }
    }
  }
  for (const auto& r : result.rows) {
    if (!r.error.empty()) {
      ++result.failed_cells;
      log::warn(r.season + "/" + r.method + "/n=" + std::to_string(r.node_count) + "/seed=" +
                std::to_string(r.seed) + ": " + r.error);
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!write_files) return result;

  const fs::path root(sc.output_dir);
  fs::create_directories(root / "detection");
  if (sc.write_grids) {
    fs::create_directories(root / "grids");
    fs::create_directories(root / "topology");
  }
  write_file(root / "metrics.csv", metrics_csv(result.rows));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto stem = cell_stem(cells[i]);
    std::ostringstream log_text;
    detect::write_detection_log_csv(log_text, outputs[i].detection);
    write_file(root / "detection" / (stem + ".csv"), log_text.str());
    if (!sc.write_grids) continue;
    if (!outputs[i].topology_json.empty()) {
      write_file(root / "topology" / (stem + ".json"), outputs[i].topology_json);
    }
    for (const auto& [name, g] : outputs[i].grids) {
      gridio::write_grid_file(root / "grids" / (stem + "_" + name + ".grid"), g,
                              {{"method", name}, {"quantity", "concentration_per_m3"}, {"sol", std::to_string(sc.sols - 1)}});
    }
  }

  nlohmann::json manifest;
  manifest["tool"] = "mdsd";
  manifest["version"] = kVersion;
  manifest["config"] = sc.to_config().to_text();
  manifest["seeds"] = nlohmann::json::array();
  for (std::size_t k = 0; k < sc.seed_count; ++k) manifest["seeds"].push_back(sc.seed + k);
  manifest["rows"] = result.rows.size();
  manifest["failed_cells"] = result.failed_cells;
  manifest["errors"] = nlohmann::json::array();
  for (const auto& r : result.rows) {
    if (r.error.empty()) continue;
    manifest["errors"].push_back(
        {{"season", r.season}, {"method", r.method}, {"nodes", r.node_count}, {"seed", r.seed}, {"error", r.error}});
  }
  manifest["wall_seconds"] = result.wall_seconds;
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace mdsd::scenario
