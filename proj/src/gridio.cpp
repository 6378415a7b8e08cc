// SPDX-License-Identifier: Apache-2.0

#include "mdsd/gridio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "mdsd/error.hpp"

namespace mdsd::gridio {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_value(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field == "NaN" || field == "nan" || field == "NAN") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw IngestError(line, "not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) throw IngestError(line, "non-finite value '" + std::string(field) + "'");
  return v;
}

// Next non-metadata line; false at end of input.
bool next_line(std::istream& in, std::string& text, std::size_t& line) {
  while (std::getline(in, text)) {
    ++line;
    const auto t = trim(text);
    if (!t.empty() && t.front() == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

IntensityGrid read_grid(std::istream& in) {
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) throw IngestError(1, "empty grid file");
  line = 1;
  const auto magic = trim(text);
  if (magic.rfind("MDSD-GRID", 0) != 0) throw IngestError(1, "missing MDSD-GRID header");
  if (magic != "MDSD-GRID v1") {
    throw IngestError(1, "unsupported grid version '" + std::string(magic) + "'");
  }

  if (!next_line(in, text, line)) throw IngestError(line + 1, "missing dimension line");
  GridSpec spec;
  {
    std::istringstream ss(text);
    long long nx = 0, ny = 0;
    std::string extra;
    if (!(ss >> nx >> ny >> spec.extent.xmin >> spec.extent.xmax >> spec.extent.ymin >>
          spec.extent.ymax) ||
        (ss >> extra)) {
      throw IngestError(line, "expected 'nx ny xmin xmax ymin ymax'");
    }
    if (nx <= 0 || ny <= 0) throw IngestError(line, "grid dimensions must be positive");
    spec.nx = static_cast<std::size_t>(nx);
    spec.ny = static_cast<std::size_t>(ny);
    if (!(spec.extent.xmax > spec.extent.xmin) || !(spec.extent.ymax > spec.extent.ymin)) {
      throw IngestError(line, "empty extent");
    }
  }

  IntensityGrid grid(spec, 0.0);
  for (std::size_t iy = 0; iy < spec.ny; ++iy) {
    if (!next_line(in, text, line)) {
      throw IngestError(line + 1, "expected " + std::to_string(spec.ny) + " rows, found " +
                                      std::to_string(iy));
    }
    std::string_view rest = text;
    std::size_t ix = 0;
    for (;;) {
      const auto comma = rest.find(',');
      const auto field = rest.substr(0, comma);
      if (ix >= spec.nx) {
        throw IngestError(line, "ragged row: more than " + std::to_string(spec.nx) + " values");
      }
      const double v = parse_value(field, line);
      grid.set(iy * spec.nx + ix, std::isnan(v) ? 0.0 : v, !std::isnan(v));
      ++ix;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (ix != spec.nx) {
      throw IngestError(line, "ragged row: " + std::to_string(ix) + " values, expected " +
                                  std::to_string(spec.nx));
    }
  }
  while (next_line(in, text, line)) {
    if (!trim(text).empty()) throw IngestError(line, "unexpected data after the last row");
  }
  return grid;
}

IntensityGrid read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(0, "cannot open " + path.string());
  return read_grid(in);
}

void write_grid(std::ostream& out, const IntensityGrid& grid,
                const std::map<std::string, std::string>& metadata) {
  const auto& s = grid.spec();
  char buf[128];
  out << "MDSD-GRID v1\n";
  std::snprintf(buf, sizeof buf, "%zu %zu ", s.nx, s.ny);
  out << buf;
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", s.extent.xmin, s.extent.xmax,
                s.extent.ymin, s.extent.ymax);
  out << buf;
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  for (std::size_t iy = 0; iy < s.ny; ++iy) {
    for (std::size_t ix = 0; ix < s.nx; ++ix) {
      if (ix) out << ',';
      const std::size_t i = iy * s.nx + ix;
      if (!grid.mask()[i]) {
        out << "NaN";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", grid.values()[i]);
        out << buf;
      }
    }
    out << '\n';
  }
}

void write_grid_file(const std::filesystem::path& path, const IntensityGrid& grid,
                     const std::map<std::string, std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_grid(out, grid, metadata);
}

IntensityGrid ingest_cdod_grid(const std::filesystem::path& path, const dust::CdodConversion& conv) {
  IntensityGrid grid = read_grid_file(path);
  if (grid.valid_count() != grid.size()) {
    throw IngestError(0, "CDOD grid has invalid (NaN) cells; a full field is required");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double cdod = grid.values()[i];
    if (cdod < 0.0) throw IngestError(0, "negative CDOD at cell " + std::to_string(i));
    grid.values()[i] = dust::concentration_from_cdod(cdod, conv);
  }
  return grid;
}

}  // namespace mdsd::gridio
