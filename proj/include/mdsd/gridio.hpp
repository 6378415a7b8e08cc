// SPDX-License-Identifier: Apache-2.0
//
// MDSD-GRID v1 raster files:
//
//   MDSD-GRID v1
//   nx ny xmin xmax ymin ymax
//   ny rows of nx comma-separated values, row 0 on the ymin edge
//
// A NaN value marks an invalid cell. Lines starting with '#' after the
// first line carry metadata and are ignored by the reader.

#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "mdsd/dustphys.hpp"
#include "mdsd/grid.hpp"

namespace mdsd::gridio {

/// Throws IngestError carrying the offending line number.
IntensityGrid read_grid(std::istream& in);
IntensityGrid read_grid_file(const std::filesystem::path& path);

/// Metadata entries are written as "# key=value" lines.
void write_grid(std::ostream& out, const IntensityGrid& grid,
                const std::map<std::string, std::string>& metadata = {});
void write_grid_file(const std::filesystem::path& path, const IntensityGrid& grid,
                     const std::map<std::string, std::string>& metadata = {});

/// Reads a CDOD grid, rejects invalid cells and converts every cell to a
/// concentration in 1/m^3.
IntensityGrid ingest_cdod_grid(const std::filesystem::path& path,
                               const dust::CdodConversion& conv = {});

}  // namespace mdsd::gridio
