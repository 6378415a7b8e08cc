// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the mdsd core. Grids cross the boundary as (ny, nx)
// float arrays with NaN marking invalid cells.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mdsd/channel.hpp"
#include "mdsd/config.hpp"
#include "mdsd/detect.hpp"
#include "mdsd/dustphys.hpp"
#include "mdsd/error.hpp"
#include "mdsd/errprop.hpp"
#include "mdsd/evalx.hpp"
#include "mdsd/gridio.hpp"
#include "mdsd/interp.hpp"
#include "mdsd/log.hpp"
#include "mdsd/network.hpp"
#include "mdsd/scenario.hpp"
#include "mdsd/spectra.hpp"
#include "mdsd/synthetic_field.hpp"
#include "mdsd/version.hpp"

namespace py = pybind11;
using namespace mdsd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

dust::DustParticles particles(double radius, double eps_real, double eps_imag) {
  return {radius, eps_real, eps_imag};
}

Array to_array(const IntensityGrid& g) {
  const auto& s = g.spec();
  Array out({s.ny, s.nx});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t iy = 0; iy < s.ny; ++iy) {
    for (std::size_t ix = 0; ix < s.nx; ++ix) {
      v(iy, ix) = g.valid(ix, iy) ? g.value(ix, iy) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

GridSpec grid_spec(const std::vector<double>& extent, std::size_t nx, std::size_t ny) {
  if (extent.size() != 4) throw DomainError("extent must be (xmin, xmax, ymin, ymax)");
  GridSpec g{{extent[0], extent[1], extent[2], extent[3]}, nx, ny};
  g.validate();
  return g;
}

IntensityGrid from_array(const Array& a, const GridSpec& spec) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != spec.ny ||
      static_cast<std::size_t>(a.shape(1)) != spec.nx) {
    throw DomainError("grid array must have shape (ny, nx)");
  }
  IntensityGrid g(spec);
  auto v = a.unchecked<2>();
  for (std::size_t iy = 0; iy < spec.ny; ++iy) {
    for (std::size_t ix = 0; ix < spec.nx; ++ix) {
      const double x = v(iy, ix);
      g.set(iy * spec.nx + ix, std::isnan(x) ? 0.0 : x, !std::isnan(x));
    }
  }
  return g;
}

// (T, ny, nx) stack or a single (ny, nx) grid.
std::vector<IntensityGrid> series_from_array(const Array& a) {
  const GridSpec spec{{0, 1, 0, 1},
                      static_cast<std::size_t>(a.shape(a.ndim() - 1)),
                      static_cast<std::size_t>(a.shape(a.ndim() - 2))};
  std::vector<IntensityGrid> out;
  if (a.ndim() == 2) {
    out.push_back(from_array(a, spec));
    return out;
  }
  if (a.ndim() != 3) throw DomainError("expected a (T, ny, nx) or (ny, nx) array");
  const auto frame = static_cast<py::ssize_t>(spec.size());
  for (py::ssize_t t = 0; t < a.shape(0); ++t) {
    Array slice({spec.ny, spec.nx});
    std::copy(a.data() + t * frame, a.data() + (t + 1) * frame, slice.mutable_data());
    out.push_back(from_array(slice, spec));
  }
  return out;
}

std::vector<Point2> points_from_array(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw DomainError("positions must have shape (n, 2)");
  std::vector<Point2> p(static_cast<std::size_t>(a.shape(0)));
  auto v = a.unchecked<2>();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = {v(i, 0), v(i, 1)};
  return p;
}

std::vector<double> vector_from(const Array& a) { return {a.data(), a.data() + a.size()}; }

py::dict row_dict(const scenario::MetricsRow& r) {
  py::dict d;
  d["season"] = r.season;
  d["method"] = r.method;
  d["ndf"] = r.ndf;
  d["seed"] = r.seed;
  d["node_count"] = r.node_count;
  d["mae"] = r.mae;
  d["rho"] = r.rho;
  d["nbias"] = r.nbias;
  d["coverage"] = r.coverage;
  d["clamp_count"] = r.clamp_count;
  d["detect_latency"] = r.detect_latency ? py::object(py::int_(*r.detect_latency)) : py::none();
  d["error"] = r.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mdsd, m) {
  m.doc() = "Martian dust storm sensing with THz link networks";
  m.attr("__version__") = kVersion;

  static py::exception<Error> base(m, "MdsdError", PyExc_RuntimeError);
  static py::exception<DomainError> domain(m, "DomainError", base.ptr());
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<IngestError> ingest(m, "IngestError", base.ptr());
  static py::exception<ParseError> parse(m, "ParseError", base.ptr());
  static py::exception<InsufficientDataError> insufficient(m, "InsufficientDataError", base.ptr());
  static py::exception<MethodInfeasibleError> infeasible(m, "MethodInfeasibleError", base.ptr());
  static py::exception<UndefinedMetricError> undefined(m, "UndefinedMetricError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      domain(e.what());
    } catch (const ConfigError& e) {
      config(e.what());
    } catch (const IngestError& e) {
      ingest(e.what());
    } catch (const ParseError& e) {
      parse(e.what());
    } catch (const InsufficientDataError& e) {
      insufficient(e.what());
    } catch (const MethodInfeasibleError& e) {
      infeasible(e.what());
    } catch (const UndefinedMetricError& e) {
      undefined(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  m.def("set_warnings", [](bool enabled) {
    if (enabled) {
      mdsd::log::set_warning_sink([](const std::string& msg) {
        py::gil_scoped_acquire gil;
        PyErr_WarnEx(PyExc_RuntimeWarning, msg.c_str(), 1);
      });
    } else {
      mdsd::log::set_warning_sink({});
    }
  }, py::arg("enabled"), "Route library warnings to Python warnings, or discard them.");

  // Dust physics.
  m.def("dust_attenuation",
        [](double n, double f, double r, double e1, double e2) {
          return dust::dust_attenuation({particles(r, e1, e2), n}, f);
        },
        py::arg("concentration"), py::arg("frequency"), py::arg("radius") = 4e-6,
        py::arg("eps_real") = 1.55, py::arg("eps_imag") = 6.3, "Dust attenuation in dB/km.");
  m.def("concentration_from_attenuation",
        [](double a, double f, double r, double e1, double e2) {
          return dust::concentration_from_attenuation(a, particles(r, e1, e2), f);
        },
        py::arg("a_dust"), py::arg("frequency"), py::arg("radius") = 4e-6,
        py::arg("eps_real") = 1.55, py::arg("eps_imag") = 6.3);
  m.def("visibility_from_attenuation",
        [](double a, double f, double r, double e1, double e2) {
          return dust::visibility_from_attenuation(a, particles(r, e1, e2), f);
        },
        py::arg("a_dust"), py::arg("frequency"), py::arg("radius") = 4e-6,
        py::arg("eps_real") = 1.55, py::arg("eps_imag") = 6.3, "Visibility in km.");
  m.def("concentration_from_cdod", [](double cdod) { return dust::concentration_from_cdod(cdod); },
        py::arg("cdod"));
  m.def("free_space_path_loss", &channel::free_space_path_loss, py::arg("frequency"),
        py::arg("distance_km"));

  // Spectroscopy.
  py::class_<spectra::SpectralLine>(m, "SpectralLine")
      .def_readonly("molecule_id", &spectra::SpectralLine::molecule_id)
      .def_readonly("isotopologue_id", &spectra::SpectralLine::isotopologue_id)
      .def_readonly("center_frequency", &spectra::SpectralLine::center_frequency)
      .def_readonly("reference_intensity", &spectra::SpectralLine::reference_intensity)
      .def_readonly("lower_state_energy", &spectra::SpectralLine::lower_state_energy)
      .def_readonly("molar_mass", &spectra::SpectralLine::molar_mass)
      .def_property_readonly("wavenumber", &spectra::SpectralLine::wavenumber);
  m.def("parse_line_catalog",
        [](const std::string& text, const std::set<int>& gases, double fmin, double fmax) {
          return spectra::parse_line_catalog(text, gases, {fmin, fmax});
        },
        py::arg("text"), py::arg("gases") = std::set<int>{}, py::arg("fmin") = 0.0,
        py::arg("fmax") = std::numeric_limits<double>::infinity());
  m.def("doppler_halfwidth", &spectra::doppler_halfwidth, py::arg("line"), py::arg("temperature"));
  m.def("absorption_coefficient",
        [](const std::vector<spectra::SpectralLine>& catalog, double f, double t, double p) {
          return spectra::absorption_coefficient(spectra::mars_atmosphere(t, p), catalog, f, {});
        },
        py::arg("catalog"), py::arg("frequency"), py::arg("temperature") = 210.0,
        py::arg("pressure") = 610.0, "Molecular absorption coefficient in 1/m.");
  m.def("absorption_db_per_km", &spectra::absorption_db_per_km, py::arg("k"));

  // Error propagation.
  m.def("variance_components",
        [](double n, double f, double sr, double se1, double se2, double sn) {
          const auto v = errprop::variance_components({{}, n}, f, {sr, se1, se2, sn});
          py::dict d;
          d["var_r"] = v.var_r;
          d["var_n"] = v.var_N;
          d["var_eps_real"] = v.var_eps_real;
          d["var_eps_imag"] = v.var_eps_imag;
          d["total_sigma"] = v.total_sigma;
          return d;
        },
        py::arg("concentration"), py::arg("frequency"), py::arg("sigma_r") = 0.4e-6,
        py::arg("sigma_eps_real") = 0.0775, py::arg("sigma_eps_imag") = 0.315,
        py::arg("sigma_n_rel") = 0.2);
  m.def("monte_carlo_sigma",
        [](double n, double f, std::size_t samples, std::uint64_t seed, unsigned threads) {
          py::gil_scoped_release release;
          return errprop::monte_carlo_sigma({{}, n}, f, {}, samples, seed, threads);
        },
        py::arg("concentration"), py::arg("frequency"), py::arg("samples") = 100000,
        py::arg("seed") = 0, py::arg("threads") = 1);

  // Detection.
  m.def("detect_storm",
        [](const Array& windows, double rho_threshold, double alpha) {
          if (windows.ndim() != 2) throw DomainError("windows must have shape (links, samples)");
          const auto len = static_cast<std::size_t>(windows.shape(1));
          std::vector<std::span<const double>> spans;
          for (py::ssize_t i = 0; i < windows.shape(0); ++i) spans.emplace_back(windows.data(i, 0), len);
          const auto r = detect::detect_storm(spans, {rho_threshold, alpha, std::max<std::size_t>(len, 3)});
          py::dict d;
          d["detected"] = r.detected;
          d["rho_bar"] = r.rho_bar;
          d["mean_delta"] = r.mean_delta;
          d["usable_links"] = r.usable_links;
          return d;
        },
        py::arg("windows"), py::arg("rho_threshold") = 0.7, py::arg("alpha") = 1.0);

  // Network.
  m.def("node_density_factor",
        py::overload_cast<std::size_t, double, double>(&network::node_density_factor),
        py::arg("node_count"), py::arg("max_link_length"), py::arg("area"));
  m.def("make_topology_json",
        [](std::size_t n, const std::vector<double>& extent, double lmax, double f, std::uint64_t seed) {
          const auto g = grid_spec(extent, 1, 1);
          return network::topology_to_json(network::make_topology(n, g.extent, lmax, f, seed));
        },
        py::arg("node_count"), py::arg("extent"), py::arg("max_link_length") = 15.0,
        py::arg("frequency") = 1e12, py::arg("seed") = 0);

  // Interpolation.
  m.def("interpolate",
        [](const Array& positions, const Array& values, const std::vector<double>& extent,
           std::size_t nx, std::size_t ny, const std::string& method, std::optional<Array> variances,
           double idw_power, double z) {
          interp::InterpConfig cfg;
          cfg.method = interp::method_from_string(method);
          cfg.idw_power = idw_power;
          cfg.z = z;
          const auto pts = points_from_array(positions);
          const auto vals = vector_from(values);
          if (vals.size() != pts.size()) throw DomainError("values and positions differ in length");
          std::vector<double> var = variances ? vector_from(*variances) : std::vector<double>{};
          IntensityGrid out;
          {
            py::gil_scoped_release release;
            out = interp::Interpolator(pts, grid_spec(extent, nx, ny), cfg).apply(vals, var);
          }
          return to_array(out);
        },
        py::arg("positions"), py::arg("values"), py::arg("extent"), py::arg("nx"), py::arg("ny"),
        py::arg("method") = "linear", py::arg("variances") = py::none(), py::arg("idw_power") = 2.0,
        py::arg("z") = 1.0, "Grid of shape (ny, nx); NaN marks cells outside the method's support.");

  // Evaluation.
  m.def("evaluate",
        [](const Array& pred, const Array& truth) {
          const auto r = eval::evaluate(series_from_array(pred), series_from_array(truth));
          py::dict d;
          d["mae"] = r.mae;
          d["rho"] = r.rho;
          d["nbias"] = r.nbias;
          d["coverage"] = r.coverage;
          return d;
        },
        py::arg("pred"), py::arg("truth"));

  // Grid files and synthetic fields.
  m.def("read_grid",
        [](const std::string& path) {
          const auto g = gridio::read_grid_file(path);
          const auto& e = g.spec().extent;
          return py::make_tuple(to_array(g), std::vector<double>{e.xmin, e.xmax, e.ymin, e.ymax});
        },
        py::arg("path"), "Returns (values, extent).");
  m.def("write_grid",
        [](const std::string& path, const Array& values, const std::vector<double>& extent,
           const std::map<std::string, std::string>& metadata) {
          const auto spec = grid_spec(extent, static_cast<std::size_t>(values.shape(1)),
                                      static_cast<std::size_t>(values.shape(0)));
          gridio::write_grid_file(path, from_array(values, spec), metadata);
        },
        py::arg("path"), py::arg("values"), py::arg("extent"),
        py::arg("metadata") = std::map<std::string, std::string>{});
  m.def("synthetic_field",
        [](const std::string& season, const std::vector<double>& extent, std::size_t nx, std::size_t ny,
           double hour, std::uint64_t seed) {
          const auto spec = grid_spec(extent, nx, ny);
          field::SyntheticField f(field::season_from_string(season), spec.extent, seed);
          return to_array(f.frame(spec, hour));
        },
        py::arg("season"), py::arg("extent"), py::arg("nx"), py::arg("ny"), py::arg("hour") = 0.0,
        py::arg("seed") = 0, "CDOD frame of the synthetic storm or calm field.");

  // End-to-end scenario.
  m.def("run_scenario",
        [](const std::string& config_text, bool write_files) {
          const auto sc = scenario::Scenario::from_config(Config::parse(config_text));
          scenario::RunResult result;
          {
            py::gil_scoped_release release;
            result = scenario::run_scenario(sc, write_files);
          }
          py::list rows;
          for (const auto& r : result.rows) rows.append(row_dict(r));
          return rows;
        },
        py::arg("config_text"), py::arg("write_files") = false,
        "Runs a scenario described by config text; returns one dict per metrics row.");
  m.def("metrics_csv",
        [](const std::string& config_text) {
          const auto sc = scenario::Scenario::from_config(Config::parse(config_text));
          py::gil_scoped_release release;
          return scenario::metrics_csv(scenario::run_scenario(sc, false).rows);
        },
        py::arg("config_text"));
}
