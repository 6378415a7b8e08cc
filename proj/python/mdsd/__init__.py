# SPDX-License-Identifier: Apache-2.0
"""Martian dust storm sensing with THz link networks."""

from ._mdsd import (
    ConfigError,
    DomainError,
    IngestError,
    InsufficientDataError,
    MdsdError,
    MethodInfeasibleError,
    ParseError,
    SpectralLine,
    UndefinedMetricError,
    __version__,
    absorption_coefficient,
    absorption_db_per_km,
    concentration_from_attenuation,
    concentration_from_cdod,
    detect_storm,
    doppler_halfwidth,
    dust_attenuation,
    evaluate,
    free_space_path_loss,
    interpolate,
    make_topology_json,
    metrics_csv,
    monte_carlo_sigma,
    node_density_factor,
    parse_line_catalog,
    read_grid,
    run_scenario,
    set_warnings,
    synthetic_field,
    variance_components,
    visibility_from_attenuation,
    write_grid,
)

METHODS = ("linear", "nearest", "cubic", "rbf", "idw", "kriging", "weighted")

__all__ = [name for name in dir() if not name.startswith("_")]
