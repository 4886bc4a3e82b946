"""Mean-field EIT/EIA spectra of four-level ladder Rydberg ensembles.

Frequencies passed to SchemeParams are in rad/s; use mhz_to_angular for
values quoted in MHz.
"""

from ._rydmf import (
    ConfigError,
    Error,
    RunConfig,
    SchemeParams,
    SolverError,
    __version__,
    angular_to_mhz,
    cesium_eit,
    dressed_eigenvalues,
    load_config,
    mean_field,
    mhz_to_angular,
    parse_config,
    rubidium_eia,
    run_eigen,
    run_sweep,
    steady_state,
    time_evolve,
    validate,
    weak_probe_rho12,
)

__all__ = [
    "ConfigError",
    "Error",
    "RunConfig",
    "SchemeParams",
    "SolverError",
    "__version__",
    "angular_to_mhz",
    "cesium_eit",
    "dressed_eigenvalues",
    "load_config",
    "mean_field",
    "mhz_to_angular",
    "parse_config",
    "rubidium_eia",
    "run_eigen",
    "run_sweep",
    "steady_state",
    "time_evolve",
    "validate",
    "weak_probe_rho12",
]
