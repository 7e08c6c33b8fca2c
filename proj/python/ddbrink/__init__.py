"""Python front end of the ddbrink solver."""

from ._core import (
    CavityConfig,
    ConfigError,
    DivergenceError,
    IdentityReport,
    compute_rate,
    run_cavity,
    spatial_sweep,
    temporal_sweep,
    verify_identities,
)

__all__ = [
    "CavityConfig",
    "ConfigError",
    "DivergenceError",
    "IdentityReport",
    "compute_rate",
    "run_cavity",
    "spatial_sweep",
    "temporal_sweep",
    "verify_identities",
]
