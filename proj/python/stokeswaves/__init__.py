"""Small-amplitude Stokes waves with surface tension and constant vorticity."""

from ._stokes import (
    ConfigError,
    DomainError,
    MisuseError,
    NumericalError,
    PhysicalParams,
    SpectralGrid,
    StokesError,
    bifurcation_speed,
    bond_numbers,
    classify_kernel,
    dno_apply,
    find_resonant_kappa,
    momentum,
    nonresonant_branch,
    normalize_config,
    omega,
    phase_speed,
    residual,
    resonant_fixed_momentum,
    resonant_fixed_speed,
    run_cli,
    selfcheck,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "MisuseError",
    "NumericalError",
    "PhysicalParams",
    "SpectralGrid",
    "StokesError",
    "bifurcation_speed",
    "bond_numbers",
    "classify_kernel",
    "dno_apply",
    "find_resonant_kappa",
    "momentum",
    "nonresonant_branch",
    "normalize_config",
    "omega",
    "phase_speed",
    "residual",
    "resonant_fixed_momentum",
    "resonant_fixed_speed",
    "run_cli",
    "selfcheck",
]
