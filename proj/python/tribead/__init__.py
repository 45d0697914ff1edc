"""Three-bead swimmer in a lattice Boltzmann fluid."""

from ._tribead import (
    DriveProtocol,
    Error,
    IoError,
    ParseError,
    RunConfig,
    StabilityError,
    UnknownDesign,
    ValidationError,
    analytic_solution,
    analyze_file,
    defaults,
    driving_forces,
    geometric_factor,
    load_config,
    parse_config,
    read_trajectory,
    reduced_config,
    resonance_scan,
    run_fluid,
    run_vacuum,
    velocity_ga,
)

__all__ = [name for name in dir() if not name.startswith("_")]
