from ._core import (
    Frequency,
    LopaError,
    adjoint_bc,
    box_grid,
    build_dissipative_bc,
    check_hyperbolicity,
    check_maximal_dissipativity,
    find_symmetrizer,
    hemisphere_grid,
    incoming_count,
    kreiss_constant,
    lopatinski_value,
    resolvent_matrix,
    run_cli,
    stable_subspace,
    uniform_scan,
    validate_system,
)

__all__ = [
    "Frequency",
    "LopaError",
    "adjoint_bc",
    "box_grid",
    "build_dissipative_bc",
    "check_hyperbolicity",
    "check_maximal_dissipativity",
    "find_symmetrizer",
    "hemisphere_grid",
    "incoming_count",
    "kreiss_constant",
    "lopatinski_value",
    "resolvent_matrix",
    "run_cli",
    "stable_subspace",
    "uniform_scan",
    "validate_system",
]
